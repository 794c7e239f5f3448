//! Diagnostics, stability reports, noncollapsing estimation, decay fitting
//! and the empirical inequality audits.

use crate::error::{Error, Result};
use crate::fft::GridShape;
use crate::immersion::{legendrian_deform, DiscreteLegendrian};
use crate::spectral::{covariant_derivative_one_form, spectrum};
use crate::tolerances::{
    AUDIT_SLACK_DT_FACTOR, AUDIT_SLACK_FACTOR, ESSENTIAL_ENERGY_TOL, MINIMALITY_TOL,
    SECOND_VARIATION_STEP, STABILITY_BAND,
};
use serde::{Deserialize, Serialize};

/// Scalar observables recorded at each accepted flow step.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    pub vol: f64,
    pub max_h: f64,
    /// int |H|^2 dmu
    pub l2_h_sq: f64,
    pub max_a_sq: f64,
    pub max_grad_h: f64,
    pub lambda1: f64,
    pub osc_alpha: f64,
    pub mean_alpha: f64,
    /// E(t) = int_0^t max(|A||H| + |H|^2) ds, trapezoid-accumulated
    pub e_t: f64,
    pub kappa: f64,
    pub leg_residual: f64,
}

impl Diagnostics {
    pub const CSV_HEADER: &'static str =
        "t,vol,max_H,l2_H_sq,max_A_sq,lambda1,osc_alpha,mean_alpha,E_t,kappa,leg_residual";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.t,
            self.vol,
            self.max_h,
            self.l2_h_sq,
            self.max_a_sq,
            self.lambda1,
            self.osc_alpha,
            self.mean_alpha,
            self.e_t,
            self.kappa,
            self.leg_residual
        )
    }
}

/// Pointwise max over nodes of |A||H| + |H|^2, the integrand of E(t).
pub fn e_integrand(l: &DiscreteLegendrian) -> f64 {
    let mut worst = 0.0f64;
    for node in 0..l.node_count() {
        let h = l.second.norm_h_sq[node].sqrt();
        let a = l.second.norm_a_sq[node].sqrt();
        worst = worst.max(a * h + h * h);
    }
    worst
}

/// max |nabla H| over nodes.
pub fn max_grad_h(l: &DiscreteLegendrian) -> f64 {
    let n = l.dim();
    let grad = covariant_derivative_one_form(l, &l.second.mean_form);
    let mut worst = 0.0f64;
    for node in 0..l.node_count() {
        let gi = &l.first.metric_inv[node * n * n..(node + 1) * n * n];
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                for a2 in 0..n {
                    for b2 in 0..n {
                        s += gi[a * n + a2]
                            * gi[b * n + b2]
                            * grad[node * n * n + a * n + b]
                            * grad[node * n * n + a2 * n + b2];
                    }
                }
            }
        }
        worst = worst.max(s);
    }
    worst.sqrt()
}

/// Intrinsic-ball noncollapsing constant at scale r:
/// kappa = min over centers and radii s <= r of Vol(B(q,s)) / s^n.
///
/// Curves use exact arc-length ball measure; tori use Dijkstra with a rich
/// neighbour stencil and a linear transition band at the ball boundary.
pub fn noncollapsing(l: &DiscreteLegendrian, r: f64) -> f64 {
    assert!(r > 0.0);
    match l.shape {
        GridShape::Curve { n } => {
            // on a closed curve every intrinsic ball is an arc of length
            // min(2s, L)
            let total = l.first.vol;
            let h_mean = total / n as f64;
            let s_lo = (4.0 * h_mean).min(0.5 * r);
            let mut kappa = f64::INFINITY;
            for k in 0..8 {
                let s = s_lo + (r - s_lo) * k as f64 / 7.0;
                kappa = kappa.min((2.0 * s).min(total) / s);
            }
            kappa
        }
        GridShape::Torus { n1, n2 } => {
            let nn = l.node_count();
            // neighbour offsets: primitive vectors with |a|,|b| <= 3
            let mut offsets = Vec::new();
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    let g = gcd(a.unsigned_abs(), b.unsigned_abs());
                    if g == 1 {
                        offsets.push((a, b));
                    }
                }
            }
            let n = 2usize;
            let du = std::f64::consts::TAU / n1 as f64;
            let dv = std::f64::consts::TAU / n2 as f64;
            let edge_len = |from: usize, to: usize, a: i64, b: i64| -> f64 {
                // metric length of the straight parameter segment, endpoints
                // averaged
                let ta = [a as f64 * du, b as f64 * dv];
                let mut acc = 0.0;
                for node in [from, to] {
                    let g = &l.first.metric[node * n * n..(node + 1) * n * n];
                    let q = g[0] * ta[0] * ta[0] + 2.0 * g[1] * ta[0] * ta[1] + g[3] * ta[1] * ta[1];
                    acc += q.max(0.0).sqrt();
                }
                0.5 * acc
            };
            let centers: Vec<usize> = {
                let step1 = (n1 / 4).max(1);
                let step2 = (n2 / 4).max(1);
                let mut c = Vec::new();
                for i1 in (0..n1).step_by(step1) {
                    for i2 in (0..n2).step_by(step2) {
                        c.push(i1 * n2 + i2);
                    }
                }
                c
            };
            let h_mean = (du * dv).sqrt();
            let s_lo = (4.0 * h_mean).min(0.5 * r);
            let radii: Vec<f64> = (0..6).map(|k| s_lo + (r - s_lo) * k as f64 / 5.0).collect();
            let band = h_mean;
            let mut kappa = f64::INFINITY;
            let mut dist = vec![f64::INFINITY; nn];
            let mut heap = std::collections::BinaryHeap::new();
            for &q in &centers {
                dist.iter_mut().for_each(|d| *d = f64::INFINITY);
                heap.clear();
                dist[q] = 0.0;
                heap.push(std::cmp::Reverse((ordered(0.0), q)));
                while let Some(std::cmp::Reverse((od, node))) = heap.pop() {
                    let dcur = od.0;
                    if dcur > dist[node] + 1e-15 || dcur > r + 2.0 * band {
                        continue;
                    }
                    let i1 = (node / n2) as i64;
                    let i2 = (node % n2) as i64;
                    for &(a, b) in &offsets {
                        let j1 = (i1 + a).rem_euclid(n1 as i64) as usize;
                        let j2 = (i2 + b).rem_euclid(n2 as i64) as usize;
                        let to = j1 * n2 + j2;
                        let w = edge_len(node, to, a, b);
                        let cand = dcur + w;
                        if cand < dist[to] - 1e-15 {
                            dist[to] = cand;
                            heap.push(std::cmp::Reverse((ordered(cand), to)));
                        }
                    }
                }
                for &s in &radii {
                    let mut volb = 0.0;
                    for node in 0..nn {
                        let d = dist[node];
                        if d.is_finite() {
                            let w = ((s - d) / band + 0.5).clamp(0.0, 1.0);
                            volb += w * l.first.dmu[node];
                        }
                    }
                    kappa = kappa.min(volb / s.powi(2));
                }
            }
            let _ = n;
            kappa
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

#[derive(PartialEq, PartialOrd)]
struct ordered(f64);
impl Eq for ordered {}
#[allow(clippy::derive_ord_xor_partial_ord)]
impl Ord for ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.partial_cmp(other).expect("finite distances")
    }
}

/// Least-squares exponential rate of a positive series over a window.
/// Returns (rate, r_squared).
pub fn decay_fit(series: &[(f64, f64)], window: (f64, f64)) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, _)| *t >= window.0 && *t <= window.1)
        .cloned()
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} samples in window",
            pts.len()
        )));
    }
    if pts.iter().any(|(_, v)| *v <= 0.0) {
        return Err(Error::NonPositiveSeries);
    }
    let n = pts.len() as f64;
    let (mut st, mut sy, mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (t, v) in &pts {
        let y = v.ln();
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
        syy += y * y;
    }
    let denom = n * stt - st * st;
    if denom.abs() < 1e-300 {
        return Err(Error::InsufficientData("degenerate time window".into()));
    }
    let rate = (n * sty - st * sy) / denom;
    let ss_tot = syy - sy * sy / n;
    let intercept = (sy - rate * st) / n;
    let mut ss_res = 0.0;
    for (t, v) in &pts {
        let y = v.ln();
        let pred = intercept + rate * t;
        ss_res += (y - pred) * (y - pred);
    }
    let r2 = if ss_tot <= 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok((rate, r2))
}

/// Stability verdict per the first-eigenvalue criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityVerdict {
    StrictlyStable,
    Borderline,
    Unstable,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub lambda1: f64,
    pub k_plus_2: f64,
    pub verdict: StabilityVerdict,
    /// spectrum-formula value sum a_i^2 lambda_i (lambda_i - (K+2))
    pub second_variation_spectral: Option<f64>,
    /// centered second difference of Vol(deform(L, f, +-s))
    pub second_variation_direct: Option<f64>,
    pub relative_gap: Option<f64>,
    /// true when the test potential carries no first-eigenspace energy
    pub essential: bool,
}

/// Stability of a (near-)minimal Legendrian: the eigenvalue criterion always,
/// the second-variation pair when the immersion is minimal within tolerance.
pub fn stability_report(l: &DiscreteLegendrian, f: &[f64]) -> Result<StabilityReport> {
    let modes = 12usize;
    let rep = spectrum(l, modes)?;
    let lambda1 = rep.lambda1();
    let k2 = l.model.eta_einstein_constant;
    let verdict = if lambda1 - k2 > STABILITY_BAND {
        StabilityVerdict::StrictlyStable
    } else if lambda1 - k2 < -STABILITY_BAND {
        StabilityVerdict::Unstable
    } else {
        StabilityVerdict::Borderline
    };

    // spectral coefficients of the potential
    let mut coeffs = Vec::with_capacity(modes);
    for phi in &rep.eigenfunctions {
        let a: f64 = (0..l.node_count())
            .map(|node| f[node] * phi[node] * l.first.dmu[node])
            .sum();
        coeffs.push(a);
    }
    let f_l2_sq: f64 = (0..l.node_count())
        .map(|node| f[node] * f[node] * l.first.dmu[node])
        .sum();
    let band = STABILITY_BAND * (1.0 + lambda1.abs());
    let e1_energy: f64 = rep
        .eigenvalues
        .iter()
        .zip(&coeffs)
        .filter(|(lam, _)| (**lam - lambda1).abs() < band)
        .map(|(_, a)| a * a)
        .sum();
    let essential = e1_energy / f_l2_sq < ESSENTIAL_ENERGY_TOL;

    let minimal = l.second.max_h < MINIMALITY_TOL;
    let (spectral, direct, gap) = if minimal {
        let value: f64 = rep
            .eigenvalues
            .iter()
            .zip(&coeffs)
            .map(|(lam, a)| a * a * lam * (lam - k2))
            .sum();
        let s = SECOND_VARIATION_STEP;
        let lp = legendrian_deform(l, f, s)?;
        let lm = legendrian_deform(l, f, -s)?;
        let d2 = (lp.first.vol - 2.0 * l.first.vol + lm.first.vol) / (s * s);
        let gap = (value - d2).abs() / value.abs().max(d2.abs()).max(1e-14);
        (Some(value), Some(d2), Some(gap))
    } else {
        (None, None, None)
    };

    Ok(StabilityReport {
        lambda1,
        k_plus_2: k2,
        verdict,
        second_variation_spectral: spectral,
        second_variation_direct: direct,
        relative_gap: gap,
        essential,
    })
}

/// The constants defining the membership classes of Legendrian submanifolds.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSet {
    pub kappa0: f64,
    pub r0: f64,
    pub lambda0: f64,
    pub eps0: f64,
    pub delta0: f64,
    pub v0: f64,
}

impl ThresholdSet {
    pub fn validate(&self) -> Result<()> {
        let vals = [
            self.kappa0,
            self.r0,
            self.lambda0,
            self.eps0,
            self.delta0,
            self.v0,
        ];
        if vals.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Schema {
                path: "thresholds".into(),
                message: "all thresholds must be positive".into(),
            });
        }
        Ok(())
    }

    /// Defaults derived from initial diagnostics: the class the initial data
    /// sits in with a little headroom.
    pub fn from_initial(d: &Diagnostics, k_plus_2: f64) -> ThresholdSet {
        ThresholdSet {
            kappa0: (d.kappa * 0.9).max(1e-6),
            r0: 1.0,
            lambda0: d.max_a_sq.sqrt().max(1e-8) * 1.2,
            eps0: d.max_h.max(1e-10) * 1.2,
            delta0: (d.lambda1 - k_plus_2).max(1e-3),
            v0: d.vol * 1.1,
        }
    }
}

/// Membership in the noncollapsed bounded-geometry class (no eigenvalue
/// condition).
pub fn class_a_membership(d: &Diagnostics, ts: &ThresholdSet) -> bool {
    d.kappa >= ts.kappa0 && d.max_a_sq.sqrt() <= ts.lambda0 && d.max_h <= ts.eps0
}

/// Membership in the class with the spectral gap condition.
pub fn class_b_membership(d: &Diagnostics, ts: &ThresholdSet, k_plus_2: f64) -> bool {
    class_a_membership(d, ts) && d.lambda1 >= k_plus_2 + ts.delta0
}

/// One audited inequality over a trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct AuditEntry {
    pub name: String,
    pub pass: bool,
    /// most adverse value of (allowed - actual)/scale; negative = violated
    pub worst_margin: f64,
    pub checked_points: usize,
}

fn series_derivative(ts: &[f64], vs: &[f64]) -> Vec<Option<f64>> {
    // fourth-order central differences in the interior; endpoints skipped
    let n = ts.len();
    let mut out = vec![None; n];
    if n < 5 {
        return out;
    }
    let dt = ts[1] - ts[0];
    for i in 2..n - 2 {
        let d = (-vs[i + 2] + 8.0 * vs[i + 1] - 8.0 * vs[i - 1] + vs[i - 2]) / (12.0 * dt);
        out[i] = Some(d);
    }
    out
}

/// Audits the recorded inequalities with multiplicative slack 1.05 plus an
/// additive 10 dt on the margin scale. Each verdict carries its most adverse
/// margin; a manufactured violation must drive the margin negative.
pub fn bound_audit(
    trajectory: &[Diagnostics],
    k_plus_2: f64,
    n_dim: usize,
    thresholds: &ThresholdSet,
) -> Result<Vec<AuditEntry>> {
    if trajectory.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "{} trajectory samples, need >= 10",
            trajectory.len()
        )));
    }
    let ts: Vec<f64> = trajectory.iter().map(|d| d.t).collect();
    let dt = ts[1] - ts[0];
    let slack = (AUDIT_SLACK_FACTOR - 1.0) + AUDIT_SLACK_DT_FACTOR * dt;

    let l2: Vec<f64> = trajectory.iter().map(|d| d.l2_h_sq).collect();
    let dl2 = series_derivative(&ts, &l2);

    // running sups of |A| and |H|
    let mut run_a = Vec::with_capacity(ts.len());
    let mut run_h = Vec::with_capacity(ts.len());
    let mut wa: f64 = 0.0;
    let mut wh: f64 = 0.0;
    for d in trajectory {
        wa = wa.max(d.max_a_sq.sqrt());
        wh = wh.max(d.max_h);
        run_a.push(wa);
        run_h.push(wh);
    }

    let mut entries = Vec::new();
    let mut push = |name: &str, margins: Vec<f64>| {
        let worst = margins.iter().cloned().fold(f64::INFINITY, f64::min);
        entries.push(AuditEntry {
            name: name.into(),
            pass: worst >= 0.0,
            worst_margin: if margins.is_empty() { f64::INFINITY } else { worst },
            checked_points: margins.len(),
        });
    };

    // (42): d/dt int |H|^2 <= 2 (K+2 + Lambda eps) int |H|^2
    {
        let mut margins = Vec::new();
        for i in 0..ts.len() {
            if let Some(lhs) = dl2[i] {
                let rhs = 2.0 * (k_plus_2 + run_a[i] * run_h[i]) * l2[i];
                let scale = lhs.abs().max(rhs.abs()).max(1e-12);
                margins.push((rhs + slack * scale - lhs) / scale);
            }
        }
        push("H_l2_growth_42", margins);
    }

    // (43): d/dt int |H|^2 <= -2 (lambda1 - (K+2) - Lambda eps) int |H|^2
    {
        let mut margins = Vec::new();
        for i in 0..ts.len() {
            if let Some(lhs) = dl2[i] {
                let rhs =
                    -2.0 * (trajectory[i].lambda1 - k_plus_2 - run_a[i] * run_h[i]) * l2[i];
                let scale = lhs.abs().max(rhs.abs()).max(1e-12);
                margins.push((rhs + slack * scale - lhs) / scale);
            }
        }
        push("H_l2_gap_43", margins);
    }

    // (83): eigenvalue drift under exponential H-decay
    {
        let wseries: Vec<(f64, f64)> = trajectory
            .iter()
            .map(|d| (d.t, d.max_h + d.max_grad_h))
            .collect();
        let mut margins = Vec::new();
        if wseries.iter().all(|(_, v)| *v > 0.0) {
            if let Ok((rate, _)) = decay_fit(&wseries, (ts[0], ts[ts.len() - 1])) {
                if rate < 0.0 {
                    let gamma = -rate;
                    let eps = wseries
                        .iter()
                        .map(|(t, v)| v * (gamma * t).exp())
                        .fold(0.0f64, f64::max);
                    let lam = run_a[ts.len() - 1];
                    let lam1_0 = trajectory[0].lambda1;
                    let floor = (-(2.0 * lam * eps + eps * eps) / (2.0 * gamma)).exp()
                        * lam1_0.max(0.0).sqrt()
                        - lam * eps / gamma;
                    for d in trajectory {
                        let lhs = d.lambda1.max(0.0).sqrt();
                        let scale = lhs.abs().max(floor.abs()).max(1e-12);
                        margins.push((lhs + slack * scale - floor) / scale);
                    }
                }
            }
        }
        push("eigenvalue_floor_83", margins);
    }

    // sup-bound: max|H| <= (1/sqrt(kappa) + max|grad H|) (int |H|^2)^{1/(n+2)}
    {
        let expo = 1.0 / (n_dim as f64 + 2.0);
        let mut margins = Vec::new();
        for d in trajectory {
            if d.l2_h_sq <= thresholds.r0.powi(n_dim as i32 + 2) {
                let rhs = (1.0 / d.kappa.sqrt() + d.max_grad_h) * d.l2_h_sq.powf(expo);
                let scale = d.max_h.abs().max(rhs.abs()).max(1e-12);
                margins.push((rhs + slack * scale - d.max_h) / scale);
            }
        }
        push("sup_bound_13", margins);
    }

    // doubling: on [0, T1], |A| and |H| at most double
    {
        let lam0 = trajectory[0].max_a_sq.sqrt();
        let eps0 = trajectory[0].max_h;
        let t1 = ts[0] + 2.0f64.ln() / (4.0 * lam0 * lam0 + 2.0);
        let mut margins = Vec::new();
        for d in trajectory.iter().filter(|d| d.t <= t1) {
            let scale_a = (2.0 * lam0).max(1e-12);
            margins.push((2.0 * lam0 + slack * scale_a - d.max_a_sq.sqrt()) / scale_a);
            let scale_h = (2.0 * eps0).max(1e-12);
            margins.push((2.0 * eps0 + slack * scale_h - d.max_h) / scale_h);
        }
        push("doubling_9", margins);
    }

    // noncollapsing: kappa(t) >= kappa(0) e^{-(n+1) E(t)}
    {
        let kappa0 = trajectory[0].kappa;
        let mut margins = Vec::new();
        for d in trajectory {
            let floor = kappa0 * (-(n_dim as f64 + 1.0) * d.e_t).exp();
            let scale = d.kappa.abs().max(floor.abs()).max(1e-12);
            margins.push((d.kappa + slack * scale - floor) / scale);
        }
        push("noncollapsing_8", margins);
    }

    Ok(entries)
}

/// Sup over nodes of the chart distance to the closest node of a reference
/// immersion (periodic coordinates compared on the circle).
pub fn sup_chart_distance(l: &DiscreteLegendrian, reference: &DiscreteLegendrian) -> f64 {
    let d = l.chart_dim();
    let phi_slot = match l.model.kind {
        crate::ambient::ModelKind::HyperbolicCylinder3 => Some(1),
        _ => None,
    };
    let mut worst = 0.0f64;
    for i in 0..l.node_count() {
        let p = &l.positions[i * d..(i + 1) * d];
        let mut best = f64::INFINITY;
        for j in 0..reference.node_count() {
            let q = &reference.positions[j * d..(j + 1) * d];
            let mut s = 0.0;
            for c in 0..d {
                let mut diff = p[c] - q[c];
                if Some(c) == phi_slot {
                    diff = (diff + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU)
                        - std::f64::consts::PI;
                }
                s += diff * diff;
            }
            best = best.min(s);
        }
        worst = worst.max(best.sqrt());
    }
    worst
}
