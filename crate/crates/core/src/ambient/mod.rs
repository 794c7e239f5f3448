//! The three eta-Einstein Sasakian model families.
//!
//! Conventions, fixed here and relied on everywhere else:
//!
//! * omega is the half-normalised exterior derivative of the contact form,
//!   `omega(X,Y) = (X lam(Y) - Y lam(X) - lam([X,Y])) / 2`, so that
//!   `nabla lam = omega` holds with the Reeb field a unit Killing field.
//! * `J = nabla T` as a (1,1) tensor; `omega(X,Y) = g(JX, Y)`.
//! * Curvature sign: `R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
//!   nabla_{[X,Y]} Z`, stored lowered as `R_{abcd} = g(R(e_c,e_d) e_b, e_a)`,
//!   which makes `R^e_{gab} lam_e = g_{gb} lam_a - g_{ga} lam_b` hold with
//!   a plus sign on the round sphere.
//!
//! Calibration of the group models (the contact scale is not free once the
//! three conditions lam(T)=1, nabla lam = omega and J^2 = -pi are imposed
//! together):
//!
//! * Heisenberg: lam = dz - sum_i y_i dx_i, T = d/dz, transverse metric
//!   (1/2) sum_i (dx_i^2 + dy_i^2). The flat transverse geometry gives
//!   K + 2 = 0.
//! * Hyperbolic cylinder: base dr^2 + cosh^2(r) dphi^2 (Gauss curvature -1,
//!   phi of period 2 pi), lam = dz + 2 sinh(r) dphi, T = d/dz. The doubled
//!   potential is what J^2 = -pi forces once the base metric is kept at
//!   curvature -1, and it yields K + 2 = -1.
//! * Spheres: embedded coordinates in R^{2n+2} with the tangential-projection
//!   connection; K + 2 = 2n + 2.

pub mod chart;
mod heisenberg;
mod homogeneous;
mod hypcyl;
mod invariants;
mod sphere;

pub use invariants::{
    ambient_identity_residuals, fit_eta_einstein_constant, AmbientResidualReport, ResidualEntry,
};

/// Metric jets of the Heisenberg chart, exposed for oracle tests.
pub fn heisenberg_jets(n: usize) -> heisenberg::HeisenbergJets {
    heisenberg::jets(n)
}

/// Metric jets of the hyperbolic-cylinder chart, exposed for oracle tests.
pub fn hypcyl_jets() -> hypcyl::HypCylJets {
    hypcyl::jets()
}

/// Stereographic-chart jets of the round sphere S^m.
pub fn sphere_stereographic_jets(m: usize) -> sphere::StereographicJets {
    sphere::StereographicJets { m }
}

use crate::error::{Error, Result};
use crate::tensor::{T2, T3, T4, T5};
use crate::tolerances::FD_CURVATURE_STEP;
use serde::{Deserialize, Serialize};

/// Which of the five concrete models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    HeisenbergR3,
    HeisenbergR5,
    SphereS3,
    SphereS5,
    HyperbolicCylinder3,
}

impl ModelKind {
    pub fn id(&self) -> &'static str {
        match self {
            ModelKind::HeisenbergR3 => "heisenberg3",
            ModelKind::HeisenbergR5 => "heisenberg5",
            ModelKind::SphereS3 => "sphere3",
            ModelKind::SphereS5 => "sphere5",
            ModelKind::HyperbolicCylinder3 => "hypcyl3",
        }
    }

    pub fn from_id(id: &str) -> Option<ModelKind> {
        match id {
            "heisenberg3" => Some(ModelKind::HeisenbergR3),
            "heisenberg5" => Some(ModelKind::HeisenbergR5),
            "sphere3" => Some(ModelKind::SphereS3),
            "sphere5" => Some(ModelKind::SphereS5),
            "hypcyl3" => Some(ModelKind::HyperbolicCylinder3),
            _ => None,
        }
    }
}

/// How curvature tensors are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvaluationMode {
    ClosedForm,
    /// Central differences on the Christoffel field (group charts). The
    /// sphere curvature is exact in embedded form and is returned as such in
    /// both modes; its independent oracle is the stereographic chart.
    FiniteDifference,
}

/// Point in a model's global chart. Sphere points live in R^{2n+2} and must
/// be unit; the hyperbolic cylinder carries phi in a periodic slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        ChartPoint { coords }
    }
}

/// Pointwise contact-metric data.
#[derive(Debug, Clone)]
pub struct AmbientFrame {
    /// Chart metric (projected metric P for spheres).
    pub g: T2,
    /// Inverse metric (the projector again for spheres; it inverts g on
    /// tangent tensors, which is the only place it is used).
    pub ginv: T2,
    /// Contact form lam_a.
    pub lambda: Vec<f64>,
    /// Reeb field T^a.
    pub reeb: Vec<f64>,
    /// j.get(b, a) = J^b_a.
    pub j: T2,
    /// omega_{ab}, the half-normalised d lam.
    pub omega: T2,
}

/// Curvature tensors at a point.
#[derive(Debug, Clone)]
pub struct CurvaturePack {
    pub riemann: T4,
    pub ricci: T2,
    pub nabla_riemann: T5,
    pub mode: EvaluationMode,
}

/// An eta-Einstein Sasakian model space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SasakianModel {
    pub kind: ModelKind,
    /// Legendrian dimension (1 or 2).
    pub n: usize,
    /// Manifold dimension 2n + 1.
    pub ambient_dim: usize,
    /// Dimension of the working chart: 2n+1 for the group models, 2n+2 for
    /// the embedded spheres.
    pub chart_dim: usize,
    /// K + 2.
    pub eta_einstein_constant: f64,
    /// K_m = sum_{k<=m} sup |nabla^k Rm| for m = 0..5.
    pub curvature_bounds: Vec<f64>,
    /// Documented model constant iota_0.
    pub injectivity_lower_bound: f64,
}

impl SasakianModel {
    pub fn new(kind: ModelKind) -> Self {
        let (n, chart_dim) = match kind {
            ModelKind::HeisenbergR3 => (1, 3),
            ModelKind::HeisenbergR5 => (2, 5),
            ModelKind::SphereS3 => (1, 4),
            ModelKind::SphereS5 => (2, 6),
            ModelKind::HyperbolicCylinder3 => (1, 3),
        };
        let eta = match kind {
            ModelKind::HeisenbergR3 | ModelKind::HeisenbergR5 => 0.0,
            ModelKind::SphereS3 => 4.0,
            ModelKind::SphereS5 => 6.0,
            ModelKind::HyperbolicCylinder3 => -1.0,
        };
        let iota = match kind {
            ModelKind::SphereS3 | ModelKind::SphereS5 => std::f64::consts::PI,
            // conservative nominal values for the noncompact models
            _ => std::f64::consts::FRAC_PI_2,
        };
        let curvature_bounds = homogeneous::curvature_bounds(kind);
        SasakianModel {
            kind,
            n,
            ambient_dim: 2 * n + 1,
            chart_dim,
            eta_einstein_constant: eta,
            curvature_bounds,
            injectivity_lower_bound: iota,
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        ModelKind::from_id(id)
            .map(SasakianModel::new)
            .ok_or_else(|| Error::Schema {
                path: "model".into(),
                message: format!("unknown model id `{id}`"),
            })
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self.kind, ModelKind::SphereS3 | ModelKind::SphereS5)
    }

    pub fn validate_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.chart_dim {
            return Err(Error::PointOutsideChart(format!(
                "expected {} coordinates, got {}",
                self.chart_dim,
                x.len()
            )));
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::PointOutsideChart("non-finite coordinates".into()));
        }
        if self.is_sphere() {
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::PointOutsideChart(format!(
                    "sphere point has |p| - 1 = {:.3e}",
                    norm - 1.0
                )));
            }
        }
        Ok(())
    }

    /// Contact-metric data at a chart point.
    pub fn frame_at(&self, x: &[f64]) -> Result<AmbientFrame> {
        self.validate_point(x)?;
        Ok(self.frame_eval(x))
    }

    /// Non-validating frame evaluation used in integrator inner loops; the
    /// sphere input is renormalised rather than rejected.
    pub fn frame_eval(&self, x: &[f64]) -> AmbientFrame {
        match self.kind {
            ModelKind::HeisenbergR3 | ModelKind::HeisenbergR5 => heisenberg::frame(self.n, x),
            ModelKind::HyperbolicCylinder3 => hypcyl::frame(x),
            ModelKind::SphereS3 | ModelKind::SphereS5 => {
                let mut p = x.to_vec();
                self.retract(&mut p);
                sphere::frame(self.n, &p)
            }
        }
    }

    /// Non-validating connection evaluation, same contract as `frame_eval`.
    pub fn connection_eval(&self, x: &[f64]) -> T3 {
        match self.kind {
            ModelKind::HeisenbergR3 | ModelKind::HeisenbergR5 => {
                chart::christoffel(&heisenberg::jets(self.n), x)
            }
            ModelKind::HyperbolicCylinder3 => chart::christoffel(&hypcyl::jets(), x),
            ModelKind::SphereS3 | ModelKind::SphereS5 => {
                let mut p = x.to_vec();
                self.retract(&mut p);
                sphere::christoffel(&p)
            }
        }
    }

    /// Non-validating curvature evaluation (closed form).
    pub fn curvature_eval(&self, x: &[f64]) -> CurvaturePack {
        let y = if self.is_sphere() {
            let mut p = x.to_vec();
            self.retract(&mut p);
            p
        } else {
            x.to_vec()
        };
        self.curvature_at(&y, EvaluationMode::ClosedForm)
            .expect("curvature evaluation on retracted point")
    }

    /// Christoffel symbols Gamma^a_{bc} of the chart connection.
    pub fn connection_at(&self, x: &[f64]) -> Result<T3> {
        self.validate_point(x)?;
        Ok(match self.kind {
            ModelKind::HeisenbergR3 | ModelKind::HeisenbergR5 => {
                chart::christoffel(&heisenberg::jets(self.n), x)
            }
            ModelKind::HyperbolicCylinder3 => chart::christoffel(&hypcyl::jets(), x),
            ModelKind::SphereS3 | ModelKind::SphereS5 => sphere::christoffel(x),
        })
    }

    /// Riemann, Ricci and nabla-Riemann at a chart point.
    pub fn curvature_at(&self, x: &[f64], mode: EvaluationMode) -> Result<CurvaturePack> {
        self.validate_point(x)?;
        let pack = match self.kind {
            ModelKind::HeisenbergR3 | ModelKind::HeisenbergR5 => {
                let jets = heisenberg::jets(self.n);
                match mode {
                    EvaluationMode::ClosedForm => chart::curvature(&jets, x),
                    EvaluationMode::FiniteDifference => {
                        chart::curvature_fd(&jets, x, FD_CURVATURE_STEP)
                    }
                }
            }
            ModelKind::HyperbolicCylinder3 => {
                let jets = hypcyl::jets();
                match mode {
                    EvaluationMode::ClosedForm => chart::curvature(&jets, x),
                    EvaluationMode::FiniteDifference => {
                        chart::curvature_fd(&jets, x, FD_CURVATURE_STEP)
                    }
                }
            }
            ModelKind::SphereS3 | ModelKind::SphereS5 => {
                let sp = sphere::curvature(x);
                chart::ChartCurvature {
                    riemann: sp.riemann,
                    ricci: sp.ricci,
                    nabla_riemann: sp.nabla_riemann,
                }
            }
        };
        Ok(CurvaturePack {
            riemann: pack.riemann,
            ricci: pack.ricci,
            nabla_riemann: pack.nabla_riemann,
            mode,
        })
    }

    /// The stored eta-Einstein constant K + 2. Its consistency with the
    /// Ricci fit is a standing invariant checked by the identity suite.
    pub fn eta_einstein_constant(&self) -> f64 {
        self.eta_einstein_constant
    }

    /// d_s lam_a stored (s, a), used by the nabla-lambda identity.
    pub(crate) fn dlambda(&self, x: &[f64]) -> T2 {
        match self.kind {
            ModelKind::HeisenbergR3 | ModelKind::HeisenbergR5 => heisenberg::dlambda(self.n),
            ModelKind::HyperbolicCylinder3 => hypcyl::dlambda(x),
            ModelKind::SphereS3 | ModelKind::SphereS5 => sphere::dlambda(self.n, x),
        }
    }

    /// d_s J^b_a stored (s, b, a).
    pub(crate) fn dj(&self, x: &[f64]) -> T3 {
        match self.kind {
            ModelKind::HeisenbergR3 | ModelKind::HeisenbergR5 => heisenberg::dj(self.n, x),
            ModelKind::HyperbolicCylinder3 => hypcyl::dj(x),
            ModelKind::SphereS3 | ModelKind::SphereS5 => sphere::dj(self.n, x),
        }
    }

    /// d_s T^a stored (s, a).
    pub(crate) fn dreeb(&self, _x: &[f64]) -> T2 {
        let d = self.chart_dim;
        let mut out = T2::zeros(d);
        if self.is_sphere() {
            for s in 0..d {
                for a in 0..d {
                    out.set(s, a, sphere::i_mat(d, a, s));
                }
            }
        }
        out
    }

    /// d_s g_{ab} stored (s, a, b).
    pub(crate) fn dmetric(&self, x: &[f64]) -> T3 {
        use chart::MetricJets;
        match self.kind {
            ModelKind::HeisenbergR3 | ModelKind::HeisenbergR5 => {
                heisenberg::jets(self.n).dmetric(x)
            }
            ModelKind::HyperbolicCylinder3 => hypcyl::jets().dmetric(x),
            ModelKind::SphereS3 | ModelKind::SphereS5 => sphere::dmetric(self.n, x),
        }
    }

    /// Orthonormal tangent frame used to evaluate identities: the coordinate
    /// basis on the group charts, a Householder tangent frame on the spheres.
    pub fn tangent_frame(&self, x: &[f64]) -> Vec<Vec<f64>> {
        if self.is_sphere() {
            sphere::tangent_frame(x)
        } else {
            let d = self.chart_dim;
            (0..d)
                .map(|i| {
                    let mut e = vec![0.0; d];
                    e[i] = 1.0;
                    e
                })
                .collect()
        }
    }

    /// Exact time-c flow of the Reeb field from a chart point.
    pub fn reeb_flow(&self, x: &[f64], c: f64) -> Vec<f64> {
        match self.kind {
            ModelKind::HeisenbergR3 | ModelKind::HeisenbergR5 | ModelKind::HyperbolicCylinder3 => {
                let mut y = x.to_vec();
                let z = y.len() - 1;
                y[z] += c;
                y
            }
            ModelKind::SphereS3 | ModelKind::SphereS5 => {
                let d = self.chart_dim;
                let mut ip = vec![0.0; d];
                for a in 0..d {
                    for b in 0..d {
                        ip[a] += sphere::i_mat(d, a, b) * x[b];
                    }
                }
                let (s, co) = c.sin_cos();
                (0..d).map(|a| co * x[a] + s * ip[a]).collect()
            }
        }
    }

    /// Pulls a drifted point back onto the chart (renormalises sphere
    /// points; the group charts are global).
    pub fn retract(&self, x: &mut [f64]) {
        if self.is_sphere() {
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            for v in x.iter_mut() {
                *v /= norm;
            }
        }
    }

    /// Quasi-random sample points in a bounded chart region, for residual
    /// suites and the K_m constancy check.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = self.chart_dim;
        (0..count)
            .map(|_| {
                if self.is_sphere() {
                    let mut p: Vec<f64> = (0..d)
                        .map(|_| {
                            let u: f64 = rng.gen_range(-1.0..1.0);
                            u
                        })
                        .collect();
                    let mut norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                    while norm < 1e-3 {
                        p = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                        norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                    }
                    p.iter().map(|v| v / norm).collect()
                } else if self.kind == ModelKind::HyperbolicCylinder3 {
                    vec![
                        rng.gen_range(-1.2..1.2),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                        rng.gen_range(-1.0..1.0),
                    ]
                } else {
                    (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect()
                }
            })
            .collect()
    }
}
