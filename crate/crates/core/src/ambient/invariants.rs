//! Residual suite for the defining identities of the model spaces.
//!
//! Every identity is evaluated pointwise in chart components and contracted
//! against an orthonormal tangent frame before the max is taken; on the
//! group charts the frame is the coordinate basis, on the spheres it kills
//! the normal direction, which is where the raw embedded components of
//! connection-level identities legitimately fail to vanish.

use super::{EvaluationMode, SasakianModel};
use crate::error::Result;
use crate::tensor::{T2, T3, T4};
use crate::tolerances::{AMBIENT_TOL_CLOSED, AMBIENT_TOL_FD};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ResidualEntry {
    pub identity: String,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmbientResidualReport {
    pub model: String,
    pub mode: String,
    pub points: usize,
    pub entries: Vec<ResidualEntry>,
}

impl AmbientResidualReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
    pub fn worst(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.max_residual))
    }
    pub fn get(&self, identity: &str) -> Option<&ResidualEntry> {
        self.entries.iter().find(|e| e.identity == identity)
    }
}

/// Contract the first index of a flat rank-r array (dims D^r) with each
/// frame vector, producing a (frames x D^{r-1}) array.
fn contract_first(data: &[f64], d_chart: usize, rest: usize, frame: &[Vec<f64>]) -> Vec<f64> {
    let nf = frame.len();
    let mut out = vec![0.0; nf * rest];
    for (fi, e) in frame.iter().enumerate() {
        for r in 0..rest {
            let mut s = 0.0;
            for a in 0..d_chart {
                s += e[a] * data[a * rest + r];
            }
            out[fi * rest + r] = s;
        }
    }
    out
}

/// Max abs of a rank-r tensor fully contracted with the tangent frame.
fn frame_max(data: &[f64], d_chart: usize, rank: usize, frame: &[Vec<f64>]) -> f64 {
    let mut cur = data.to_vec();
    let mut lead_done = 0;
    let nf = frame.len();
    while lead_done < rank {
        let rest_chart = d_chart.pow((rank - lead_done - 1) as u32);
        // current layout: nf^lead_done x D^(rank-lead_done); contract the
        // leading chart index of each nf-block
        let block = d_chart * rest_chart;
        let blocks = cur.len() / block;
        let mut next = vec![0.0; blocks * nf * rest_chart];
        for b in 0..blocks {
            let sub = contract_first(&cur[b * block..(b + 1) * block], d_chart, rest_chart, frame);
            next[b * nf * rest_chart..(b + 1) * nf * rest_chart].copy_from_slice(&sub);
        }
        cur = next;
        lead_done += 1;
    }
    cur.iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct PointData {
    g: T2,
    ginv: T2,
    lambda: Vec<f64>,
    reeb: Vec<f64>,
    j: T2,
    omega: T2,
    gamma: T3,
    dl: T2,
    dg: T3,
    dt: T2,
    dj: T3,
    riemann: T4,
    ricci: T2,
    rm_mixed: T4,
    ric_mixed: T2,
}

fn gather(model: &SasakianModel, x: &[f64], mode: EvaluationMode) -> Result<PointData> {
    let f = model.frame_at(x)?;
    let gamma = model.connection_at(x)?;
    let pack = model.curvature_at(x, mode)?;
    let d = model.chart_dim;
    let mut rm_mixed = T4::zeros(d);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let mut s = 0.0;
                    for m in 0..d {
                        s += f.ginv.get(a, m) * pack.riemann.get(m, b, c, e);
                    }
                    rm_mixed.set(a, b, c, e, s);
                }
            }
        }
    }
    let mut ric_mixed = T2::zeros(d);
    for a in 0..d {
        for b in 0..d {
            let mut s = 0.0;
            for m in 0..d {
                s += f.ginv.get(a, m) * pack.ricci.get(m, b);
            }
            ric_mixed.set(a, b, s);
        }
    }
    Ok(PointData {
        gamma,
        dl: model.dlambda(x),
        dg: model.dmetric(x),
        dt: model.dreeb(x),
        dj: model.dj(x),
        riemann: pack.riemann,
        ricci: pack.ricci,
        rm_mixed,
        ric_mixed,
        g: f.g,
        ginv: f.ginv,
        lambda: f.lambda,
        reeb: f.reeb,
        j: f.j,
        omega: f.omega,
    })
}

/// Max residuals of the contact-metric and curvature identities over a set
/// of sample points.
pub fn ambient_identity_residuals(
    model: &SasakianModel,
    points: &[Vec<f64>],
    mode: EvaluationMode,
) -> Result<AmbientResidualReport> {
    assert!(!points.is_empty(), "need at least one sample point");
    let d = model.chart_dim;
    let n = model.n;
    let two_n_minus_1 = (2 * n - 1) as f64;
    let kconst = model.eta_einstein_constant - 2.0;
    let tol_frame = 1e-10;
    let tol_mode = match mode {
        EvaluationMode::ClosedForm => AMBIENT_TOL_CLOSED,
        EvaluationMode::FiniteDifference => AMBIENT_TOL_FD,
    };

    let names: Vec<(&str, f64)> = vec![
        ("lambda(T)=1", tol_frame),
        ("dlambda(T,.)=0", tol_frame),
        ("g(T,.)=lambda", tol_frame),
        ("J^2=-pi", tol_frame),
        ("adapted_metric", tol_frame),
        ("nabla_lambda=omega", tol_mode.min(AMBIENT_TOL_CLOSED)),
        ("J=nabla_T", tol_mode.min(AMBIENT_TOL_CLOSED)),
        ("nabla_J", tol_mode.min(AMBIENT_TOL_CLOSED)),
        ("metric_compat", tol_mode.min(AMBIENT_TOL_CLOSED)),
        ("L0", tol_mode),
        ("L1", tol_mode),
        ("L2", tol_mode),
        ("L3", tol_mode),
        ("L4", tol_mode),
        ("R(X,T)Y", tol_mode),
        ("ricci_d3", tol_mode),
        ("riemann_sym", tol_mode),
        ("bianchi1", tol_mode),
    ];
    let mut worst = vec![0.0f64; names.len()];

    for x in points {
        let p = gather(model, x, mode)?;
        let frame = model.tangent_frame(x);
        let mut upd = |slot: usize, v: f64| {
            if v > worst[slot] {
                worst[slot] = v;
            }
        };

        // lambda(T) = 1
        let lt: f64 = (0..d).map(|a| p.lambda[a] * p.reeb[a]).sum();
        upd(0, (lt - 1.0).abs());

        // omega(T, .) = 0
        let mut r1 = vec![0.0; d];
        for b in 0..d {
            r1[b] = (0..d).map(|a| p.reeb[a] * p.omega.get(a, b)).sum();
        }
        upd(1, frame_max(&r1, d, 1, &frame));

        // g(T, .) = lambda
        let mut r2 = vec![0.0; d];
        for b in 0..d {
            r2[b] = (0..d).map(|a| p.g.get(a, b) * p.reeb[a]).sum::<f64>() - p.lambda[b];
        }
        upd(2, frame_max(&r2, d, 1, &frame));

        // J^2 = -pi, pi = id - T lambda
        let mut r3 = T2::zeros(d);
        for b in 0..d {
            for a in 0..d {
                let mut s = 0.0;
                for m in 0..d {
                    s += p.j.get(b, m) * p.j.get(m, a);
                }
                s += if a == b { 1.0 } else { 0.0 };
                s -= p.reeb[b] * p.lambda[a];
                r3.set(b, a, s);
            }
        }
        upd(3, frame_max(&r3.a, d, 2, &frame));

        // g = lambda lambda + omega(., J .)
        let mut r4 = T2::zeros(d);
        for a in 0..d {
            for b in 0..d {
                let mut wj = 0.0;
                for m in 0..d {
                    wj += p.omega.get(a, m) * p.j.get(m, b);
                }
                r4.set(a, b, p.g.get(a, b) - p.lambda[a] * p.lambda[b] - wj);
            }
        }
        upd(4, frame_max(&r4.a, d, 2, &frame));

        // nabla_a lambda_b = omega_ab
        let mut r5 = T2::zeros(d);
        for a in 0..d {
            for b in 0..d {
                let mut s = p.dl.get(a, b) - p.omega.get(a, b);
                for m in 0..d {
                    s -= p.gamma.get(m, a, b) * p.lambda[m];
                }
                r5.set(a, b, s);
            }
        }
        upd(5, frame_max(&r5.a, d, 2, &frame));

        // J = nabla T
        let mut r6 = T2::zeros(d);
        for a in 0..d {
            for b in 0..d {
                let mut s = p.j.get(b, a) - p.dt.get(a, b);
                for m in 0..d {
                    s -= p.gamma.get(b, a, m) * p.reeb[m];
                }
                r6.set(b, a, s);
            }
        }
        upd(6, frame_max(&r6.a, d, 2, &frame));

        // (nabla_s J)(e_a) = lambda_a e_s - g_{sa} T
        let mut r7 = T3::zeros(d);
        for s in 0..d {
            for b in 0..d {
                for a in 0..d {
                    let mut v = p.dj.get(s, b, a);
                    for m in 0..d {
                        v += p.gamma.get(b, s, m) * p.j.get(m, a);
                        v -= p.gamma.get(m, s, a) * p.j.get(b, m);
                    }
                    v -= p.lambda[a] * if b == s { 1.0 } else { 0.0 };
                    v += p.g.get(s, a) * p.reeb[b];
                    r7.set(s, b, a, v);
                }
            }
        }
        upd(7, frame_max(&r7.a, d, 3, &frame));

        // nabla g = 0
        let mut r8 = T3::zeros(d);
        for s in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let mut v = p.dg.get(s, a, b);
                    for m in 0..d {
                        v -= p.gamma.get(m, s, a) * p.g.get(m, b);
                        v -= p.gamma.get(m, s, b) * p.g.get(a, m);
                    }
                    r8.set(s, a, b, v);
                }
            }
        }
        upd(8, frame_max(&r8.a, d, 3, &frame));

        // L0: R^e_{gab} lam_e = g_{gb} lam_a - g_{ga} lam_b
        let mut r9 = T3::zeros(d);
        for g_ in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let mut v = 0.0;
                    for s in 0..d {
                        v += p.reeb[s] * p.riemann.get(s, g_, a, b);
                    }
                    v -= p.g.get(g_, b) * p.lambda[a] - p.g.get(g_, a) * p.lambda[b];
                    r9.set(g_, a, b, v);
                }
            }
        }
        upd(9, frame_max(&r9.a, d, 3, &frame));

        // L1
        let mut r10 = T4::zeros(d);
        for g_ in 0..d {
            for dd in 0..d {
                for a in 0..d {
                    for b in 0..d {
                        let mut v = 0.0;
                        for e in 0..d {
                            v += p.rm_mixed.get(e, g_, a, b) * p.omega.get(e, dd);
                            v += p.rm_mixed.get(e, dd, a, b) * p.omega.get(g_, e);
                        }
                        v -= -p.g.get(b, dd) * p.omega.get(a, g_)
                            + p.g.get(b, g_) * p.omega.get(a, dd)
                            + p.g.get(a, dd) * p.omega.get(b, g_)
                            - p.g.get(a, g_) * p.omega.get(b, dd);
                        r10.set(g_, dd, a, b, v);
                    }
                }
            }
        }
        upd(10, frame_max(&r10.a, d, 4, &frame));

        // L2: J^b_e R^e_{gab} = Ric^e_a omega_{eg} - (2n-1) omega_{ag}
        let mut r11 = T2::zeros(d);
        for g_ in 0..d {
            for a in 0..d {
                let mut v = 0.0;
                for e in 0..d {
                    for b in 0..d {
                        v += p.j.get(b, e) * p.rm_mixed.get(e, g_, a, b);
                    }
                }
                let mut rhs = -two_n_minus_1 * p.omega.get(a, g_);
                for e in 0..d {
                    rhs += p.ric_mixed.get(e, a) * p.omega.get(e, g_);
                }
                r11.set(g_, a, v - rhs);
            }
        }
        upd(11, frame_max(&r11.a, d, 2, &frame));

        // L3: J^b_e R^e_{bag} = Ric^e_g omega_{ae} - Ric^e_a omega_{ge} - 2(2n-1) omega_{ag}
        let mut r12 = T2::zeros(d);
        for a in 0..d {
            for g_ in 0..d {
                let mut v = 0.0;
                for e in 0..d {
                    for b in 0..d {
                        v += p.j.get(b, e) * p.rm_mixed.get(e, b, a, g_);
                    }
                }
                let mut rhs = -2.0 * two_n_minus_1 * p.omega.get(a, g_);
                for e in 0..d {
                    rhs += p.ric_mixed.get(e, g_) * p.omega.get(a, e);
                    rhs -= p.ric_mixed.get(e, a) * p.omega.get(g_, e);
                }
                r12.set(a, g_, v - rhs);
            }
        }
        upd(12, frame_max(&r12.a, d, 2, &frame));

        // L4: -1/2 J^s_b R^b_{s g dd} = 1/2 (Ric^e_g w_{dd e} - Ric^e_dd w_{g e} - 2(2n-1) w_{dd g})
        let mut r13 = T2::zeros(d);
        for g_ in 0..d {
            for dd in 0..d {
                let mut v = 0.0;
                for s in 0..d {
                    for b in 0..d {
                        v += p.j.get(s, b) * p.rm_mixed.get(b, s, g_, dd);
                    }
                }
                v *= -0.5;
                let mut rhs = -two_n_minus_1 * p.omega.get(dd, g_);
                for e in 0..d {
                    rhs += 0.5 * p.ric_mixed.get(e, g_) * p.omega.get(dd, e);
                    rhs -= 0.5 * p.ric_mixed.get(e, dd) * p.omega.get(g_, e);
                }
                r13.set(g_, dd, v - rhs);
            }
        }
        upd(13, frame_max(&r13.a, d, 2, &frame));

        // R(X, T) Y = g(T,Y) X - g(X,Y) T
        let mut r14 = T3::zeros(d);
        for g_ in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let mut v = 0.0;
                    for m in 0..d {
                        v += p.rm_mixed.get(g_, b, a, m) * p.reeb[m];
                    }
                    v -= p.lambda[b] * if g_ == a { 1.0 } else { 0.0 };
                    v += p.g.get(a, b) * p.reeb[g_];
                    r14.set(g_, a, b, v);
                }
            }
        }
        upd(14, frame_max(&r14.a, d, 3, &frame));

        // Ric = K g + (2n - K) lambda lambda
        let mut r15 = T2::zeros(d);
        for a in 0..d {
            for b in 0..d {
                let v = p.ricci.get(a, b)
                    - kconst * p.g.get(a, b)
                    - (2.0 * n as f64 - kconst) * p.lambda[a] * p.lambda[b];
                r15.set(a, b, v);
            }
        }
        upd(15, frame_max(&r15.a, d, 2, &frame));

        // algebraic symmetries of the lowered Riemann tensor
        let mut sym = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let r = p.riemann.get(a, b, c, e);
                        sym = sym.max((r + p.riemann.get(b, a, c, e)).abs());
                        sym = sym.max((r + p.riemann.get(a, b, e, c)).abs());
                        sym = sym.max((r - p.riemann.get(c, e, a, b)).abs());
                    }
                }
            }
        }
        upd(16, sym);

        // first Bianchi: R_{ecab} + R_{eabc} + R_{ebca} = 0
        let mut bianchi = T4::zeros(d);
        for e in 0..d {
            for c in 0..d {
                for a in 0..d {
                    for b in 0..d {
                        bianchi.set(
                            e,
                            c,
                            a,
                            b,
                            p.riemann.get(e, c, a, b)
                                + p.riemann.get(e, a, b, c)
                                + p.riemann.get(e, b, c, a),
                        );
                    }
                }
            }
        }
        upd(17, frame_max(&bianchi.a, d, 4, &frame));
    }

    let entries = names
        .iter()
        .zip(worst.iter())
        .map(|((name, tol), &w)| ResidualEntry {
            identity: name.to_string(),
            max_residual: w,
            threshold: *tol,
            pass: w < *tol,
        })
        .collect();

    Ok(AmbientResidualReport {
        model: model.kind.id().to_string(),
        mode: format!("{:?}", mode),
        points: points.len(),
        entries,
    })
}

/// Least-squares fit of the eta-Einstein constant K + 2 from the computed
/// Ricci tensor: Ric - 2n lambda lambda = K (g - lambda lambda).
/// Returns (mean over points, standard deviation).
pub fn fit_eta_einstein_constant(
    model: &SasakianModel,
    points: &[Vec<f64>],
    mode: EvaluationMode,
) -> Result<(f64, f64)> {
    let d = model.chart_dim;
    let two_n = 2.0 * model.n as f64;
    let mut vals = Vec::with_capacity(points.len());
    for x in points {
        let f = model.frame_at(x)?;
        let pack = model.curvature_at(x, mode)?;
        let mut num = 0.0;
        let mut den = 0.0;
        for a in 0..d {
            for b in 0..d {
                let q = f.g.get(a, b) - f.lambda[a] * f.lambda[b];
                let lhs = pack.ricci.get(a, b) - two_n * f.lambda[a] * f.lambda[b];
                num += lhs * q;
                den += q * q;
            }
        }
        vals.push(num / den + 2.0);
    }
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / vals.len() as f64;
    Ok((mean, var.sqrt()))
}
