//! Curvature of a chart metric from closed-form metric derivatives.
//!
//! A model supplies the metric and its first three coordinate derivatives as
//! exact closures; everything downstream (Christoffels, Riemann, Ricci,
//! nabla-Riemann) is assembled here by the standard index gymnastics, so each
//! model only has to get its metric jets right. A finite-difference path is
//! kept alongside as the independent oracle.
//!
//! Index conventions, fixed once for the whole crate:
//!   Gamma.get(a,b,c)      = Gamma^a_{bc}
//!   riemann.get(a,b,c,d)  = R_{abcd} = g( R(e_c,e_d) e_b , e_a )
//!   nabla.get(s,a,b,c,d)  = nabla_s R_{abcd}
//! so that R^e_{gab} lambda_e = g_{gb} lambda_a - g_{ga} lambda_b holds with
//! a positive sign on the round sphere.

use crate::tensor::{T2, T3, T4, T5};

/// Exact metric jets in a global chart.
pub trait MetricJets {
    fn dim(&self) -> usize;
    fn metric(&self, x: &[f64]) -> T2;
    /// dg.get(s, a, b) = d g_{ab} / d x^s
    fn dmetric(&self, x: &[f64]) -> T3;
    /// d2g.get(s, t, a, b) = d^2 g_{ab} / dx^s dx^t
    fn d2metric(&self, x: &[f64]) -> T4;
    /// d3g.get(s, t, u, a, b) -- stored as rank five with the pair (a,b)
    /// flattened into the last two slots of a T5 indexed (s,t,u,a*d+b)? No:
    /// rank six is never needed whole; models expose the directional jet
    /// below instead.
    fn d3metric_dir(&self, x: &[f64], s: usize, t: usize, u: usize) -> T2;
}

/// Christoffel symbols Gamma^a_{bc} at x.
pub fn christoffel(jets: &dyn MetricJets, x: &[f64]) -> T3 {
    let d = jets.dim();
    let g = jets.metric(x);
    let ginv = g.inverse();
    let dg = jets.dmetric(x);
    let mut gamma = T3::zeros(d);
    for a in 0..d {
        for b in 0..d {
            for c in b..d {
                let mut s = 0.0;
                for m in 0..d {
                    s += ginv.get(a, m)
                        * (dg.get(b, m, c) + dg.get(c, m, b) - dg.get(m, b, c));
                }
                let v = 0.5 * s;
                gamma.set(a, b, c, v);
                gamma.set(a, c, b, v);
            }
        }
    }
    gamma
}

/// d Gamma^a_{bc} / dx^t.
pub fn dchristoffel(jets: &dyn MetricJets, x: &[f64]) -> T4 {
    let d = jets.dim();
    let g = jets.metric(x);
    let ginv = g.inverse();
    let dg = jets.dmetric(x);
    let d2g = jets.d2metric(x);
    // d ginv^{am} / dx^t = - ginv^{ap} dg_{pq,t} ginv^{qm}
    let mut dginv = T3::zeros(d);
    for t in 0..d {
        for a in 0..d {
            for m in 0..d {
                let mut s = 0.0;
                for p in 0..d {
                    for q in 0..d {
                        s -= ginv.get(a, p) * dg.get(t, p, q) * ginv.get(q, m);
                    }
                }
                dginv.set(t, a, m, s);
            }
        }
    }
    let mut out = T4::zeros(d);
    for t in 0..d {
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let mut s = 0.0;
                    for m in 0..d {
                        s += dginv.get(t, a, m)
                            * (dg.get(b, m, c) + dg.get(c, m, b) - dg.get(m, b, c));
                        s += ginv.get(a, m)
                            * (d2g.get(t, b, m, c) + d2g.get(t, c, m, b)
                                - d2g.get(t, m, b, c));
                    }
                    out.set(t, a, b, c, 0.5 * s);
                }
            }
        }
    }
    out
}

/// Second derivatives d^2 Gamma^a_{bc} / dx^t dx^u, needed only for the
/// closed-form nabla-Riemann.
pub fn d2christoffel(jets: &dyn MetricJets, x: &[f64]) -> T5 {
    let d = jets.dim();
    let g = jets.metric(x);
    let ginv = g.inverse();
    let dg = jets.dmetric(x);
    let d2g = jets.d2metric(x);

    let mut dginv = T3::zeros(d);
    for t in 0..d {
        for a in 0..d {
            for m in 0..d {
                let mut s = 0.0;
                for p in 0..d {
                    for q in 0..d {
                        s -= ginv.get(a, p) * dg.get(t, p, q) * ginv.get(q, m);
                    }
                }
                dginv.set(t, a, m, s);
            }
        }
    }
    // d^2 ginv / dt du = -d_u(ginv dg_t ginv)
    //   = -dginv_u dg_t ginv - ginv d2g_{tu} ginv - ginv dg_t dginv_u
    let mut d2ginv = T4::zeros(d);
    for t in 0..d {
        for u in 0..d {
            for a in 0..d {
                for m in 0..d {
                    let mut s = 0.0;
                    for p in 0..d {
                        for q in 0..d {
                            s -= dginv.get(u, a, p) * dg.get(t, p, q) * ginv.get(q, m);
                            s -= ginv.get(a, p) * d2g.get(t, u, p, q) * ginv.get(q, m);
                            s -= ginv.get(a, p) * dg.get(t, p, q) * dginv.get(u, q, m);
                        }
                    }
                    d2ginv.set(t, u, a, m, s);
                }
            }
        }
    }
    let mut out = T5::zeros(d);
    for t in 0..d {
        for u in 0..d {
            let d3g_tu = |s: usize| jets.d3metric_dir(x, t, u, s);
            // precompute d3 g_{mc} for the needed third index inside the loop
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let mut s = 0.0;
                        for m in 0..d {
                            let bracket =
                                dg.get(b, m, c) + dg.get(c, m, b) - dg.get(m, b, c);
                            let dbracket_u = d2g.get(u, b, m, c) + d2g.get(u, c, m, b)
                                - d2g.get(u, m, b, c);
                            let dbracket_t = d2g.get(t, b, m, c) + d2g.get(t, c, m, b)
                                - d2g.get(t, m, b, c);
                            let d2bracket = d3g_tu(b).get(m, c) + d3g_tu(c).get(m, b)
                                - d3g_tu(m).get(b, c);
                            s += d2ginv.get(t, u, a, m) * bracket;
                            s += dginv.get(t, a, m) * dbracket_u;
                            s += dginv.get(u, a, m) * dbracket_t;
                            s += ginv.get(a, m) * d2bracket;
                        }
                        out.set(t, u, a, b, c, 0.5 * s);
                    }
                }
            }
        }
    }
    out
}

/// Mixed Riemann R^a_{bcd} from Gamma and dGamma:
/// R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
///           + Gamma^a_{cs} Gamma^s_{db} - Gamma^a_{ds} Gamma^s_{cb}.
pub fn riemann_mixed_from(gamma: &T3, dgamma: &T4, d: usize) -> T4 {
    let mut r = T4::zeros(d);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let mut s = dgamma.get(c, a, e, b) - dgamma.get(e, a, c, b);
                    for m in 0..d {
                        s += gamma.get(a, c, m) * gamma.get(m, e, b)
                            - gamma.get(a, e, m) * gamma.get(m, c, b);
                    }
                    r.set(a, b, c, e, s);
                }
            }
        }
    }
    r
}

pub struct ChartCurvature {
    pub riemann: T4,
    pub ricci: T2,
    pub nabla_riemann: T5,
}

/// Closed-form curvature pack from exact metric jets.
pub fn curvature(jets: &dyn MetricJets, x: &[f64]) -> ChartCurvature {
    let d = jets.dim();
    let g = jets.metric(x);
    let ginv = g.inverse();
    let dg = jets.dmetric(x);
    let gamma = christoffel(jets, x);
    let dgamma = dchristoffel(jets, x);
    let d2gamma = d2christoffel(jets, x);

    let rm = riemann_mixed_from(&gamma, &dgamma, d);
    // dR^a_{bce}/dx^t
    let mut drm = T5::zeros(d);
    for t in 0..d {
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let mut s = d2gamma.get(t, c, a, e, b) - d2gamma.get(t, e, a, c, b);
                        for m in 0..d {
                            s += dgamma.get(t, a, c, m) * gamma.get(m, e, b)
                                + gamma.get(a, c, m) * dgamma.get(t, m, e, b);
                            s -= dgamma.get(t, a, e, m) * gamma.get(m, c, b)
                                + gamma.get(a, e, m) * dgamma.get(t, m, c, b);
                        }
                        drm.set(t, a, b, c, e, s);
                    }
                }
            }
        }
    }

    let mut riemann = T4::zeros(d);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let mut s = 0.0;
                    for m in 0..d {
                        s += g.get(a, m) * rm.get(m, b, c, e);
                    }
                    riemann.set(a, b, c, e, s);
                }
            }
        }
    }

    let mut ricci = T2::zeros(d);
    for b in 0..d {
        for e in 0..d {
            let mut s = 0.0;
            for a in 0..d {
                for c in 0..d {
                    s += ginv.get(a, c) * riemann.get(a, b, c, e);
                }
            }
            ricci.set(b, e, s);
        }
    }

    // partial of the lowered tensor, then covariant corrections
    let mut nabla = T5::zeros(d);
    for t in 0..d {
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let mut s = 0.0;
                        for m in 0..d {
                            s += dg.get(t, a, m) * rm.get(m, b, c, e)
                                + g.get(a, m) * drm.get(t, m, b, c, e);
                        }
                        for m in 0..d {
                            s -= gamma.get(m, t, a) * riemann.get(m, b, c, e);
                            s -= gamma.get(m, t, b) * riemann.get(a, m, c, e);
                            s -= gamma.get(m, t, c) * riemann.get(a, b, m, e);
                            s -= gamma.get(m, t, e) * riemann.get(a, b, c, m);
                        }
                        nabla.set(t, a, b, c, e, s);
                    }
                }
            }
        }
    }

    ChartCurvature { riemann, ricci, nabla_riemann: nabla }
}

/// Finite-difference curvature from central differences of the Christoffel
/// field; the independent oracle for the closed-form path.
pub fn curvature_fd(jets: &dyn MetricJets, x: &[f64], h: f64) -> ChartCurvature {
    let d = jets.dim();
    let g = jets.metric(x);
    let ginv = g.inverse();
    let gamma = christoffel(jets, x);

    let mut dgamma = T4::zeros(d);
    let mut xp = x.to_vec();
    for t in 0..d {
        xp.copy_from_slice(x);
        xp[t] = x[t] + h;
        let gp = christoffel(jets, &xp);
        xp[t] = x[t] - h;
        let gm = christoffel(jets, &xp);
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    dgamma.set(t, a, b, c, (gp.get(a, b, c) - gm.get(a, b, c)) / (2.0 * h));
                }
            }
        }
    }
    let rm = riemann_mixed_from(&gamma, &dgamma, d);
    let mut riemann = T4::zeros(d);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let mut s = 0.0;
                    for m in 0..d {
                        s += g.get(a, m) * rm.get(m, b, c, e);
                    }
                    riemann.set(a, b, c, e, s);
                }
            }
        }
    }
    let mut ricci = T2::zeros(d);
    for b in 0..d {
        for e in 0..d {
            let mut s = 0.0;
            for a in 0..d {
                for c in 0..d {
                    s += ginv.get(a, c) * riemann.get(a, b, c, e);
                }
            }
            ricci.set(b, e, s);
        }
    }

    // nabla R by central differences of the closed-form lowered Riemann
    let riemann_at = |y: &[f64]| curvature(jets, y).riemann;
    let mut nabla = T5::zeros(d);
    for t in 0..d {
        xp.copy_from_slice(x);
        xp[t] = x[t] + h;
        let rp = riemann_at(&xp);
        xp[t] = x[t] - h;
        let rmn = riemann_at(&xp);
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let mut s = (rp.get(a, b, c, e) - rmn.get(a, b, c, e)) / (2.0 * h);
                        for m in 0..d {
                            s -= gamma.get(m, t, a) * riemann.get(m, b, c, e);
                            s -= gamma.get(m, t, b) * riemann.get(a, m, c, e);
                            s -= gamma.get(m, t, c) * riemann.get(a, b, m, e);
                            s -= gamma.get(m, t, e) * riemann.get(a, b, c, m);
                        }
                        nabla.set(t, a, b, c, e, s);
                    }
                }
            }
        }
    }

    ChartCurvature { riemann, ricci, nabla_riemann: nabla }
}

/// Koszul oracle: Christoffels from central differences of the metric only.
pub fn christoffel_fd(jets: &dyn MetricJets, x: &[f64], h: f64) -> T3 {
    let d = jets.dim();
    let g = jets.metric(x);
    let ginv = g.inverse();
    let mut dg = T3::zeros(d);
    let mut xp = x.to_vec();
    for s in 0..d {
        xp.copy_from_slice(x);
        xp[s] = x[s] + h;
        let gp = jets.metric(&xp);
        xp[s] = x[s] - h;
        let gm = jets.metric(&xp);
        for a in 0..d {
            for b in 0..d {
                dg.set(s, a, b, (gp.get(a, b) - gm.get(a, b)) / (2.0 * h));
            }
        }
    }
    let mut gamma = T3::zeros(d);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut s = 0.0;
                for m in 0..d {
                    s += ginv.get(a, m) * (dg.get(b, m, c) + dg.get(c, m, b) - dg.get(m, b, c));
                }
                gamma.set(a, b, c, 0.5 * s);
            }
        }
    }
    gamma
}
