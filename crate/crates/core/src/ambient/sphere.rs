//! Round contact spheres S^3 and S^5 in embedded coordinates.
//!
//! Points are unit vectors in R^{2n+2} with coordinates paired as
//! (x_1, y_1, ..., x_{n+1}, y_{n+1}); the complex structure acts per pair as
//! i (x, y) = (-y, x). The Reeb field is T(p) = i p, the contact form
//! lam = <i p, .>, and the connection is the tangential projection
//! Gamma^a_{bc} = p^a P_{bc} with P = I - p p^T. The chart metric slot
//! carries P itself; identity checks contract with tangent frames so the
//! normal direction never enters.

use super::chart::MetricJets;
use super::AmbientFrame;
use crate::tensor::{T2, T3, T4, T5};

/// (i e_b)_a: the matrix of the complex structure on R^{2n+2}.
#[inline]
pub fn i_mat(d: usize, a: usize, b: usize) -> f64 {
    debug_assert!(d % 2 == 0);
    if a % 2 == 0 && b == a + 1 {
        -1.0
    } else if a % 2 == 1 && b + 1 == a {
        1.0
    } else {
        0.0
    }
}

fn apply_i(p: &[f64]) -> Vec<f64> {
    let d = p.len();
    let mut out = vec![0.0; d];
    for a in 0..d {
        for b in 0..d {
            let m = i_mat(d, a, b);
            if m != 0.0 {
                out[a] += m * p[b];
            }
        }
    }
    out
}

fn projector(p: &[f64]) -> T2 {
    let d = p.len();
    let mut pr = T2::zeros(d);
    for a in 0..d {
        for b in 0..d {
            let v = if a == b { 1.0 } else { 0.0 };
            pr.set(a, b, v - p[a] * p[b]);
        }
    }
    pr
}

pub fn frame(n: usize, p: &[f64]) -> AmbientFrame {
    let d = 2 * n + 2;
    let ip = apply_i(p);
    let pr = projector(p);
    let mut j = T2::zeros(d);
    for a in 0..d {
        for b in 0..d {
            // J^b_a = i[b][a] + p^b lam_a
            j.set(b, a, i_mat(d, b, a) + p[b] * ip[a]);
        }
    }
    let mut w = T2::zeros(d);
    for a in 0..d {
        for b in 0..d {
            // omega(X, Y) = <iX, Y> on tangent vectors
            w.set(a, b, i_mat(d, b, a));
        }
    }
    AmbientFrame {
        g: pr.clone(),
        ginv: pr,
        lambda: ip.clone(),
        reeb: ip,
        j,
        omega: w,
    }
}

/// Gamma^a_{bc} = p^a P_{bc}.
pub fn christoffel(p: &[f64]) -> T3 {
    let d = p.len();
    let pr = projector(p);
    let mut gamma = T3::zeros(d);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                gamma.set(a, b, c, p[a] * pr.get(b, c));
            }
        }
    }
    gamma
}

pub struct SpherePack {
    pub riemann: T4,
    pub ricci: T2,
    pub nabla_riemann: T5,
}

/// Constant-curvature form R_{abcd} = P_ac P_bd - P_ad P_bc; the round
/// sphere is locally symmetric so nabla R vanishes identically.
pub fn curvature(p: &[f64]) -> SpherePack {
    let d = p.len();
    let pr = projector(p);
    let mut riemann = T4::zeros(d);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    riemann.set(
                        a,
                        b,
                        c,
                        e,
                        pr.get(a, c) * pr.get(b, e) - pr.get(a, e) * pr.get(b, c),
                    );
                }
            }
        }
    }
    let two_n = (d - 2) as f64;
    let mut ricci = T2::zeros(d);
    for a in 0..d {
        for b in 0..d {
            ricci.set(a, b, two_n * pr.get(a, b));
        }
    }
    SpherePack {
        riemann,
        ricci,
        nabla_riemann: T5::zeros(d),
    }
}

/// d_s lam_a = i[a][s].
pub fn dlambda(n: usize, _p: &[f64]) -> T2 {
    let d = 2 * n + 2;
    let mut dl = T2::zeros(d);
    for s in 0..d {
        for a in 0..d {
            dl.set(s, a, i_mat(d, a, s));
        }
    }
    dl
}

/// d_s P_{ab} = -(delta_{sa} p_b + p_a delta_{sb}).
pub fn dmetric(n: usize, p: &[f64]) -> T3 {
    let d = 2 * n + 2;
    let mut dg = T3::zeros(d);
    for s in 0..d {
        for a in 0..d {
            for b in 0..d {
                let mut v = 0.0;
                if s == a {
                    v -= p[b];
                }
                if s == b {
                    v -= p[a];
                }
                dg.set(s, a, b, v);
            }
        }
    }
    dg
}

/// d_s J^b_a = delta^b_s lam_a + p^b i[a][s].
pub fn dj(n: usize, p: &[f64]) -> T3 {
    let d = 2 * n + 2;
    let ip = apply_i(p);
    let mut out = T3::zeros(d);
    for s in 0..d {
        for a in 0..d {
            for b in 0..d {
                let mut v = p[b] * i_mat(d, a, s);
                if b == s {
                    v += ip[a];
                }
                out.set(s, b, a, v);
            }
        }
    }
    out
}

/// Orthonormal basis of T_p S^{2n+1}: the first d-1 columns of the
/// Householder reflection sending p to a coordinate axis.
pub fn tangent_frame(p: &[f64]) -> Vec<Vec<f64>> {
    let d = p.len();
    let mut u = p.to_vec();
    let sign = if p[d - 1] >= 0.0 { 1.0 } else { -1.0 };
    u[d - 1] += sign;
    let unorm_sq: f64 = u.iter().map(|v| v * v).sum();
    let mut frame = Vec::with_capacity(d - 1);
    for k in 0..d - 1 {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        let coeff = 2.0 * u[k] / unorm_sq;
        for a in 0..d {
            e[a] -= coeff * u[a];
        }
        frame.push(e);
    }
    frame
}

/// Round-sphere metric of S^m in a stereographic chart,
/// g_ij = 4 (1 + |u|^2)^{-2} delta_ij. Serves as the independent oracle for
/// the embedded-coordinate curvature path (chart-invariant scalars such as
/// the fitted eta-Einstein constant must agree).
pub struct StereographicJets {
    pub m: usize,
}

impl MetricJets for StereographicJets {
    fn dim(&self) -> usize {
        self.m
    }

    fn metric(&self, u: &[f64]) -> T2 {
        let m = self.m;
        let w = 1.0 + u.iter().map(|v| v * v).sum::<f64>();
        let f = 4.0 / (w * w);
        let mut g = T2::zeros(m);
        for i in 0..m {
            g.set(i, i, f);
        }
        g
    }

    fn dmetric(&self, u: &[f64]) -> T3 {
        let m = self.m;
        let w = 1.0 + u.iter().map(|v| v * v).sum::<f64>();
        let mut dg = T3::zeros(m);
        for s in 0..m {
            let df = -16.0 * u[s] / w.powi(3);
            for i in 0..m {
                dg.set(s, i, i, df);
            }
        }
        dg
    }

    fn d2metric(&self, u: &[f64]) -> T4 {
        let m = self.m;
        let w = 1.0 + u.iter().map(|v| v * v).sum::<f64>();
        let mut d2 = T4::zeros(m);
        for s in 0..m {
            for t in 0..m {
                let mut v = 96.0 * u[s] * u[t] / w.powi(4);
                if s == t {
                    v -= 16.0 / w.powi(3);
                }
                for i in 0..m {
                    d2.set(s, t, i, i, v);
                }
            }
        }
        d2
    }

    fn d3metric_dir(&self, x: &[f64], s: usize, t: usize, uu: usize) -> T2 {
        let m = self.m;
        let w = 1.0 + x.iter().map(|v| v * v).sum::<f64>();
        let mut v = -768.0 * x[s] * x[t] * x[uu] / w.powi(5);
        if s == t {
            v += 96.0 * x[uu] / w.powi(4);
        }
        if s == uu {
            v += 96.0 * x[t] / w.powi(4);
        }
        if t == uu {
            v += 96.0 * x[s] / w.powi(4);
        }
        let mut d3 = T2::zeros(m);
        for i in 0..m {
            d3.set(i, i, v);
        }
        d3
    }
}
