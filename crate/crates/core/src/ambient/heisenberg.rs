//! Sasakian Heisenberg groups R^3 and R^5.
//!
//! Chart (x_1, y_1, ..., x_n, y_n, z), contact form lam = dz - sum y_i dx_i,
//! Reeb field T = d/dz, adapted metric
//!   g = lam (x) lam + (1/2) sum_i (dx_i^2 + dy_i^2).
//! The transverse factor 1/2 is forced by J^2 = -pi once lam is fixed; it
//! makes the transverse geometry flat, so K + 2 = 0.

use super::chart::MetricJets;
use super::AmbientFrame;
use crate::tensor::{T2, T3, T4};

#[inline]
fn xi(i: usize) -> usize {
    2 * i
}
#[inline]
fn yi(i: usize) -> usize {
    2 * i + 1
}

pub struct HeisenbergJets {
    pub n: usize,
}

pub fn jets(n: usize) -> HeisenbergJets {
    HeisenbergJets { n }
}

impl MetricJets for HeisenbergJets {
    fn dim(&self) -> usize {
        2 * self.n + 1
    }

    fn metric(&self, x: &[f64]) -> T2 {
        let n = self.n;
        let d = 2 * n + 1;
        let z = d - 1;
        let mut g = T2::zeros(d);
        for i in 0..n {
            for j in 0..n {
                let mut v = x[yi(i)] * x[yi(j)];
                if i == j {
                    v += 0.5;
                }
                g.set(xi(i), xi(j), v);
            }
            g.set(yi(i), yi(i), 0.5);
            g.set(xi(i), z, -x[yi(i)]);
            g.set(z, xi(i), -x[yi(i)]);
        }
        g.set(z, z, 1.0);
        g
    }

    fn dmetric(&self, x: &[f64]) -> T3 {
        let n = self.n;
        let d = 2 * n + 1;
        let z = d - 1;
        let mut dg = T3::zeros(d);
        for k in 0..n {
            for j in 0..n {
                // d g_{x_k x_j} / d y_k = y_j (+ y_k when j = k, handled below)
                dg.add(yi(k), xi(k), xi(j), x[yi(j)]);
                dg.add(yi(k), xi(j), xi(k), x[yi(j)]);
            }
            dg.set(yi(k), xi(k), z, -1.0);
            dg.set(yi(k), z, xi(k), -1.0);
        }
        dg
    }

    fn d2metric(&self, _x: &[f64]) -> T4 {
        let n = self.n;
        let d = 2 * n + 1;
        let mut d2 = T4::zeros(d);
        for k in 0..n {
            for l in 0..n {
                // d^2 g_{x_i x_j} / dy_k dy_l = delta_ki delta_lj + delta_kj delta_li
                d2.add(yi(k), yi(l), xi(k), xi(l), 1.0);
                d2.add(yi(k), yi(l), xi(l), xi(k), 1.0);
            }
        }
        d2
    }

    fn d3metric_dir(&self, _x: &[f64], _s: usize, _t: usize, _u: usize) -> T2 {
        T2::zeros(2 * self.n + 1)
    }
}

pub fn lambda(n: usize, x: &[f64]) -> Vec<f64> {
    let d = 2 * n + 1;
    let mut l = vec![0.0; d];
    for i in 0..n {
        l[xi(i)] = -x[yi(i)];
    }
    l[d - 1] = 1.0;
    l
}

/// dl.get(s, a) = d lam_a / d x^s.
pub fn dlambda(n: usize) -> T2 {
    let d = 2 * n + 1;
    let mut dl = T2::zeros(d);
    for i in 0..n {
        dl.set(yi(i), xi(i), -1.0);
    }
    dl
}

pub fn omega(n: usize) -> T2 {
    let d = 2 * n + 1;
    let mut w = T2::zeros(d);
    for i in 0..n {
        w.set(xi(i), yi(i), 0.5);
        w.set(yi(i), xi(i), -0.5);
    }
    w
}

pub fn frame(n: usize, x: &[f64]) -> AmbientFrame {
    let d = 2 * n + 1;
    let jets = jets(n);
    let g = jets.metric(x);
    let ginv = g.inverse();
    let w = omega(n);
    let mut reeb = vec![0.0; d];
    reeb[d - 1] = 1.0;
    // J^b_a = omega_{a mu} g^{mu b}
    let mut j = T2::zeros(d);
    for a in 0..d {
        for b in 0..d {
            let mut s = 0.0;
            for mu in 0..d {
                s += w.get(a, mu) * ginv.get(mu, b);
            }
            j.set(b, a, s);
        }
    }
    AmbientFrame {
        g,
        ginv,
        lambda: lambda(n, x),
        reeb,
        j,
        omega: w,
    }
}

/// dj.get(s, b, a) = d J^b_a / dx^s; omega is constant so only the inverse
/// metric varies.
pub fn dj(n: usize, x: &[f64]) -> T3 {
    let d = 2 * n + 1;
    let jets = jets(n);
    let g = jets.metric(x);
    let ginv = g.inverse();
    let dg = jets.dmetric(x);
    let w = omega(n);
    let mut out = T3::zeros(d);
    for s in 0..d {
        // d ginv / dx^s
        let mut dginv = T2::zeros(d);
        for p in 0..d {
            for q in 0..d {
                let mut acc = 0.0;
                for u in 0..d {
                    for v in 0..d {
                        acc -= ginv.get(p, u) * dg.get(s, u, v) * ginv.get(v, q);
                    }
                }
                dginv.set(p, q, acc);
            }
        }
        for a in 0..d {
            for b in 0..d {
                let mut acc = 0.0;
                for mu in 0..d {
                    acc += w.get(a, mu) * dginv.get(mu, b);
                }
                out.set(s, b, a, acc);
            }
        }
    }
    out
}
