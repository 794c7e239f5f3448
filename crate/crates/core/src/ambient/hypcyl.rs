//! Sasakian structure over the hyperbolic cylinder.
//!
//! Chart (rho, phi, z), phi periodic of period 2 pi. Base metric
//! d rho^2 + cosh^2(rho) d phi^2 (Gauss curvature -1) with Kaehler potential
//! theta = 2 sinh(rho) d phi; contact form lam = dz + theta, Reeb T = d/dz,
//! adapted metric g = lam (x) lam + base. The factor 2 in theta is what
//! J^2 = -pi forces when the base metric itself is kept at curvature -1;
//! the transverse Einstein constant is then K + 2 = -1. The rho = 0 fiber
//! projects to the closed base geodesic, and its horizontal lift is the
//! model's closed minimal Legendrian.

use super::chart::MetricJets;
use super::AmbientFrame;
use crate::tensor::{T2, T3, T4};

pub struct HypCylJets;

pub fn jets() -> HypCylJets {
    HypCylJets
}

impl MetricJets for HypCylJets {
    fn dim(&self) -> usize {
        3
    }

    fn metric(&self, x: &[f64]) -> T2 {
        let rho = x[0];
        let (sh, ch) = (rho.sinh(), rho.cosh());
        let mut g = T2::zeros(3);
        g.set(0, 0, 1.0);
        g.set(1, 1, ch * ch + 4.0 * sh * sh);
        g.set(1, 2, 2.0 * sh);
        g.set(2, 1, 2.0 * sh);
        g.set(2, 2, 1.0);
        g
    }

    fn dmetric(&self, x: &[f64]) -> T3 {
        let rho = x[0];
        let mut dg = T3::zeros(3);
        dg.set(0, 1, 1, 5.0 * (2.0 * rho).sinh());
        dg.set(0, 1, 2, 2.0 * rho.cosh());
        dg.set(0, 2, 1, 2.0 * rho.cosh());
        dg
    }

    fn d2metric(&self, x: &[f64]) -> T4 {
        let rho = x[0];
        let mut d2 = T4::zeros(3);
        d2.set(0, 0, 1, 1, 10.0 * (2.0 * rho).cosh());
        d2.set(0, 0, 1, 2, 2.0 * rho.sinh());
        d2.set(0, 0, 2, 1, 2.0 * rho.sinh());
        d2
    }

    fn d3metric_dir(&self, x: &[f64], s: usize, t: usize, u: usize) -> T2 {
        let mut d3 = T2::zeros(3);
        if s == 0 && t == 0 && u == 0 {
            let rho = x[0];
            d3.set(1, 1, 20.0 * (2.0 * rho).sinh());
            d3.set(1, 2, 2.0 * rho.cosh());
            d3.set(2, 1, 2.0 * rho.cosh());
        }
        d3
    }
}

pub fn lambda(x: &[f64]) -> Vec<f64> {
    vec![0.0, 2.0 * x[0].sinh(), 1.0]
}

pub fn dlambda(x: &[f64]) -> T2 {
    let mut dl = T2::zeros(3);
    dl.set(0, 1, 2.0 * x[0].cosh());
    dl
}

pub fn omega(x: &[f64]) -> T2 {
    let ch = x[0].cosh();
    let mut w = T2::zeros(3);
    w.set(0, 1, ch);
    w.set(1, 0, -ch);
    w
}

fn domega(x: &[f64]) -> T3 {
    let sh = x[0].sinh();
    let mut dw = T3::zeros(3);
    dw.set(0, 0, 1, sh);
    dw.set(0, 1, 0, -sh);
    dw
}

pub fn frame(x: &[f64]) -> AmbientFrame {
    let jets = jets();
    let g = jets.metric(x);
    let ginv = g.inverse();
    let w = omega(x);
    let mut j = T2::zeros(3);
    for a in 0..3 {
        for b in 0..3 {
            let mut s = 0.0;
            for mu in 0..3 {
                s += w.get(a, mu) * ginv.get(mu, b);
            }
            j.set(b, a, s);
        }
    }
    AmbientFrame {
        g,
        ginv,
        lambda: lambda(x),
        reeb: vec![0.0, 0.0, 1.0],
        j,
        omega: w,
    }
}

/// dj.get(s, b, a) = d J^b_a / dx^s.
pub fn dj(x: &[f64]) -> T3 {
    let jets = jets();
    let g = jets.metric(x);
    let ginv = g.inverse();
    let dg = jets.dmetric(x);
    let w = omega(x);
    let dw = domega(x);
    let mut out = T3::zeros(3);
    for s in 0..3 {
        let mut dginv = T2::zeros(3);
        for p in 0..3 {
            for q in 0..3 {
                let mut acc = 0.0;
                for u in 0..3 {
                    for v in 0..3 {
                        acc -= ginv.get(p, u) * dg.get(s, u, v) * ginv.get(v, q);
                    }
                }
                dginv.set(p, q, acc);
            }
        }
        for a in 0..3 {
            for b in 0..3 {
                let mut acc = 0.0;
                for mu in 0..3 {
                    acc += dw.get(s, a, mu) * ginv.get(mu, b) + w.get(a, mu) * dginv.get(mu, b);
                }
                out.set(s, b, a, acc);
            }
        }
    }
    out
}
