//! Periodic spectral differentiation on uniform grids over [0, 2pi)^n.
//!
//! All fields are sampled at theta_j = 2 pi j / N. Differentiation
//! multiplies Fourier modes by (i k); the Nyquist mode is zeroed for odd
//! derivative orders so that real data stays real.

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Spectral differentiation engine for one periodic axis.
#[derive(Clone)]
pub struct AxisFft {
    pub n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl AxisFft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        AxisFft {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    /// Signed wavenumber of mode index m.
    #[inline]
    pub fn wavenumber(&self, m: usize) -> i64 {
        let n = self.n as i64;
        let m = m as i64;
        if m <= n / 2 {
            m
        } else {
            m - n
        }
    }

    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    pub fn inverse_real(&self, mut buf: Vec<Complex64>) -> Vec<f64> {
        self.inv.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter().map(|z| z.re * scale).collect()
    }

    /// d^order/dtheta^order of a periodic sample vector.
    pub fn derivative(&self, f: &[f64], order: u32) -> Vec<f64> {
        assert_eq!(f.len(), self.n);
        let mut hat = self.forward(f);
        let n = self.n;
        for (m, h) in hat.iter_mut().enumerate() {
            let k = self.wavenumber(m);
            // drop the unsigned Nyquist mode for odd orders
            if order % 2 == 1 && n % 2 == 0 && m == n / 2 {
                *h = Complex64::new(0.0, 0.0);
                continue;
            }
            let ik = Complex64::new(0.0, k as f64);
            *h *= ik.powu(order);
        }
        self.inverse_real(hat)
    }

    /// Mean-zero antiderivative: solves da/dtheta = f with mean(a) = 0.
    /// The mean of f (the cycle obstruction) is ignored; callers check it.
    pub fn antiderivative_mean_zero(&self, f: &[f64]) -> Vec<f64> {
        let mut hat = self.forward(f);
        let n = self.n;
        for (m, h) in hat.iter_mut().enumerate() {
            let k = self.wavenumber(m);
            if k == 0 || (n % 2 == 0 && m == n / 2) {
                *h = Complex64::new(0.0, 0.0);
            } else {
                *h /= Complex64::new(0.0, k as f64);
            }
        }
        self.inverse_real(hat)
    }

    /// Fraction of spectral energy carried by the top third of wavenumbers.
    pub fn top_third_energy_fraction(&self, f: &[f64]) -> f64 {
        let hat = self.forward(f);
        let cut = self.n as i64 / 3;
        let mut total = 0.0;
        let mut top = 0.0;
        for (m, h) in hat.iter().enumerate() {
            if m == 0 {
                continue; // the mean carries no resolution information
            }
            let e = h.norm_sqr();
            total += e;
            if self.wavenumber(m).abs() >= cut {
                top += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            top / total
        }
    }

    /// Dense spectral differentiation matrix, built by differentiating the
    /// nodal basis so it is bit-consistent with `derivative`.
    pub fn derivative_matrix(&self) -> nalgebra::DMatrix<f64> {
        let n = self.n;
        let mut m = nalgebra::DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.derivative(&e, 1);
            for i in 0..n {
                m[(i, j)] = col[i];
            }
            e[j] = 0.0;
        }
        m
    }
}

/// Grid shape: periodic curve (n = 1) or periodic torus grid (n = 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GridShape {
    Curve { n: usize },
    Torus { n1: usize, n2: usize },
}

impl GridShape {
    pub fn node_count(&self) -> usize {
        match *self {
            GridShape::Curve { n } => n,
            GridShape::Torus { n1, n2 } => n1 * n2,
        }
    }
    pub fn dim(&self) -> usize {
        match self {
            GridShape::Curve { .. } => 1,
            GridShape::Torus { .. } => 2,
        }
    }
    pub fn axis_len(&self, axis: usize) -> usize {
        match *self {
            GridShape::Curve { n } => {
                assert_eq!(axis, 0);
                n
            }
            GridShape::Torus { n1, n2 } => match axis {
                0 => n1,
                1 => n2,
                _ => panic!("axis out of range"),
            },
        }
    }
    /// Uniform quadrature weight per node, prod_axes (2 pi / N_axis).
    pub fn node_weight(&self) -> f64 {
        match *self {
            GridShape::Curve { n } => std::f64::consts::TAU / n as f64,
            GridShape::Torus { n1, n2 } => {
                (std::f64::consts::TAU / n1 as f64) * (std::f64::consts::TAU / n2 as f64)
            }
        }
    }
    /// Grid coordinates of node `idx` (row-major for tori).
    pub fn coords(&self, idx: usize) -> [f64; 2] {
        match *self {
            GridShape::Curve { n } => [std::f64::consts::TAU * idx as f64 / n as f64, 0.0],
            GridShape::Torus { n1, n2 } => {
                let i1 = idx / n2;
                let i2 = idx % n2;
                [
                    std::f64::consts::TAU * i1 as f64 / n1 as f64,
                    std::f64::consts::TAU * i2 as f64 / n2 as f64,
                ]
            }
        }
    }
}

/// Spectral differentiation over a 1- or 2-axis periodic grid.
#[derive(Clone)]
pub struct GridFft {
    pub shape: GridShape,
    axes: Vec<AxisFft>,
}

impl GridFft {
    pub fn new(shape: GridShape) -> Self {
        let axes = match shape {
            GridShape::Curve { n } => vec![AxisFft::new(n)],
            GridShape::Torus { n1, n2 } => vec![AxisFft::new(n1), AxisFft::new(n2)],
        };
        GridFft { shape, axes }
    }

    pub fn axis(&self, i: usize) -> &AxisFft {
        &self.axes[i]
    }

    /// First derivative of a node-major field along `axis`.
    pub fn deriv(&self, f: &[f64], axis: usize) -> Vec<f64> {
        self.deriv_order(f, axis, 1)
    }

    /// Arbitrary-order derivative along one axis.
    pub fn deriv_order(&self, f: &[f64], axis: usize, order: u32) -> Vec<f64> {
        match self.shape {
            GridShape::Curve { .. } => self.axes[0].derivative(f, order),
            GridShape::Torus { n1, n2 } => {
                let mut out = vec![0.0; n1 * n2];
                match axis {
                    0 => {
                        // derivative along the first index: gather columns
                        let mut col = vec![0.0; n1];
                        for i2 in 0..n2 {
                            for i1 in 0..n1 {
                                col[i1] = f[i1 * n2 + i2];
                            }
                            let d = self.axes[0].derivative(&col, order);
                            for i1 in 0..n1 {
                                out[i1 * n2 + i2] = d[i1];
                            }
                        }
                    }
                    1 => {
                        for i1 in 0..n1 {
                            let row = &f[i1 * n2..(i1 + 1) * n2];
                            let d = self.axes[1].derivative(row, order);
                            out[i1 * n2..(i1 + 1) * n2].copy_from_slice(&d);
                        }
                    }
                    _ => panic!("axis out of range"),
                }
                out
            }
        }
    }

    /// Mixed second derivative d^2/(dtheta_a dtheta_b).
    pub fn deriv2(&self, f: &[f64], a: usize, b: usize) -> Vec<f64> {
        if a == b {
            self.deriv_order(f, a, 2)
        } else {
            let first = self.deriv(f, a);
            self.deriv(&first, b)
        }
    }

    /// Worst-axis fraction of spectral energy in the top third of
    /// wavenumbers; the resolution gate for deformation potentials.
    pub fn top_third_energy_fraction(&self, f: &[f64]) -> f64 {
        match self.shape {
            GridShape::Curve { .. } => self.axes[0].top_third_energy_fraction(f),
            GridShape::Torus { n1, n2 } => {
                let mut worst: f64 = 0.0;
                let mut col = vec![0.0; n1];
                for i2 in 0..n2 {
                    for i1 in 0..n1 {
                        col[i1] = f[i1 * n2 + i2];
                    }
                    worst = worst.max(self.axes[0].top_third_energy_fraction(&col));
                }
                for i1 in 0..n1 {
                    worst = worst.max(
                        self.axes[1].top_third_energy_fraction(&f[i1 * n2..(i1 + 1) * n2]),
                    );
                }
                worst
            }
        }
    }

    /// Least-squares potential for a grid 1-form in flat parameter space:
    /// minimises sum_axes |d_a c - r_a|^2 over mean-zero c. Used by the
    /// Reeb-direction constraint projection. Returns (c, cycle_means)
    /// where cycle_means[a] is the mean of r_a (the holonomy obstruction).
    pub fn flat_potential(&self, r: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
        let nn = self.shape.node_count();
        let cycle_means: Vec<f64> = r
            .iter()
            .map(|ra| ra.iter().sum::<f64>() / nn as f64)
            .collect();
        match self.shape {
            GridShape::Curve { .. } => {
                let c = self.axes[0].antiderivative_mean_zero(&r[0]);
                (c, cycle_means)
            }
            GridShape::Torus { n1, n2 } => {
                // solve -Lap c = -div r in Fourier space: c_hat = (sum_a conj(i k_a) r_a_hat)/|k|^2
                let mut hat1 = forward2(&self.axes, &r[0], n1, n2);
                let hat2 = forward2(&self.axes, &r[1], n1, n2);
                for m1 in 0..n1 {
                    for m2 in 0..n2 {
                        let k1 = self.axes[0].wavenumber(m1) as f64;
                        let k2 = self.axes[1].wavenumber(m2) as f64;
                        let idx = m1 * n2 + m2;
                        let k_sq = k1 * k1 + k2 * k2;
                        if k_sq == 0.0 {
                            hat1[idx] = Complex64::new(0.0, 0.0);
                            continue;
                        }
                        let num = Complex64::new(0.0, -k1) * hat1[idx]
                            + Complex64::new(0.0, -k2) * hat2[idx];
                        hat1[idx] = num / k_sq;
                    }
                }
                let c = inverse2(&self.axes, hat1, n1, n2);
                (c, cycle_means)
            }
        }
    }
}

fn forward2(axes: &[AxisFft], f: &[f64], n1: usize, n2: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    // FFT along axis 1 (contiguous rows)
    for i1 in 0..n1 {
        axes[1].fwd.process(&mut buf[i1 * n2..(i1 + 1) * n2]);
    }
    // FFT along axis 0
    let mut col = vec![Complex64::new(0.0, 0.0); n1];
    for i2 in 0..n2 {
        for i1 in 0..n1 {
            col[i1] = buf[i1 * n2 + i2];
        }
        axes[0].fwd.process(&mut col);
        for i1 in 0..n1 {
            buf[i1 * n2 + i2] = col[i1];
        }
    }
    buf
}

fn inverse2(axes: &[AxisFft], mut buf: Vec<Complex64>, n1: usize, n2: usize) -> Vec<f64> {
    let mut col = vec![Complex64::new(0.0, 0.0); n1];
    for i2 in 0..n2 {
        for i1 in 0..n1 {
            col[i1] = buf[i1 * n2 + i2];
        }
        axes[0].inv.process(&mut col);
        for i1 in 0..n1 {
            buf[i1 * n2 + i2] = col[i1];
        }
    }
    for i1 in 0..n1 {
        axes[1].inv.process(&mut buf[i1 * n2..(i1 + 1) * n2]);
    }
    let scale = 1.0 / (n1 * n2) as f64;
    buf.iter().map(|z| z.re * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn derivative_of_trig_is_exact() {
        let n = 32;
        let ax = AxisFft::new(n);
        let f: Vec<f64> = (0..n).map(|j| (3.0 * TAU * j as f64 / n as f64).sin()).collect();
        let df = ax.derivative(&f, 1);
        for j in 0..n {
            let theta = TAU * j as f64 / n as f64;
            assert!((df[j] - 3.0 * (3.0 * theta).cos()).abs() < 1e-12);
        }
        let d2f = ax.derivative(&f, 2);
        for j in 0..n {
            let theta = TAU * j as f64 / n as f64;
            assert!((d2f[j] + 9.0 * (3.0 * theta).sin()).abs() < 1e-11);
        }
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let n = 64;
        let ax = AxisFft::new(n);
        let f: Vec<f64> = (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                (2.0 * t).cos() - 0.4 * (5.0 * t).sin()
            })
            .collect();
        let df = ax.derivative(&f, 1);
        let back = ax.antiderivative_mean_zero(&df);
        let mean = f.iter().sum::<f64>() / n as f64;
        for j in 0..n {
            assert!((back[j] - (f[j] - mean)).abs() < 1e-12);
        }
    }

    #[test]
    fn torus_mixed_derivative() {
        let shape = GridShape::Torus { n1: 16, n2: 24 };
        let g = GridFft::new(shape);
        let nn = shape.node_count();
        let mut f = vec![0.0; nn];
        for idx in 0..nn {
            let [u, v] = shape.coords(idx);
            f[idx] = (2.0 * u).sin() * (3.0 * v).cos();
        }
        let fd = g.deriv2(&f, 0, 1);
        for idx in 0..nn {
            let [u, v] = shape.coords(idx);
            let expect = 2.0 * (2.0 * u).cos() * (-3.0) * (3.0 * v).sin();
            assert!((fd[idx] - expect).abs() < 1e-11);
        }
    }

    #[test]
    fn flat_potential_recovers_gradient() {
        let shape = GridShape::Torus { n1: 16, n2: 16 };
        let g = GridFft::new(shape);
        let nn = shape.node_count();
        let mut c0 = vec![0.0; nn];
        for idx in 0..nn {
            let [u, v] = shape.coords(idx);
            c0[idx] = (u).sin() * (2.0 * v).cos() + 0.3 * (3.0 * u).cos();
        }
        let r = vec![g.deriv(&c0, 0), g.deriv(&c0, 1)];
        let (c, cycles) = g.flat_potential(&r);
        assert!(cycles[0].abs() < 1e-13 && cycles[1].abs() < 1e-13);
        let mean = c0.iter().sum::<f64>() / nn as f64;
        for idx in 0..nn {
            assert!((c[idx] - (c0[idx] - mean)).abs() < 1e-11);
        }
    }
}
