//! Laplace-Beltrami operator on the induced metric, eigenpairs for the
//! stability criterion, and the weak solve of d alpha = H.
//!
//! Assembly is nodal spectral-Galerkin on the periodic grid: with D_i the
//! exact spectral differentiation matrix along grid axis i and the
//! trapezoid quadrature (spectrally accurate on periodic analytic data),
//!   S = sum_ij D_i^T diag(g^{ij} dmu) D_j,    M = diag(dmu).
//! The kernel of S is exactly the constants because D_i annihilates them.

use crate::error::{Error, Result};
use crate::fft::GridShape;
use crate::immersion::DiscreteLegendrian;
use crate::tolerances::{ANGLE_TOL, EIG_RESIDUAL_TOL, EXACTNESS_TOL_FACTOR};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Weak-form assemblies of the Laplace-Beltrami operator.
pub struct LaplaceOperator {
    pub shape: GridShape,
    /// dense stiffness, symmetric positive semidefinite
    pub stiffness: DMatrix<f64>,
    /// diagonal mass (trapezoid lumping is spectrally accurate here)
    pub mass: Vec<f64>,
    /// |S 1|_inf, the kernel residual
    pub kernel_residual: f64,
}

/// First eigenpairs of the generalized problem S phi = lambda M phi with the
/// constant mode deflated.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub eigenvalues: Vec<f64>,
    /// mass-orthonormal eigenfunctions, node-major
    pub eigenfunctions: Vec<Vec<f64>>,
    /// relative residuals |S phi - lambda M phi| / (|lambda| |M phi|)
    pub residuals: Vec<f64>,
}

impl SpectralReport {
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,lambda,residual\n");
        for (i, (l, r)) in self.eigenvalues.iter().zip(&self.residuals).enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, l, r));
        }
        out
    }
}

/// Gauge for the angle solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleGauge {
    /// int alpha dmu = 0
    MeanZero,
    /// int alpha dmu = c * Vol
    CarryConstant(f64),
}

/// Solution of the weak least-squares problem d alpha = H.
#[derive(Debug, Clone)]
pub struct AngleField {
    pub alpha: Vec<f64>,
    /// the mean carried by the gauge
    pub gauge_constant: f64,
    /// fundamental-cycle integrals of H
    pub cycle_integrals: Vec<f64>,
    /// L2 norm of d alpha - H
    pub weak_residual: f64,
    pub exactness_tol: f64,
}

/// Dense derivative operators per axis (D_i applied to nodal vectors).
fn derivative_operators(l: &DiscreteLegendrian) -> Vec<DMatrix<f64>> {
    let nn = l.node_count();
    match l.shape {
        GridShape::Curve { .. } => vec![l.fft.axis(0).derivative_matrix()],
        GridShape::Torus { n1, n2 } => {
            let d1 = l.fft.axis(0).derivative_matrix();
            let d2 = l.fft.axis(1).derivative_matrix();
            let mut g1 = DMatrix::zeros(nn, nn);
            let mut g2 = DMatrix::zeros(nn, nn);
            for r in 0..n1 {
                for s in 0..n2 {
                    let row = r * n2 + s;
                    for p in 0..n1 {
                        g1[(row, p * n2 + s)] = d1[(r, p)];
                    }
                    for q in 0..n2 {
                        g2[(row, r * n2 + q)] = d2[(s, q)];
                    }
                }
            }
            vec![g1, g2]
        }
    }
}

/// Assembles stiffness and mass on the current induced metric.
pub fn assemble(l: &DiscreteLegendrian) -> LaplaceOperator {
    let nn = l.node_count();
    let n = l.dim();
    let ops = derivative_operators(l);
    let mut stiffness = DMatrix::zeros(nn, nn);
    for i in 0..n {
        for j in 0..n {
            // W_ij = diag(g^{ij} dmu)
            let mut scaled = ops[j].clone();
            for node in 0..nn {
                let w = l.first.metric_inv[node * n * n + i * n + j] * l.first.dmu[node];
                for c in 0..nn {
                    scaled[(node, c)] *= w;
                }
            }
            stiffness += ops[i].transpose() * scaled;
        }
    }
    // symmetrize rounding
    let st = stiffness.transpose();
    stiffness = (stiffness + st) * 0.5;
    let ones = DVector::from_element(nn, 1.0);
    let kernel_residual = (&stiffness * ones).amax();
    LaplaceOperator {
        shape: l.shape,
        stiffness,
        mass: l.first.dmu.clone(),
        kernel_residual,
    }
}

/// First k nonzero eigenpairs of the Laplace-Beltrami operator.
pub fn spectrum(l: &DiscreteLegendrian, k: usize) -> Result<SpectralReport> {
    assert!(k >= 1);
    let op = assemble(l);
    let nn = l.node_count();
    // B = M^{-1/2} S M^{-1/2}
    let inv_sqrt_m: Vec<f64> = op.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let mut b = op.stiffness.clone();
    for r in 0..nn {
        for c in 0..nn {
            b[(r, c)] *= inv_sqrt_m[r] * inv_sqrt_m[c];
        }
    }
    let eig = b.symmetric_eigen();
    let mut order: Vec<usize> = (0..nn).collect();
    order.sort_by(|&a, &bb| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[bb])
            .expect("finite eigenvalues")
    });
    // deflate the numerical kernel: the constants, plus the zeroed Nyquist
    // sawtooth mode(s) on even grids
    let zero_scale = eig.eigenvalues[order[nn - 1]].abs().max(1.0);
    let zero_tol = 1e-10 * zero_scale + 1e-12;
    if eig.eigenvalues[order[0]].abs() > 1e-8 * zero_scale {
        return Err(Error::EigSolveFailure(format!(
            "kernel eigenvalue {:.3e} not numerically zero",
            eig.eigenvalues[order[0]]
        )));
    }
    let first_nonzero = order
        .iter()
        .position(|&c| eig.eigenvalues[c] > zero_tol)
        .ok_or_else(|| Error::EigSolveFailure("empty positive spectrum".into()))?;
    let keep = k.min(nn - first_nonzero);
    let mut eigenvalues = Vec::with_capacity(keep);
    let mut eigenfunctions = Vec::with_capacity(keep);
    let mut residuals = Vec::with_capacity(keep);
    for idx in first_nonzero..first_nonzero + keep {
        let col = order[idx];
        let lambda = eig.eigenvalues[col];
        let y = eig.eigenvectors.column(col);
        let mut phi: Vec<f64> = (0..nn).map(|r| y[r] * inv_sqrt_m[r]).collect();
        // deterministic sign: largest-magnitude entry positive
        let mut mx = 0.0;
        let mut sign = 1.0;
        for &v in &phi {
            if v.abs() > mx {
                mx = v.abs();
                sign = if v >= 0.0 { 1.0 } else { -1.0 };
            }
        }
        for v in &mut phi {
            *v *= sign;
        }
        // residual |S phi - lambda M phi| / (lambda |M phi|)
        let phiv = DVector::from_column_slice(&phi);
        let mut mphi = phiv.clone();
        for r in 0..nn {
            mphi[r] *= op.mass[r];
        }
        let res = (&op.stiffness * &phiv - lambda * &mphi).norm() / (lambda.abs() * mphi.norm());
        if !res.is_finite() {
            return Err(Error::EigSolveFailure("non-finite eigen residual".into()));
        }
        eigenvalues.push(lambda);
        eigenfunctions.push(phi);
        residuals.push(res);
    }
    if residuals.iter().any(|&r| r > EIG_RESIDUAL_TOL) {
        return Err(Error::EigSolveFailure(format!(
            "worst relative residual {:.3e}",
            residuals.iter().cloned().fold(0.0, f64::max)
        )));
    }
    Ok(SpectralReport {
        eigenvalues,
        eigenfunctions,
        residuals,
    })
}

/// Euclid-normalised sawtooth kernel vectors of the spectral derivative on
/// even-length axes.
fn nyquist_kernel_vectors(shape: GridShape) -> Vec<Vec<f64>> {
    let nn = shape.node_count();
    let mut out = Vec::new();
    let saw = |len: usize, idx: usize| if idx % 2 == 0 { 1.0 } else { -1.0 };
    match shape {
        GridShape::Curve { n } => {
            if n % 2 == 0 {
                let norm = (nn as f64).sqrt();
                out.push((0..nn).map(|j| saw(n, j) / norm).collect());
            }
        }
        GridShape::Torus { n1, n2 } => {
            let norm = (nn as f64).sqrt();
            if n1 % 2 == 0 {
                out.push((0..nn).map(|j| saw(n1, j / n2) / norm).collect());
            }
            if n2 % 2 == 0 {
                out.push((0..nn).map(|j| saw(n2, j % n2) / norm).collect());
            }
            if n1 % 2 == 0 && n2 % 2 == 0 {
                out.push(
                    (0..nn)
                        .map(|j| saw(n1, j / n2) * saw(n2, j % n2) / norm)
                        .collect(),
                );
            }
        }
    }
    out
}

/// Fundamental-cycle integrals of a nodal 1-form (node * n layout):
/// the theta_a-cycle integral averaged over the transverse coordinate.
pub fn cycle_integrals(shape: GridShape, h: &[f64]) -> Vec<f64> {
    let n = shape.dim();
    let nn = shape.node_count();
    let mut out = vec![0.0; n];
    for a in 0..n {
        let len = shape.axis_len(a) as f64;
        let mut acc = 0.0;
        for node in 0..nn {
            acc += h[node * n + a];
        }
        // mean over transverse nodes of the cycle quadrature
        out[a] = acc * std::f64::consts::TAU / len / (nn as f64 / len);
    }
    out
}

/// Weak least-squares solve of d alpha = H.
pub fn solve_angle(
    l: &DiscreteLegendrian,
    h: &[f64],
    gauge: AngleGauge,
) -> Result<AngleField> {
    let nn = l.node_count();
    let n = l.dim();
    assert_eq!(h.len(), nn * n);

    // exactness gate
    let cycles = cycle_integrals(l.shape, h);
    let h_l1: f64 = (0..nn)
        .map(|node| l.one_form_norm_sq(h, node).sqrt() * l.first.dmu[node])
        .sum();
    let exactness_tol = EXACTNESS_TOL_FACTOR * h_l1.max(1.0);
    let worst_cycle = cycles.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if worst_cycle > exactness_tol {
        return Err(Error::NonExactMeanCurvature {
            cycle: worst_cycle,
            tol: exactness_tol,
        });
    }

    let op = assemble(l);
    let ops = derivative_operators(l);
    // rhs b_a = sum_i D_i^T (g^{ij} H_j dmu)
    let mut b = DVector::zeros(nn);
    for i in 0..n {
        let mut w = DVector::zeros(nn);
        for node in 0..nn {
            let mut s = 0.0;
            for j in 0..n {
                s += l.first.metric_inv[node * n * n + i * n + j] * h[node * n + j];
            }
            w[node] = s * l.first.dmu[node];
        }
        b += ops[i].transpose() * w;
    }

    // rank-one shifts make the system SPD: the mass direction pins the
    // mean, and the sawtooth directions pin the zeroed Nyquist kernel of the
    // spectral derivative on even grids. The right side is exactly
    // orthogonal to all of them, so the solution is untouched.
    let mvec = DVector::from_column_slice(&op.mass);
    let mnorm = mvec.norm();
    let mhat = &mvec / mnorm;
    let sigma = op.stiffness.diagonal().sum() / nn as f64;
    let mut shifted = op.stiffness.clone();
    for r in 0..nn {
        for c in 0..nn {
            shifted[(r, c)] += sigma * mhat[r] * mhat[c];
        }
    }
    for s in nyquist_kernel_vectors(l.shape) {
        for r in 0..nn {
            for c in 0..nn {
                shifted[(r, c)] += sigma * s[r] * s[c];
            }
        }
    }
    let chol = shifted
        .cholesky()
        .ok_or_else(|| Error::EigSolveFailure("angle normal equations not SPD".into()))?;
    let alpha0 = chol.solve(&b);

    let vol = l.first.vol;
    let mean0 = alpha0
        .iter()
        .zip(&op.mass)
        .map(|(a, m)| a * m)
        .sum::<f64>()
        / vol;
    let target_mean = match gauge {
        AngleGauge::MeanZero => 0.0,
        AngleGauge::CarryConstant(c) => c,
    };
    let shift = target_mean - mean0;
    let alpha: Vec<f64> = alpha0.iter().map(|a| a + shift).collect();

    // pointwise weak residual |d alpha - H|_L2
    let mut resid = vec![0.0; nn * n];
    for a in 0..n {
        let da = l.fft.deriv(&alpha, a);
        for node in 0..nn {
            resid[node * n + a] = da[node] - h[node * n + a];
        }
    }
    let weak_residual = l.one_form_l2_sq(&resid).sqrt();
    let h_l2 = l.one_form_l2_sq(h).sqrt();
    if weak_residual > ANGLE_TOL * h_l2 + 1e-10 {
        return Err(Error::EigSolveFailure(format!(
            "angle weak residual {:.3e} above tolerance",
            weak_residual
        )));
    }

    Ok(AngleField {
        alpha,
        gauge_constant: target_mean,
        cycle_integrals: cycles,
        weak_residual,
        exactness_tol,
    })
}

/// Pointwise (strong form) Laplace-Beltrami of a nodal scalar on the
/// induced metric: g^{ij} (d_i d_j f - Gamma^k_{ij} d_k f).
pub fn laplace_beltrami_pointwise(l: &DiscreteLegendrian, f: &[f64]) -> Vec<f64> {
    let nn = l.node_count();
    let n = l.dim();
    let df: Vec<Vec<f64>> = (0..n).map(|a| l.fft.deriv(f, a)).collect();
    let mut d2f = vec![vec![0.0; nn]; n * n];
    for a in 0..n {
        for b in 0..n {
            d2f[a * n + b] = l.fft.deriv2(f, a, b);
        }
    }
    let mut out = vec![0.0; nn];
    for node in 0..nn {
        let gi = &l.first.metric_inv[node * n * n..(node + 1) * n * n];
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut v = d2f[a * n + b][node];
                for k in 0..n {
                    v -= l.second.gamma_ind[node * n * n * n + (k * n + a) * n + b] * df[k][node];
                }
                s += gi[a * n + b] * v;
            }
        }
        out[node] = s;
    }
    out
}

/// Covariant derivative of a nodal 1-form: (nabla w)_{a b} stored node*(n*n)
/// with a the derivative slot.
pub fn covariant_derivative_one_form(l: &DiscreteLegendrian, w: &[f64]) -> Vec<f64> {
    let nn = l.node_count();
    let n = l.dim();
    let mut dw = vec![vec![0.0; nn]; n * n];
    for b in 0..n {
        let series: Vec<f64> = (0..nn).map(|node| w[node * n + b]).collect();
        for a in 0..n {
            dw[a * n + b] = l.fft.deriv(&series, a);
        }
    }
    let mut out = vec![0.0; nn * n * n];
    for node in 0..nn {
        for a in 0..n {
            for b in 0..n {
                let mut v = dw[a * n + b][node];
                for k in 0..n {
                    v -= l.second.gamma_ind[node * n * n * n + (k * n + a) * n + b]
                        * w[node * n + k];
                }
                out[node * n * n + a * n + b] = v;
            }
        }
    }
    out
}
