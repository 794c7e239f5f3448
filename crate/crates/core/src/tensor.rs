//! Small dense tensors over a runtime chart dimension.
//!
//! Chart dimensions here are at most 6, so plain row-major `Vec<f64>` with
//! inlined indexing is fast enough everywhere, including the rank-5
//! covariant-derivative-of-curvature arrays.

/// Rank-2 tensor (matrix) of shape `d x d`.
#[derive(Debug, Clone, PartialEq)]
pub struct T2 {
    pub d: usize,
    pub a: Vec<f64>,
}

/// Rank-3 tensor of shape `d x d x d`.
#[derive(Debug, Clone, PartialEq)]
pub struct T3 {
    pub d: usize,
    pub a: Vec<f64>,
}

/// Rank-4 tensor of shape `d^4`.
#[derive(Debug, Clone, PartialEq)]
pub struct T4 {
    pub d: usize,
    pub a: Vec<f64>,
}

/// Rank-5 tensor of shape `d^5`.
#[derive(Debug, Clone, PartialEq)]
pub struct T5 {
    pub d: usize,
    pub a: Vec<f64>,
}

impl T2 {
    pub fn zeros(d: usize) -> Self {
        T2 { d, a: vec![0.0; d * d] }
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.d + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.d + j] = v;
    }
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.d + j] += v;
    }
    /// Max absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
    /// Symmetric inverse via nalgebra LU; panics on singular input, callers
    /// guard with `DegenerateMetric` where that can happen.
    pub fn inverse(&self) -> T2 {
        let d = self.d;
        let m = nalgebra::DMatrix::from_row_slice(d, d, &self.a);
        let inv = m.try_inverse().expect("singular rank-2 tensor");
        let mut a = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                a.push(inv[(i, j)]);
            }
        }
        T2 { d, a }
    }
    pub fn det(&self) -> f64 {
        let d = self.d;
        nalgebra::DMatrix::from_row_slice(d, d, &self.a).determinant()
    }
    /// Matrix-vector product `self[i][j] v[j]`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let d = self.d;
        let mut out = vec![0.0; d];
        for i in 0..d {
            let mut s = 0.0;
            for j in 0..d {
                s += self.get(i, j) * v[j];
            }
            out[i] = s;
        }
        out
    }
}

impl T3 {
    pub fn zeros(d: usize) -> Self {
        T3 { d, a: vec![0.0; d * d * d] }
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.a[(i * self.d + j) * self.d + k]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.a[(i * self.d + j) * self.d + k] = v;
    }
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.a[(i * self.d + j) * self.d + k] += v;
    }
    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl T4 {
    pub fn zeros(d: usize) -> Self {
        T4 { d, a: vec![0.0; d * d * d * d] }
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.a[((i * self.d + j) * self.d + k) * self.d + l]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.a[((i * self.d + j) * self.d + k) * self.d + l] = v;
    }
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.a[((i * self.d + j) * self.d + k) * self.d + l] += v;
    }
    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
    pub fn norm_sq(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }
}

impl T5 {
    pub fn zeros(d: usize) -> Self {
        T5 { d, a: vec![0.0; d * d * d * d * d] }
    }
    #[inline]
    pub fn get(&self, s: usize, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.a[(((s * self.d + i) * self.d + j) * self.d + k) * self.d + l]
    }
    #[inline]
    pub fn set(&mut self, s: usize, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.a[(((s * self.d + i) * self.d + j) * self.d + k) * self.d + l] = v;
    }
    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
    pub fn norm_sq(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }
}

/// Euclidean dot product.
#[inline]
pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// `g(u, v)` for a rank-2 metric.
#[inline]
pub fn inner(g: &T2, u: &[f64], v: &[f64]) -> f64 {
    let d = g.d;
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            s += g.get(i, j) * u[i] * v[j];
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let mut g = T2::zeros(3);
        g.set(0, 0, 2.0);
        g.set(1, 1, 0.5);
        g.set(2, 2, 1.0);
        g.set(0, 2, -0.3);
        g.set(2, 0, -0.3);
        let inv = g.inverse();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += g.get(i, k) * inv.get(k, j);
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12);
            }
        }
    }
}
