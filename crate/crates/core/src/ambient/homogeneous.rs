//! Curvature-derivative bounds K_m from invariant orthonormal frames.
//!
//! All five models are locally homogeneous, so |nabla^k Rm| is a constant
//! scalar. For the group models it is computed algebraically: the structure
//! constants of a left-invariant orthonormal frame determine the frame
//! connection (Koszul), the curvature, and every covariant derivative by the
//! recursion (nabla S)_{a,I} = - sum_j Ghat_{a i_j s} S_{I[j -> s]}, since
//! invariant components are constant. The spheres are locally symmetric:
//! |Rm| = sqrt(2 m (m-1)) for dimension m and all derivatives vanish.

use super::ModelKind;
use crate::tensor::T3;

/// Dense little tensor of arbitrary rank over frame dimension d.
struct FrameTensor {
    d: usize,
    rank: usize,
    a: Vec<f64>,
}

impl FrameTensor {
    fn zeros(d: usize, rank: usize) -> Self {
        FrameTensor {
            d,
            rank,
            a: vec![0.0; d.pow(rank as u32)],
        }
    }
    #[inline]
    fn idx(&self, multi: &[usize]) -> usize {
        let mut k = 0;
        for &i in multi {
            k = k * self.d + i;
        }
        k
    }
    fn norm(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Structure constants c.get(a, b, s) = C^s_{ab} of the invariant frame.
fn structure_constants(kind: ModelKind) -> Option<(usize, T3)> {
    match kind {
        ModelKind::HeisenbergR3 | ModelKind::HeisenbergR5 => {
            let n = if kind == ModelKind::HeisenbergR3 { 1 } else { 2 };
            let d = 2 * n + 1;
            let mut c = T3::zeros(d);
            for i in 0..n {
                // [E_{2i}, E_{2i+1}] = -2 T
                c.set(2 * i, 2 * i + 1, d - 1, -2.0);
                c.set(2 * i + 1, 2 * i, d - 1, 2.0);
            }
            Some((d, c))
        }
        ModelKind::HyperbolicCylinder3 => {
            // horizontal lifts of the hyperbolic-plane frame with
            // [e1, e2] = -e1, plus the contact correction -2T
            let mut c = T3::zeros(3);
            c.set(0, 1, 0, -1.0);
            c.set(1, 0, 0, 1.0);
            c.set(0, 1, 2, -2.0);
            c.set(1, 0, 2, 2.0);
            Some((3, c))
        }
        ModelKind::SphereS3 | ModelKind::SphereS5 => None,
    }
}

/// Frame connection Ghat_{abs} = <nabla_{E_a} E_b, E_s> from Koszul.
fn frame_connection(d: usize, c: &T3) -> T3 {
    let mut gh = T3::zeros(d);
    for a in 0..d {
        for b in 0..d {
            for s in 0..d {
                let v = 0.5 * (c.get(a, b, s) - c.get(b, s, a) + c.get(s, a, b));
                gh.set(a, b, s, v);
            }
        }
    }
    gh
}

/// R_{dcab} = <R(E_a, E_b) E_c, E_d> in the invariant frame.
fn frame_riemann(d: usize, c: &T3, gh: &T3) -> FrameTensor {
    let mut r = FrameTensor::zeros(d, 4);
    for dd in 0..d {
        for cc in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let mut v = 0.0;
                    for s in 0..d {
                        v += gh.get(b, cc, s) * gh.get(a, s, dd)
                            - gh.get(a, cc, s) * gh.get(b, s, dd);
                        v -= c.get(a, b, s) * gh.get(s, cc, dd);
                    }
                    let idx = r.idx(&[dd, cc, a, b]);
                    r.a[idx] = v;
                }
            }
        }
    }
    r
}

/// One covariant derivative in the invariant frame; components are constant
/// so only the connection terms survive.
fn frame_nabla(s: &FrameTensor, gh: &T3) -> FrameTensor {
    let d = s.d;
    let rank = s.rank + 1;
    let mut out = FrameTensor::zeros(d, rank);
    let mut multi = vec![0usize; rank];
    let total = d.pow(rank as u32);
    for flat in 0..total {
        let mut rem = flat;
        for slot in (0..rank).rev() {
            multi[slot] = rem % d;
            rem /= d;
        }
        let a = multi[0];
        let inner = &multi[1..];
        let mut v = 0.0;
        let mut tmp = inner.to_vec();
        for (j, &ij) in inner.iter().enumerate() {
            for ss in 0..d {
                let gcoef = gh.get(a, ij, ss);
                if gcoef != 0.0 {
                    tmp[j] = ss;
                    v -= gcoef * s.a[s.idx(&tmp)];
                    tmp[j] = ij;
                }
            }
        }
        out.a[flat] = v;
    }
    out
}

/// |nabla^k Rm| for k = 0..=5 in the invariant frame.
pub fn derivative_norms(kind: ModelKind) -> [f64; 6] {
    match structure_constants(kind) {
        None => {
            // round sphere of dimension m = 2n+1, curvature one
            let m: f64 = match kind {
                ModelKind::SphereS3 => 3.0,
                ModelKind::SphereS5 => 5.0,
                _ => unreachable!(),
            };
            let r = (2.0 * m * (m - 1.0)).sqrt();
            [r, 0.0, 0.0, 0.0, 0.0, 0.0]
        }
        Some((d, c)) => {
            let gh = frame_connection(d, &c);
            let mut t = frame_riemann(d, &c, &gh);
            let mut out = [0.0; 6];
            out[0] = t.norm();
            for k in 1..6 {
                t = frame_nabla(&t, &gh);
                out[k] = t.norm();
            }
            out
        }
    }
}

/// K_m = sum_{k <= m} sup |nabla^k Rm|, m = 0..5.
pub fn curvature_bounds(kind: ModelKind) -> Vec<f64> {
    let norms = derivative_norms(kind);
    let mut out = Vec::with_capacity(6);
    let mut acc = 0.0;
    for v in norms {
        acc += v;
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_are_monotone() {
        for kind in [
            ModelKind::HeisenbergR3,
            ModelKind::HeisenbergR5,
            ModelKind::SphereS3,
            ModelKind::SphereS5,
            ModelKind::HyperbolicCylinder3,
        ] {
            let b = curvature_bounds(kind);
            assert_eq!(b.len(), 6);
            for w in b.windows(2) {
                assert!(w[1] >= w[0] - 1e-14);
            }
        }
    }

    #[test]
    fn sphere_is_locally_symmetric() {
        let n = derivative_norms(ModelKind::SphereS5);
        assert!((n[0] - 40.0_f64.sqrt()).abs() < 1e-12);
        for v in &n[1..] {
            assert_eq!(*v, 0.0);
        }
    }

    #[test]
    fn frame_connection_is_metric_compatible() {
        // Ghat must be antisymmetric in its last two slots
        for kind in [ModelKind::HeisenbergR5, ModelKind::HyperbolicCylinder3] {
            let (d, c) = structure_constants(kind).unwrap();
            let gh = frame_connection(d, &c);
            for a in 0..d {
                for b in 0..d {
                    for s in 0..d {
                        assert!((gh.get(a, b, s) + gh.get(a, s, b)).abs() < 1e-14);
                    }
                }
            }
        }
    }
}
