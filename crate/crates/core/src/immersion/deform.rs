//! Legendrian deformations generated by a potential:
//! dF/ds = J grad f + 2 f T, with f transported as a fixed function of the
//! grid label. Integrated by RK4 in s with a resolution-independent substep,
//! then pushed back onto the constraint surface.

use super::constraint::project_positions;
use super::{position_derivative, DiscreteLegendrian};
use crate::ambient::SasakianModel;
use crate::error::{Error, Result};
use crate::fft::{GridFft, GridShape};
use crate::tensor::T2;
use crate::tolerances::POTENTIAL_RESOLUTION_TOL;

/// A Legendrian variation field at fixed positions.
#[derive(Debug, Clone)]
pub struct DeformationField {
    /// potential per node
    pub f: Vec<f64>,
    /// isotropic component theta = df/2, node * n
    pub theta: Vec<f64>,
    /// ambient vector J grad f + 2 f T per node, node * D
    pub x_field: Vec<f64>,
}

/// Evaluates the variation field on an immersion.
pub fn deformation_field(l: &DiscreteLegendrian, f: &[f64]) -> DeformationField {
    let x_field = variation_vector(
        &l.model,
        l.shape,
        &l.positions,
        &l.winding,
        &l.fft,
        f,
    );
    let n = l.dim();
    let nn = l.node_count();
    let mut theta = vec![0.0; nn * n];
    for axis in 0..n {
        let df = l.fft.deriv(f, axis);
        for node in 0..nn {
            theta[node * n + axis] = 0.5 * df[node];
        }
    }
    DeformationField {
        f: f.to_vec(),
        theta,
        x_field,
    }
}

/// J grad f + 2 f T at the current raw positions.
fn variation_vector(
    model: &SasakianModel,
    shape: GridShape,
    positions: &[f64],
    winding: &[i64],
    fft: &GridFft,
    f: &[f64],
) -> Vec<f64> {
    let nn = shape.node_count();
    let n = shape.dim();
    let dchart = model.chart_dim;
    let tangents: Vec<Vec<f64>> = (0..n)
        .map(|axis| position_derivative(shape, positions, winding, fft, axis))
        .collect();
    let df: Vec<Vec<f64>> = (0..n).map(|axis| fft.deriv(f, axis)).collect();

    let mut out = vec![0.0; nn * dchart];
    let mut point = vec![0.0; dchart];
    for node in 0..nn {
        point.copy_from_slice(&positions[node * dchart..(node + 1) * dchart]);
        model.retract(&mut point);
        let fr = model.frame_eval(&point);

        // induced metric and inverse at this node
        let mut g = T2::zeros(n);
        for a in 0..n {
            for b in 0..n {
                let ta = &tangents[a][node * dchart..(node + 1) * dchart];
                let tb = &tangents[b][node * dchart..(node + 1) * dchart];
                let mut s = 0.0;
                for al in 0..dchart {
                    for be in 0..dchart {
                        s += fr.g.get(al, be) * ta[al] * tb[be];
                    }
                }
                g.set(a, b, s);
            }
        }
        let gi = g.inverse();

        // grad f = g^{ab} (d_b f) F_a
        let mut grad = vec![0.0; dchart];
        for a in 0..n {
            let mut coef = 0.0;
            for b in 0..n {
                coef += gi.get(a, b) * df[b][node];
            }
            for al in 0..dchart {
                grad[al] += coef * tangents[a][node * dchart + al];
            }
        }
        // X = J grad f + 2 f T
        for be in 0..dchart {
            let mut s = 2.0 * f[node] * fr.reeb[be];
            for al in 0..dchart {
                s += fr.j.get(be, al) * grad[al];
            }
            out[node * dchart + be] = s;
        }
    }
    out
}

/// Integrates the deformation up to amplitude s and reprojects.
pub fn legendrian_deform(
    l: &DiscreteLegendrian,
    f: &[f64],
    s: f64,
) -> Result<DiscreteLegendrian> {
    let frac = l.fft.top_third_energy_fraction(f);
    if frac > POTENTIAL_RESOLUTION_TOL {
        return Err(Error::PotentialUnderResolved { fraction: frac });
    }
    if s == 0.0 {
        return Ok(l.clone());
    }
    let n_sub = ((s.abs() / 0.0125).ceil() as usize).max(4);
    let ds = s / n_sub as f64;
    let model = &l.model;
    let shape = l.shape;
    let nn = shape.node_count();
    let dchart = model.chart_dim;

    let mut pos = l.positions.clone();
    let mut stage = vec![0.0; nn * dchart];
    for _ in 0..n_sub {
        let k1 = variation_vector(model, shape, &pos, &l.winding, &l.fft, f);
        for i in 0..nn * dchart {
            stage[i] = pos[i] + 0.5 * ds * k1[i];
        }
        let k2 = variation_vector(model, shape, &stage, &l.winding, &l.fft, f);
        for i in 0..nn * dchart {
            stage[i] = pos[i] + 0.5 * ds * k2[i];
        }
        let k3 = variation_vector(model, shape, &stage, &l.winding, &l.fft, f);
        for i in 0..nn * dchart {
            stage[i] = pos[i] + ds * k3[i];
        }
        let k4 = variation_vector(model, shape, &stage, &l.winding, &l.fft, f);
        for i in 0..nn * dchart {
            pos[i] += ds / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        // pull sphere points back onto the unit sphere after each substep
        if model.is_sphere() {
            for node in 0..nn {
                model.retract(&mut pos[node * dchart..(node + 1) * dchart]);
            }
        }
    }

    project_positions(
        model,
        shape,
        &mut pos,
        &l.winding,
        &l.fft,
        l.legendrian_tol(),
        l.first.vol,
    )?;
    DiscreteLegendrian::from_positions(model.clone(), shape, pos, l.winding.clone())
}
