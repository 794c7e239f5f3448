//! Reeb-direction restoration of the Legendrian constraint.
//!
//! Moving each node by the exact Reeb flow with a per-node parameter c
//! changes the pullback of the contact form by exactly dc in all three
//! model families, so the projection solves dc = -lambda(F_a) in flat least
//! squares (mean-zero c) and applies the flow. Cycle means of the residual
//! are Reeb holonomy and cannot be removed this way; beyond tolerance they
//! mean the state has left the Legendrian isotopy class.

use super::{position_derivative, DiscreteLegendrian};
use crate::ambient::SasakianModel;
use crate::error::{Error, Result};
use crate::fft::{GridFft, GridShape};
use crate::tolerances::{CLOSURE_TOL_FACTOR, PROJECTION_MAX_SWEEPS, PROJECTION_RECOVERABLE};

#[derive(Debug, Clone, Copy, Default)]
pub struct ProjectionOutcome {
    pub residual_before: f64,
    pub residual_after: f64,
    /// max |c| over nodes, accumulated over sweeps
    pub correction_magnitude: f64,
    pub sweeps: usize,
}

/// Residual 1-form lambda(F_a) per node and axis.
fn legendrian_residual(
    model: &SasakianModel,
    shape: GridShape,
    positions: &[f64],
    winding: &[i64],
    fft: &GridFft,
) -> (Vec<Vec<f64>>, f64) {
    let nn = shape.node_count();
    let n = shape.dim();
    let dchart = model.chart_dim;
    let tangents: Vec<Vec<f64>> = (0..n)
        .map(|axis| position_derivative(shape, positions, winding, fft, axis))
        .collect();
    let mut r = vec![vec![0.0; nn]; n];
    let mut maxr = 0.0f64;
    let mut point = vec![0.0; dchart];
    for node in 0..nn {
        point.copy_from_slice(&positions[node * dchart..(node + 1) * dchart]);
        model.retract(&mut point);
        let f = model.frame_eval(&point);
        for a in 0..n {
            let mut s = 0.0;
            for al in 0..dchart {
                s += f.lambda[al] * tangents[a][node * dchart + al];
            }
            r[a][node] = s;
            maxr = maxr.max(s.abs());
        }
    }
    (r, maxr)
}

/// Projects raw positions back to the Legendrian constraint surface.
/// `tol` is the target residual (the grid's legendrian tolerance).
pub fn project_positions(
    model: &SasakianModel,
    shape: GridShape,
    positions: &mut [f64],
    winding: &[i64],
    fft: &GridFft,
    tol: f64,
    volume_scale: f64,
) -> Result<ProjectionOutcome> {
    let nn = shape.node_count();
    let dchart = model.chart_dim;
    let (_, r0) = legendrian_residual(model, shape, positions, winding, fft);
    if r0 > PROJECTION_RECOVERABLE {
        return Err(Error::ProjectionFailed {
            residual: r0,
            sweeps: 0,
            tol: PROJECTION_RECOVERABLE,
        });
    }
    let mut outcome = ProjectionOutcome {
        residual_before: r0,
        residual_after: r0,
        correction_magnitude: 0.0,
        sweeps: 0,
    };
    let closure_tol = CLOSURE_TOL_FACTOR * volume_scale.max(1.0);
    for sweep in 1..=PROJECTION_MAX_SWEEPS {
        if outcome.residual_after < 0.5 * tol {
            break;
        }
        let (r, _) = legendrian_residual(model, shape, positions, winding, fft);
        let (c, cycles) = fft.flat_potential(&r);
        let worst_cycle = cycles.iter().fold(0.0f64, |m, x| m.max(x.abs()))
            * std::f64::consts::TAU;
        if worst_cycle > closure_tol {
            return Err(Error::HolonomyObstruction {
                cycle: worst_cycle,
                tol: closure_tol,
            });
        }
        for node in 0..nn {
            let moved = model.reeb_flow(&positions[node * dchart..(node + 1) * dchart], -c[node]);
            positions[node * dchart..(node + 1) * dchart].copy_from_slice(&moved);
            outcome.correction_magnitude = outcome.correction_magnitude.max(c[node].abs());
        }
        let (_, rafter) = legendrian_residual(model, shape, positions, winding, fft);
        outcome.residual_after = rafter;
        outcome.sweeps = sweep;
    }
    if outcome.residual_after > tol {
        return Err(Error::ProjectionFailed {
            residual: outcome.residual_after,
            sweeps: outcome.sweeps,
            tol,
        });
    }
    Ok(outcome)
}

/// Projection of a whole immersion; returns the corrected immersion with
/// rebuilt caches together with the outcome record.
pub fn project_legendrian(
    l: &DiscreteLegendrian,
) -> Result<(DiscreteLegendrian, ProjectionOutcome)> {
    let mut positions = l.positions.clone();
    let outcome = project_positions(
        &l.model,
        l.shape,
        &mut positions,
        &l.winding,
        &l.fft,
        l.legendrian_tol(),
        l.first.vol,
    )?;
    let projected =
        DiscreteLegendrian::from_positions(l.model.clone(), l.shape, positions, l.winding.clone())?;
    Ok((projected, outcome))
}
