//! Built-in analytic immersion families and deformation potentials.

use super::DiscreteLegendrian;
use crate::ambient::{ModelKind, SasakianModel};
use crate::error::{Error, Result};
use crate::fft::{AxisFft, GridShape};
use crate::tolerances::{CLOSURE_TOL_FACTOR, MIN_RESOLUTION};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::sync::OnceLock;

/// Named analytic family plus parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub name: String,
    /// overall scale (lemniscate and winding-one loop)
    #[serde(default)]
    pub amplitude: Option<f64>,
    /// radial offset for the hyperbolic geodesic lift; nonzero values do
    /// not close and are rejected
    #[serde(default)]
    pub rho0: Option<f64>,
    /// analytic reparametrisation strength, used by refinement studies to
    /// populate the full Fourier spectrum of an otherwise band-limited curve
    #[serde(default)]
    pub wobble: Option<f64>,
}

impl FamilySpec {
    pub fn named(name: &str) -> Self {
        FamilySpec {
            name: name.into(),
            amplitude: None,
            rho0: None,
            wobble: None,
        }
    }
    pub fn with_wobble(name: &str, wobble: f64) -> Self {
        FamilySpec {
            name: name.into(),
            amplitude: None,
            rho0: None,
            wobble: Some(wobble),
        }
    }
}

/// Tangent-angle modulation of the zero-area rotation-index-one loop,
/// psi(theta) = theta + mu sin(2 theta). The signed area
/// pi * sum_k J_k(mu)^2 / (2k+1) starts at pi and turns negative before the
/// first zero of J_0, so a root exists; it is found once by bisection.
fn winding_one_mu() -> f64 {
    static MU: OnceLock<f64> = OnceLock::new();
    *MU.get_or_init(|| {
        let area = |mu: f64| {
            let n = 512;
            let ax = AxisFft::new(n);
            let xp: Vec<f64> = (0..n)
                .map(|j| {
                    let th = TAU * j as f64 / n as f64;
                    (th + mu * (2.0 * th).sin()).cos()
                })
                .collect();
            let yp: Vec<f64> = (0..n)
                .map(|j| {
                    let th = TAU * j as f64 / n as f64;
                    (th + mu * (2.0 * th).sin()).sin()
                })
                .collect();
            let x = ax.antiderivative_mean_zero(&xp);
            let y = ax.antiderivative_mean_zero(&yp);
            // A = 1/2 int (x y' - y x')
            let mut a = 0.0;
            for j in 0..n {
                a += 0.5 * (x[j] * yp[j] - y[j] * xp[j]);
            }
            a * TAU / n as f64
        };
        let mut lo = 0.0;
        let mut hi = 2.4;
        assert!(area(lo) > 0.0 && area(hi) < 0.0);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if area(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

fn check_resolution(shape: GridShape) -> Result<()> {
    let min = match shape {
        GridShape::Curve { n } => n,
        GridShape::Torus { n1, n2 } => n1.min(n2),
    };
    if min < MIN_RESOLUTION {
        return Err(Error::ResolutionTooLow {
            got: min,
            min: MIN_RESOLUTION,
        });
    }
    Ok(())
}

/// Closure check for Heisenberg-type lifts: the vertical increment over one
/// period is the mean of the horizontal defect.
fn check_closure(zprime_mean: f64, scale: f64) -> Result<()> {
    let tol = CLOSURE_TOL_FACTOR * scale.max(1.0);
    let holonomy = zprime_mean * TAU;
    if holonomy.abs() > tol {
        return Err(Error::NotClosable {
            holonomy,
            tol,
        });
    }
    Ok(())
}

/// Builds one of the analytic families at the requested resolution, then
/// optionally composes it with a Legendrian perturbation of amplitude s.
pub fn build_immersion(
    model: &SasakianModel,
    family: &FamilySpec,
    shape: GridShape,
    perturb: Option<(&PotentialSpec, f64)>,
) -> Result<DiscreteLegendrian> {
    check_resolution(shape)?;
    let base = build_base(model, family, shape)?;
    let built = match perturb {
        None => base,
        Some((pot, s)) => {
            let f = pot.evaluate(shape)?;
            super::legendrian_deform(&base, &f, s)?
        }
    };
    let tol = built.legendrian_tol();
    if built.first.max_leg_residual > tol {
        return Err(Error::ProjectionFailed {
            residual: built.first.max_leg_residual,
            sweeps: 0,
            tol,
        });
    }
    Ok(built)
}

fn build_base(
    model: &SasakianModel,
    family: &FamilySpec,
    shape: GridShape,
) -> Result<DiscreteLegendrian> {
    let dchart = model.chart_dim;
    let nn = shape.node_count();
    let axes = shape.dim();
    let mut winding = vec![0i64; dchart * axes];
    let wobble = family.wobble.unwrap_or(0.0);

    let positions: Vec<f64> = match (family.name.as_str(), model.kind) {
        ("great_circle", ModelKind::SphereS3) => {
            let GridShape::Curve { n } = shape else {
                return Err(schema("great_circle needs a curve grid"));
            };
            let mut pos = vec![0.0; nn * dchart];
            for j in 0..n {
                let th = TAU * j as f64 / n as f64;
                let psi = th + wobble * th.sin();
                pos[j * dchart] = psi.cos();
                pos[j * dchart + 2] = psi.sin();
            }
            pos
        }
        ("clifford_torus", ModelKind::SphereS5) => {
            let GridShape::Torus { .. } = shape else {
                return Err(schema("clifford_torus needs a torus grid"));
            };
            let r = 1.0 / 3.0f64.sqrt();
            let mut pos = vec![0.0; nn * dchart];
            for node in 0..nn {
                let [t1, t2] = shape.coords(node);
                let u1 = t1 + wobble * t1.sin();
                let u2 = t2 + wobble * (t2 + 0.7).sin();
                let t3 = -u1 - u2;
                pos[node * dchart] = r * u1.cos();
                pos[node * dchart + 1] = r * u1.sin();
                pos[node * dchart + 2] = r * u2.cos();
                pos[node * dchart + 3] = r * u2.sin();
                pos[node * dchart + 4] = r * t3.cos();
                pos[node * dchart + 5] = r * t3.sin();
            }
            pos
        }
        ("lemniscate_lift", ModelKind::HeisenbergR3) => {
            let GridShape::Curve { n } = shape else {
                return Err(schema("lemniscate_lift needs a curve grid"));
            };
            let a = family.amplitude.unwrap_or(1.0);
            let mut pos = vec![0.0; nn * dchart];
            for j in 0..n {
                let th = TAU * j as f64 / n as f64 + wobble * (TAU * j as f64 / n as f64).sin();
                let x = a * th.sin();
                let y = a * th.sin() * th.cos();
                // z' = y x' integrates in closed form
                let z = a * a * (1.0 - th.cos().powi(3)) / 3.0;
                pos[j * dchart] = x;
                pos[j * dchart + 1] = y;
                pos[j * dchart + 2] = z;
            }
            pos
        }
        ("geodesic_lift", ModelKind::HyperbolicCylinder3) => {
            let GridShape::Curve { n } = shape else {
                return Err(schema("geodesic_lift needs a curve grid"));
            };
            let rho0 = family.rho0.unwrap_or(0.0);
            // z' = -2 sinh(rho0) phi'; the mean of z' is the holonomy scale
            check_closure(-2.0 * rho0.sinh(), 1.0)?;
            let mut pos = vec![0.0; nn * dchart];
            for j in 0..n {
                let th = TAU * j as f64 / n as f64;
                let phi = th + wobble * th.sin();
                pos[j * dchart] = rho0;
                pos[j * dchart + 1] = phi;
                pos[j * dchart + 2] = 0.0;
            }
            // phi winds once along the grid
            winding[1 * axes] = 1;
            pos
        }
        ("winding_one_loop", ModelKind::HeisenbergR3) => {
            let GridShape::Curve { n } = shape else {
                return Err(schema("winding_one_loop needs a curve grid"));
            };
            let a = family.amplitude.unwrap_or(1.0);
            let mu = winding_one_mu();
            let ax = AxisFft::new(n);
            let xp: Vec<f64> = (0..n)
                .map(|j| {
                    let th = TAU * j as f64 / n as f64;
                    a * (th + mu * (2.0 * th).sin()).cos()
                })
                .collect();
            let yp: Vec<f64> = (0..n)
                .map(|j| {
                    let th = TAU * j as f64 / n as f64;
                    a * (th + mu * (2.0 * th).sin()).sin()
                })
                .collect();
            let x = ax.antiderivative_mean_zero(&xp);
            let y = ax.antiderivative_mean_zero(&yp);
            let zp: Vec<f64> = (0..n).map(|j| y[j] * xp[j]).collect();
            let zp_mean = zp.iter().sum::<f64>() / n as f64;
            check_closure(zp_mean, a * a)?;
            let z = ax.antiderivative_mean_zero(&zp);
            let mut pos = vec![0.0; nn * dchart];
            for j in 0..n {
                pos[j * dchart] = x[j];
                pos[j * dchart + 1] = y[j];
                pos[j * dchart + 2] = z[j];
            }
            pos
        }
        (name, kind) => {
            return Err(schema(&format!(
                "family `{name}` is not defined for model `{}`",
                kind.id()
            )));
        }
    };

    DiscreteLegendrian::from_positions(model.clone(), shape, positions, winding)
}

fn schema(msg: &str) -> Error {
    Error::Schema {
        path: "family".into(),
        message: msg.into(),
    }
}

/// Named deformation potential on the grid.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub name: String,
}

impl PotentialSpec {
    pub fn named(name: &str) -> Self {
        PotentialSpec { name: name.into() }
    }

    /// Samples the potential at the grid nodes.
    pub fn evaluate(&self, shape: GridShape) -> Result<Vec<f64>> {
        let nn = shape.node_count();
        let f = |node: usize| -> f64 {
            let [u, v] = shape.coords(node);
            match self.name.as_str() {
                "cos_u" | "cos_phi" | "cos_theta" => u.cos(),
                "sin_u" | "sin_phi" | "sin_theta" => u.sin(),
                "cos_2u" => (2.0 * u).cos(),
                "cos_v" => v.cos(),
                "cos_u_cos_v" => u.cos() * v.cos(),
                _ => f64::NAN,
            }
        };
        let vals: Vec<f64> = (0..nn).map(f).collect();
        if vals.iter().any(|v| v.is_nan()) {
            return Err(Error::Schema {
                path: "perturb.f".into(),
                message: format!("unknown potential `{}`", self.name),
            });
        }
        Ok(vals)
    }
}
