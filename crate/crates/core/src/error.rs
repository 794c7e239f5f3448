//! Error taxonomy shared by all subsystems.

use thiserror::Error;

/// Errors raised by geometry construction, solvers and the flow driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point outside chart: {0}")]
    PointOutsideChart(String),

    #[error("degenerate induced metric at node {node}: det(g) = {det:.3e}")]
    DegenerateMetric { node: usize, det: f64 },

    #[error("immersion does not close: holonomy {holonomy:.3e} exceeds tolerance {tol:.3e}")]
    NotClosable { holonomy: f64, tol: f64 },

    #[error("resolution {got} below minimum {min} per dimension")]
    ResolutionTooLow { got: usize, min: usize },

    #[error("Legendrian projection failed: residual {residual:.3e} after {sweeps} sweeps (tol {tol:.3e})")]
    ProjectionFailed { residual: f64, sweeps: usize, tol: f64 },

    #[error("holonomy obstruction: cycle-inconsistent correction {cycle:.3e} exceeds {tol:.3e}")]
    HolonomyObstruction { cycle: f64, tol: f64 },

    #[error("mean curvature form is not exact: worst cycle integral {cycle:.3e} exceeds {tol:.3e}")]
    NonExactMeanCurvature { cycle: f64, tol: f64 },

    #[error("eigenvalue solve failed: {0}")]
    EigSolveFailure(String),

    #[error("stale angle field: |d alpha - H| = {residual:.3e} exceeds drift tolerance {tol:.3e}")]
    StaleAngle { residual: f64, tol: f64 },

    #[error("CFL violation: dt = {dt:.3e} exceeds limit {limit:.3e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("non-finite state at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("initial mean curvature form not exact; the flow is undefined for this data: {0}")]
    InitialDataNotExact(String),

    #[error("immersion is not minimal (max |H| = {max_h:.3e}); second-variation branch skipped")]
    NotMinimal { max_h: f64 },

    #[error("series contains non-positive values; cannot fit an exponential")]
    NonPositiveSeries,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("config schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("deformation potential not spectrally resolved: top-third energy fraction {fraction:.3e}")]
    PotentialUnderResolved { fraction: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
