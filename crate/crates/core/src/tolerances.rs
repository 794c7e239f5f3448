//! Pinned numerical tolerances.
//!
//! Every acceptance-relevant threshold lives here so that no magic number is
//! buried in a solver. Values are budgets: spectral discretisation of
//! analytic data floors out near 1e-12; thresholds sit one to two orders
//! above the floor they guard.

/// Residual floor for spectrally resolved analytic data.
pub const SPECTRAL_FLOOR: f64 = 1e-10;

/// Ambient identity residuals with closed-form curvature.
pub const AMBIENT_TOL_CLOSED: f64 = 1e-8;

/// Ambient identity residuals with finite-difference curvature.
pub const AMBIENT_TOL_FD: f64 = 1e-4;

/// Step used by the finite-difference curvature mode (central differences on
/// the Christoffel field).
pub const FD_CURVATURE_STEP: f64 = 1e-4;

/// Max pullback of the contact form on tangents of a discrete Legendrian
/// curve (n = 1).
pub const LEGENDRIAN_TOL_CURVE: f64 = 1e-7;

/// Same for tori (n = 2).
pub const LEGENDRIAN_TOL_TORUS: f64 = 1e-6;

/// Closure tolerance for curve lifts, relative to volume scale.
pub const CLOSURE_TOL_FACTOR: f64 = 1e-9;

/// Exactness of the mean curvature form: a fundamental-cycle integral above
/// `EXACTNESS_TOL_FACTOR * max(1, |H|_L1)` marks H as non-exact.
pub const EXACTNESS_TOL_FACTOR: f64 = 1e-6;

/// Weak residual target for the angle solve, relative to |H|.
pub const ANGLE_TOL: f64 = 1e-8;

/// Angle drift allowed along a flow before a correction solve is triggered,
/// relative to max(1, |H|_L2).
pub const DRIFT_TOL: f64 = 1e-6;

/// Recoverable bound for the Legendrian projection.
pub const PROJECTION_RECOVERABLE: f64 = 1e-2;

/// Newton sweeps allowed inside the projection.
pub const PROJECTION_MAX_SWEEPS: usize = 5;

/// Default CFL coefficient for the explicit RK4 stepper (dt = cfl * h_min^2).
pub const DEFAULT_CFL: f64 = 0.2;

/// Default convergence threshold on max |H|.
pub const DEFAULT_CONVERGENCE_MAX_H: f64 = 1e-4;

/// Default blowup threshold factor on the initial max |A|^2.
pub const DEFAULT_BLOWUP_FACTOR: f64 = 1e4;

/// Eigensolve cadence (steps between lambda_1 recomputations).
pub const DEFAULT_SPECTRUM_CADENCE: usize = 10;

/// Multiplicative part of the inequality-audit slack; the additive part is
/// `AUDIT_SLACK_DT_FACTOR * dt` on the margin scale.
pub const AUDIT_SLACK_FACTOR: f64 = 1.05;
pub const AUDIT_SLACK_DT_FACTOR: f64 = 10.0;

/// Volume may not increase by more than this per accepted step.
pub const VOLUME_MONOTONE_SLACK: f64 = 1e-10;

/// Verdict band around `lambda_1 - (K+2)` treated as borderline.
pub const STABILITY_BAND: f64 = 1e-6;

/// Fraction of first-eigenspace energy below which a test potential counts
/// as an essential variation.
pub const ESSENTIAL_ENERGY_TOL: f64 = 1e-6;

/// Spectral resolution gate for deformation potentials: fraction of Fourier
/// energy allowed in the top third of the spectrum.
pub const POTENTIAL_RESOLUTION_TOL: f64 = 1e-8;

/// Minimum grid resolution per dimension.
pub const MIN_RESOLUTION: usize = 16;

/// Relative eigenpair residual bound.
pub const EIG_RESIDUAL_TOL: f64 = 1e-8;

/// Amplitude used for the direct (finite difference) second variation.
pub const SECOND_VARIATION_STEP: f64 = 1e-3;

/// max |H| below which an immersion counts as minimal for the
/// second-variation branch.
pub const MINIMALITY_TOL: f64 = 1e-5;
