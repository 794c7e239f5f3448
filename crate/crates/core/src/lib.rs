//! Numerical laboratory for the Legendrian mean curvature flow in
//! eta-Einstein Sasakian model spaces.
//!
//! The crate is organised along the pipeline:
//! [`ambient`] provides the model geometries, [`immersion`] discretises
//! closed Legendrian submanifolds and their fundamental forms, [`spectral`]
//! carries the Laplace-Beltrami eigenproblem and the angle solve dα = H,
//! [`flow`] integrates dF/dt = -∇^k α v_k - 2 α T with the coupled angle
//! equation, [`analysis`] computes diagnostics, stability reports and
//! inequality audits, and [`verify`] re-evaluates the tensor identities and
//! evolution equations on analytic and flowed immersions.

pub mod ambient;
pub mod error;
pub mod fft;
pub mod tensor;
pub mod immersion;
pub mod spectral;
pub mod tolerances;

pub use error::{Error, Result};
