//! Explicit constants and desk-scale verification for fractional
//! Hardy-Rellich inequalities.
//!
//! The crate evaluates the fractional Laplacian of radial functions through a
//! polar-coordinate reduction to a one-dimensional singular integral, computes
//! the gamma-ratio and quadrature forms of the sharp-constant candidates, and
//! checks every identity and inequality numerically with explicit error
//! margins.

pub mod fraclap;
pub mod kernels;
pub mod quad;
pub mod sharpness;
pub mod specfun;
pub mod testfns;
pub mod verify;

mod error;

pub use error::{Error, Result};

/// Denominator floor for relative differences against a possibly-zero
/// reference value.
pub const MACHINE_FLOOR: f64 = 1e-300;

/// `|value - reference| / max(|reference|, floor)`.
pub fn rel_diff(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(MACHINE_FLOOR)
}
