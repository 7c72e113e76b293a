//! Numeric tolerances shared across the crate.
//!
//! Every geometric check compares against one of these constants so that the
//! thresholds are documented in a single place.

/// Elementwise tolerance for `RᵀR = I` and `det R = 1`.
pub const ROTATION_TOL: f64 = 1e-9;

/// Relative tolerance for the essential-matrix singular value conditions:
/// `σ₃/σ₁` and `(σ₁ − σ₂)/σ₁` must both fall below it.
pub const ESSENTIAL_TOL: f64 = 1e-6;

/// Sine threshold below which two directions count as parallel. Used for
/// 6D Gram–Schmidt input and for triangulation rays.
pub const PARALLEL_TOL: f64 = 1e-12;

/// Smallest usable vector norm (translations, 6D columns).
pub const MIN_NORM: f64 = 1e-12;

/// Sampson error denominators below this are rejected.
pub const SAMPSON_DENOM_MIN: f64 = 1e-30;

/// Allowed deviation of a solver translation from unit length.
pub const UNIT_NORM_TOL: f64 = 1e-9;

/// Relative imaginary-part threshold for accepting a polynomial root as real.
pub const REAL_ROOT_TOL: f64 = 1e-8;

/// Epipolar residual bound `|q̂ᵀEp̂|` (unit Frobenius E) on the minimal sample
/// for every five-point solution.
pub const MINIMAL_RESIDUAL_TOL: f64 = 1e-8;

/// Points per minimal sample.
pub const MINIMAL_SAMPLE_SIZE: usize = 5;

/// Points required by the linear eight-point refit.
pub const EIGHT_POINT_MIN: usize = 8;
