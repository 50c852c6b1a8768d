//! Numerical tolerances and quadrature defaults.
//!
//! Every gate in the crate funnels through the constants below so that the
//! thresholds stay consistent between modules and can be overridden per call
//! where a function exposes a tolerance parameter.

/// Default relative tolerance for floating comparisons.
pub const DEFAULT_RTOL: f64 = 1e-10;

/// An operator is treated as singular when `sigma_min <= SINGULARITY_RTOL * sigma_max`.
pub const SINGULARITY_RTOL: f64 = 1e-8;

/// Relative bound separating quadrature noise from a genuine symmetry
/// failure: a calculus result whose imaginary (or conjugation-defect) part
/// exceeds `STEM_IMAG_RTOL * norm` is rejected.
pub const STEM_IMAG_RTOL: f64 = 1e-7;

/// Eigenvalues whose imaginary part is below this (times scale) are snapped
/// onto the real axis; near-conjugate pairs are repaired to exact pairs.
pub const PAIRING_TOL: f64 = 1e-10;

/// Default number of trapezoid nodes per contour circle.
pub const DEFAULT_NODES: usize = 256;

/// Default Martinelli resolution: circle angular, disc angular, disc radial.
pub const DEFAULT_PAIR_RES: (usize, usize, usize) = (64, 32, 16);

/// Default seed for the crate's own randomized procedures (joint-eigenvalue
/// shifts, stem-symmetry sampling). Always overridable by callers.
pub const DEFAULT_SEED: u64 = 0x71ca1c;

/// Relative scale helper: `max(1, |a|)`.
#[inline]
pub fn scale_of(a: f64) -> f64 {
    a.abs().max(1.0)
}

/// True when `a` and `b` agree to `rtol` relative to their magnitude.
#[inline]
pub fn approx_eq(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()).max(1.0)
}
