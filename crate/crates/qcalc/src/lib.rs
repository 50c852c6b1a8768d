//! Spectra and analytic functional calculus for real and quaternionic
//! linear operators.

pub mod algebra;
pub mod contour;
pub mod error;
pub mod format;
pub mod linop;
pub mod numeric;
pub mod pairs;
pub mod rd;
pub mod s_calculus;
pub mod selftest;
pub mod spectra;
pub mod stem;
pub mod tol;

pub use algebra::{CQuaternion, MatrixQuaternion, Quaternion};
pub use error::{Error, Result};
pub use linop::{ComplexOperator, QOperator, RealOperator};
pub use spectra::{ComplexSpectrum, QSpectrumSet};
