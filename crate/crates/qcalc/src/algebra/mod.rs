//! The quaternion algebra ℍ, its complexification 𝕄 = ℍ + iℍ, and the 2×2
//! complex matrix representation.
//!
//! Conventions used throughout the crate:
//!
//! * quaternion units are written j, k, l with `jk = l`; the letter `i`
//!   always means the central complex unit, which commutes with all of ℍ;
//! * the spectrum of a quaternion `q` is the conjugate pair
//!   `s±(q) = ℜq ± i‖ℑq‖`, the roots of `λ² - 2λℜq + ‖q‖²`;
//! * two quaternions are equivalent when they share this spectrum, i.e. lie
//!   on the same sphere `(ℜq, ‖ℑq‖)`.

mod cquat;
mod matquat;
mod quaternion;

pub use cquat::CQuaternion;
pub use matquat::{embed_cquaternion, MatrixQuaternion};
pub use quaternion::Quaternion;
