//! The complexified quaternion algebra 𝕄 = ℍ + iℍ.
//!
//! An element is a pair `a + i·b` of quaternions, where the central unit `i`
//! commutes with j, k, l. 𝕄 carries the canonical conjugation
//! `a + ib ↦ a - ib`, whose fixed points recover ℍ. Unlike ℍ, the algebra 𝕄
//! has zero divisors, so there is no general inverse here; the few inverses
//! the calculus needs are computed through minimal polynomials at the call
//! sites.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::quaternion::Quaternion;
use crate::error::{Error, Result};

/// An element `re + i·im` of 𝕄 = ℍ + iℍ.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CQuaternion {
    /// The quaternion part fixed by the conjugation.
    pub re: Quaternion,
    /// The coefficient of the central complex unit i.
    pub im: Quaternion,
}

impl CQuaternion {
    /// The zero element.
    pub const ZERO: CQuaternion = CQuaternion {
        re: Quaternion::ZERO,
        im: Quaternion::ZERO,
    };
    /// The unit element.
    pub const ONE: CQuaternion = CQuaternion {
        re: Quaternion::ONE,
        im: Quaternion::ZERO,
    };

    /// Builds `re + i·im` from two quaternions.
    pub const fn new(re: Quaternion, im: Quaternion) -> Self {
        CQuaternion { re, im }
    }

    /// Embeds a complex scalar `z = x + iy` as `x·1 + i·(y·1)`.
    pub fn from_complex(z: Complex64) -> Self {
        CQuaternion::new(Quaternion::scalar(z.re), Quaternion::scalar(z.im))
    }

    /// The canonical conjugation `a + ib ↦ a - ib`.
    ///
    /// This is complex-conjugate-linear and multiplicative; it does **not**
    /// touch the quaternionic units.
    pub fn conj(&self) -> CQuaternion {
        CQuaternion::new(self.re, -self.im)
    }

    /// Central multiplication by a complex scalar.
    pub fn scale(&self, z: Complex64) -> CQuaternion {
        CQuaternion::new(
            self.re * z.re - self.im * z.im,
            self.re * z.im + self.im * z.re,
        )
    }

    /// Euclidean norm on the 8 real coordinates. Used only in diagnostics
    /// and tolerances, never inside a formula.
    pub fn norm(&self) -> f64 {
        (self.re.norm_sqr() + self.im.norm_sqr()).sqrt()
    }

    /// True when the element is fixed by the conjugation (lies in ℍ) to
    /// `rtol` relative to its norm.
    pub fn is_quaternion(&self, rtol: f64) -> bool {
        self.im.norm() <= rtol * self.norm().max(1.0)
    }

    /// Extracts the quaternion when the conjugation fixes the element.
    ///
    /// Errors with [`Error::Domain`] when the i-part is out of tolerance.
    pub fn to_quaternion(&self, rtol: f64) -> Result<Quaternion> {
        if !self.is_quaternion(rtol) {
            return Err(Error::Domain(format!(
                "element is not quaternionic: i-part norm {:.3e} vs scale {:.3e}",
                self.im.norm(),
                self.norm()
            )));
        }
        Ok(self.re)
    }

    /// Componentwise maximum absolute difference; used by tests.
    pub fn max_abs_diff(&self, other: &CQuaternion) -> f64 {
        self.re
            .max_abs_diff(&other.re)
            .max(self.im.max_abs_diff(&other.im))
    }
}

impl From<Quaternion> for CQuaternion {
    fn from(q: Quaternion) -> Self {
        CQuaternion::new(q, Quaternion::ZERO)
    }
}

impl From<Complex64> for CQuaternion {
    fn from(z: Complex64) -> Self {
        CQuaternion::from_complex(z)
    }
}

impl Add for CQuaternion {
    type Output = CQuaternion;
    fn add(self, rhs: CQuaternion) -> CQuaternion {
        CQuaternion::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for CQuaternion {
    fn add_assign(&mut self, rhs: CQuaternion) {
        *self = *self + rhs;
    }
}

impl Sub for CQuaternion {
    type Output = CQuaternion;
    fn sub(self, rhs: CQuaternion) -> CQuaternion {
        CQuaternion::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for CQuaternion {
    type Output = CQuaternion;
    fn neg(self) -> CQuaternion {
        CQuaternion::new(-self.re, -self.im)
    }
}

/// Product in 𝕄: `(a + ib)(c + id) = (ac - bd) + i(ad + bc)`, with each
/// quaternion product taken in ℍ.
impl Mul for CQuaternion {
    type Output = CQuaternion;
    fn mul(self, rhs: CQuaternion) -> CQuaternion {
        CQuaternion::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<f64> for CQuaternion {
    type Output = CQuaternion;
    fn mul(self, r: f64) -> CQuaternion {
        CQuaternion::new(self.re * r, self.im * r)
    }
}
