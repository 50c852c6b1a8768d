//! The real quaternion algebra ℍ.
//!
//! Elements are stored as four real coordinates `x0 + x1·j + x2·k + x3·l`
//! with the multiplication table `jk = -kj = l`, `kl = -lk = j`,
//! `lj = -jl = k`, `j² = k² = l² = -1`.
//!
//! The letter `i` is deliberately *not* used for a quaternion unit: it is
//! reserved for the central complex unit of the complexified algebra
//! 𝕄 = ℍ + iℍ (see [`crate::algebra::CQuaternion`]), which commutes with
//! j, k, l.

use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// A quaternion `x0 + x1·j + x2·k + x3·l` with real coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    /// Coefficient of 1.
    pub x0: f64,
    /// Coefficient of j.
    pub x1: f64,
    /// Coefficient of k.
    pub x2: f64,
    /// Coefficient of l.
    pub x3: f64,
}

impl Quaternion {
    /// The zero quaternion.
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    /// The unit element.
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    /// The imaginary unit j.
    pub const J: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    /// The imaginary unit k.
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    /// The imaginary unit l = jk.
    pub const L: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    /// Builds a quaternion from its four coordinates.
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Quaternion { x0, x1, x2, x3 }
    }

    /// Embeds a real scalar.
    pub const fn scalar(r: f64) -> Self {
        Quaternion::new(r, 0.0, 0.0, 0.0)
    }

    /// Real part ℜq = x0.
    pub fn re(&self) -> f64 {
        self.x0
    }

    /// Imaginary part ℑq = x1·j + x2·k + x3·l as a quaternion.
    pub fn im(&self) -> Quaternion {
        Quaternion::new(0.0, self.x1, self.x2, self.x3)
    }

    /// Norm of the imaginary part, `sqrt(x1² + x2² + x3²)`.
    pub fn im_norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    /// Quaternionic conjugate `q* = x0 - x1·j - x2·k - x3·l`.
    pub fn conj(&self) -> Quaternion {
        Quaternion::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    /// Squared Euclidean norm; equals `q·q*` as a real scalar.
    pub fn norm_sqr(&self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Multiplicative inverse `q⁻¹ = q* / ‖q‖²`.
    ///
    /// Errors with [`Error::Domain`] on the zero quaternion.
    pub fn inverse(&self) -> Result<Quaternion> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::Domain("zero quaternion has no inverse".into()));
        }
        Ok(self.conj() / n2)
    }

    /// True when all coordinates are finite.
    pub fn is_finite(&self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// True when the imaginary part vanishes to `rtol` relative to the norm.
    pub fn is_real(&self, rtol: f64) -> bool {
        self.im_norm() <= rtol * self.norm().max(1.0)
    }

    /// The unit imaginary direction `ℑq / ‖ℑq‖`.
    ///
    /// Errors with [`Error::Domain`] when `ℑq = 0` (the direction is
    /// undefined on the real axis).
    pub fn unit_imaginary(&self) -> Result<Quaternion> {
        let n = self.im_norm();
        if n == 0.0 {
            return Err(Error::Domain(
                "unit imaginary direction undefined for real quaternion".into(),
            ));
        }
        Ok(self.im() / n)
    }

    /// The spectrum of `q`: the conjugate pair `s±(q) = ℜq ± i‖ℑq‖`,
    /// returned with the nonnegative-imaginary-part root first.
    ///
    /// These are exactly the roots of [`Quaternion::min_poly`]. A real
    /// quaternion yields a doubled real point.
    pub fn spectrum(&self) -> (Complex64, Complex64) {
        let u = self.re();
        let v = self.im_norm();
        (Complex64::new(u, v), Complex64::new(u, -v))
    }

    /// Coefficients `(1, -2ℜq, ‖q‖²)` of the minimal polynomial
    /// `λ² - 2λℜq + ‖q‖²`, leading coefficient first.
    ///
    /// Evaluating this polynomial at `q` itself (via quaternion
    /// multiplication) gives zero.
    pub fn min_poly(&self) -> (f64, f64, f64) {
        (1.0, -2.0 * self.re(), self.norm_sqr())
    }

    /// True when `p` and `q` lie on the same spectral sphere, i.e. their
    /// spectra (equivalently their minimal polynomials) agree to `rtol`.
    pub fn same_sphere(&self, other: &Quaternion, rtol: f64) -> bool {
        let s = self.norm().max(other.norm()).max(1.0);
        (self.re() - other.re()).abs() <= rtol * s
            && (self.im_norm() - other.im_norm()).abs() <= rtol * s
    }

    /// Componentwise maximum absolute difference; used by tests.
    pub fn max_abs_diff(&self, other: &Quaternion) -> f64 {
        (self.x0 - other.x0)
            .abs()
            .max((self.x1 - other.x1).abs())
            .max((self.x2 - other.x2).abs())
            .max((self.x3 - other.x3).abs())
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:+.6}{:+.6}j{:+.6}k{:+.6}l",
            self.x0, self.x1, self.x2, self.x3
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.x0 + rhs.x0,
            self.x1 + rhs.x1,
            self.x2 + rhs.x2,
            self.x3 + rhs.x3,
        )
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.x0 - rhs.x0,
            self.x1 - rhs.x1,
            self.x2 - rhs.x2,
            self.x3 - rhs.x3,
        )
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

/// Hamilton product with the table `jk = -kj = l`, `kl = -lk = j`,
/// `lj = -jl = k`.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: Quaternion) -> Quaternion {
        let (a, b, c, d) = (self.x0, self.x1, self.x2, self.x3);
        let (e, f, g, h) = (r.x0, r.x1, r.x2, r.x3);
        Quaternion::new(
            a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g + c * e + d * f - b * h,
            a * h + d * e + b * g - c * f,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: f64) -> Quaternion {
        Quaternion::new(self.x0 * r, self.x1 * r, self.x2 * r, self.x3 * r)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, r: f64) -> Quaternion {
        Quaternion::new(self.x0 / r, self.x1 / r, self.x2 / r, self.x3 / r)
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Quaternion::scalar(r)
    }
}

/// Serialized as the JSON array `[x0, x1, x2, x3]`.
impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(4)?;
        t.serialize_element(&self.x0)?;
        t.serialize_element(&self.x1)?;
        t.serialize_element(&self.x2)?;
        t.serialize_element(&self.x3)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct QVisitor;
        impl<'de> Visitor<'de> for QVisitor {
            type Value = Quaternion;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array [x0, x1, x2, x3] of four numbers")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Quaternion, A::Error> {
                let x0 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let x1 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let x2 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(2, &self))?;
                let x3 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(3, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(5, &self));
                }
                Ok(Quaternion::new(x0, x1, x2, x3))
            }
        }
        deserializer.deserialize_tuple(4, QVisitor)
    }
}
