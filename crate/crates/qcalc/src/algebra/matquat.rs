//! Matrix quaternions: the 2×2 complex representation of ℍ.
//!
//! The embedding sends `q = x0 + x1·j + x2·k + x3·l` to
//!
//! ```text
//! [[ z1,  z2 ],        z1 = x0 + i·x1,
//!  [ -z̄2, z̄1 ]]        z2 = x2 + i·x3,
//! ```
//!
//! an injective unital ℝ-algebra morphism onto the matrices of exactly this
//! shape. Its determinant is `|z1|² + |z2|² = ‖q‖²`, and the eigenvalues of
//! the image are the spectrum `s±(q)` of the quaternion. The same block
//! substitution applied entrywise realifies quaternion matrices; see
//! [`crate::linop::qop_to_complex`].

use num_complex::Complex64;

use super::cquat::CQuaternion;
use super::quaternion::Quaternion;

/// A 2×2 complex matrix of the shape `[[z1, z2], [-z̄2, z̄1]]`, stored by its
/// two defining entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixQuaternion {
    /// Top-left entry; the bottom-right is its conjugate.
    pub z1: Complex64,
    /// Top-right entry; the bottom-left is the negated conjugate.
    pub z2: Complex64,
}

impl MatrixQuaternion {
    /// Builds the matrix quaternion with defining entries `(z1, z2)`.
    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        MatrixQuaternion { z1, z2 }
    }

    /// The image of a quaternion under the embedding.
    pub fn from_quaternion(q: Quaternion) -> Self {
        MatrixQuaternion::new(
            Complex64::new(q.x0, q.x1),
            Complex64::new(q.x2, q.x3),
        )
    }

    /// Inverse of [`MatrixQuaternion::from_quaternion`].
    pub fn to_quaternion(&self) -> Quaternion {
        Quaternion::new(self.z1.re, self.z1.im, self.z2.re, self.z2.im)
    }

    /// The full 2×2 matrix in row-major order.
    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        [[self.z1, self.z2], [-self.z2.conj(), self.z1.conj()]]
    }

    /// Determinant `|z1|² + |z2|²`; equals `‖q‖²` for the image of `q`.
    pub fn det(&self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    /// Matrix product, computed in the closed `(z1, z2)` coordinates.
    pub fn mul(&self, rhs: &MatrixQuaternion) -> MatrixQuaternion {
        MatrixQuaternion::new(
            self.z1 * rhs.z1 - self.z2 * rhs.z2.conj(),
            self.z1 * rhs.z2 + self.z2 * rhs.z1.conj(),
        )
    }

    /// Maximum absolute entry difference against an arbitrary 2×2 matrix.
    pub fn max_abs_diff_entries(&self, other: &[[Complex64; 2]; 2]) -> f64 {
        let e = self.entries();
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((e[r][c] - other[r][c]).norm());
            }
        }
        worst
    }
}

/// The 2×2 complex image of an element of 𝕄: the complex-linear extension of
/// the quaternion embedding, `a + ib ↦ χ(a) + i·χ(b)`. The result is a
/// general 2×2 complex matrix (row-major), no longer of matrix-quaternion
/// shape in general.
pub fn embed_cquaternion(a: &CQuaternion) -> [[Complex64; 2]; 2] {
    let i = Complex64::new(0.0, 1.0);
    let re = MatrixQuaternion::from_quaternion(a.re).entries();
    let im = MatrixQuaternion::from_quaternion(a.im).entries();
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = re[r][c] + i * im[r][c];
        }
    }
    out
}
