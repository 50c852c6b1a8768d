//! Finite-dimensional operator representations.
//!
//! Three concrete operator types cover the desk-scale setting:
//!
//! * [`RealOperator`] — an n×n real matrix acting on ℝⁿ;
//! * [`ComplexOperator`] — an n×n complex matrix acting on ℂⁿ, used both for
//!   complexifications of real operators and for intermediate values of the
//!   contour calculi;
//! * [`QOperator`] — an m×m quaternion matrix acting on ℍᵐ (a right
//!   ℍ-module) by left matrix multiplication, so the action commutes with
//!   every right scalar multiplication `R_q`.
//!
//! The complexification ℂⁿ = ℝⁿ + iℝⁿ carries the coordinatewise conjugation
//! `C`; the induced conjugation on operators is `S♭ = C S C`, which is
//! entrywise complex conjugation ([`flat`]). Real operators are exactly the
//! fixed points, giving the decomposition `S = U + iV` of
//! [`real_imag_parts`].
//!
//! A quaternion matrix is realified in two ways: [`qop_to_complex`] replaces
//! each entry by its 2×2 matrix-quaternion block (a unital multiplicative
//! map onto the complex matrices commuting with the induced conjugation
//! `W ↦ J W̄ J⁻¹`), and [`qop_real_rep`] produces the 4m×4m real matrix of
//! the action in the basis (1, j, k, l) per component. The inverse direction
//! [`complex_to_qop`] recovers quaternion entries from a 2m×2m complex
//! matrix and is the gate through which every calculus result must pass to
//! certify it stayed right-linear.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{MatrixQuaternion, Quaternion};
use crate::error::{Error, Result};

/// An n×n real matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct RealOperator {
    m: DMatrix<f64>,
}

impl RealOperator {
    /// Wraps a square real matrix. Errors when the matrix is not square or
    /// contains a non-finite entry.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "operator must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("operator entries must be finite".into()));
        }
        Ok(RealOperator { m })
    }

    /// Builds from row-major nested vectors.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("rows must all have length n".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        RealOperator::new(DMatrix::from_row_slice(n, n, &flat))
    }

    /// The n×n identity.
    pub fn identity(n: usize) -> Self {
        RealOperator {
            m: DMatrix::identity(n, n),
        }
    }

    /// The n×n zero operator.
    pub fn zeros(n: usize) -> Self {
        RealOperator {
            m: DMatrix::zeros(n, n),
        }
    }

    /// Dimension n.
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// Borrow the underlying matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Consume into the underlying matrix.
    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.norm()
    }

    /// Maximum absolute entry difference.
    pub fn max_abs_diff(&self, other: &RealOperator) -> f64 {
        (&self.m - &other.m).amax()
    }
}

/// An n×n complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator {
    m: DMatrix<Complex64>,
}

impl ComplexOperator {
    /// Wraps a square complex matrix. Errors when the matrix is not square
    /// or contains a non-finite entry.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "operator must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("operator entries must be finite".into()));
        }
        Ok(ComplexOperator { m })
    }

    /// The n×n identity.
    pub fn identity(n: usize) -> Self {
        ComplexOperator {
            m: DMatrix::identity(n, n),
        }
    }

    /// Dimension n.
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// Borrow the underlying matrix.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    /// Consume into the underlying matrix.
    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.norm()
    }

    /// Maximum absolute entry difference.
    pub fn max_abs_diff(&self, other: &ComplexOperator) -> f64 {
        let mut worst = 0.0f64;
        for (a, b) in self.m.iter().zip(other.m.iter()) {
            worst = worst.max((a - b).norm());
        }
        worst
    }

    /// True when the operator is fixed by ♭ (all entries real) to `rtol`
    /// relative to its norm; equivalently, it maps real vectors to real
    /// vectors.
    pub fn is_real(&self, rtol: f64) -> bool {
        let imag: f64 = self.m.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
        imag <= rtol * self.norm().max(1.0)
    }
}

/// An m×m quaternion matrix acting on ℍᵐ by left multiplication, stored
/// row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QOperator {
    dim: usize,
    entries: Vec<Quaternion>,
}

impl QOperator {
    /// Builds from row-major entries; `entries.len()` must equal `dim²` and
    /// every coordinate must be finite.
    pub fn new(dim: usize, entries: Vec<Quaternion>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {dim}x{dim} quaternion matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|q| !q.is_finite()) {
            return Err(Error::Domain("operator entries must be finite".into()));
        }
        Ok(QOperator { dim, entries })
    }

    /// The identity on ℍᵐ.
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Quaternion::ZERO; dim * dim];
        for idx in 0..dim {
            entries[idx * dim + idx] = Quaternion::ONE;
        }
        QOperator { dim, entries }
    }

    /// Diagonal operator with the given quaternion entries.
    pub fn from_diagonal(diag: &[Quaternion]) -> Self {
        let dim = diag.len();
        let mut entries = vec![Quaternion::ZERO; dim * dim];
        for (idx, q) in diag.iter().enumerate() {
            entries[idx * dim + idx] = *q;
        }
        QOperator { dim, entries }
    }

    /// The left scalar multiplication `L_q` on ℍᵐ, as the quaternion matrix
    /// `q·I`.
    pub fn left_scalar(q: Quaternion, dim: usize) -> Self {
        QOperator::from_diagonal(&vec![q; dim])
    }

    /// Dimension m (the quaternionic dimension; the complex realification
    /// has size 2m and the real one 4m).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at (row, col).
    pub fn get(&self, row: usize, col: usize) -> Quaternion {
        self.entries[row * self.dim + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    /// Quaternion matrix product (this ∘ rhs as operators).
    pub fn mul(&self, rhs: &QOperator) -> Result<QOperator> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} with {}x{}",
                self.dim, self.dim, rhs.dim, rhs.dim
            )));
        }
        let d = self.dim;
        let mut out = vec![Quaternion::ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                let mut acc = Quaternion::ZERO;
                for t in 0..d {
                    acc += self.get(r, t) * rhs.get(t, c);
                }
                out[r * d + c] = acc;
            }
        }
        QOperator::new(d, out)
    }

    /// Frobenius norm over all quaternion coordinates.
    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|q| q.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Maximum componentwise difference over all entries.
    pub fn max_abs_diff(&self, other: &QOperator) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

/// Views a real operator as a complex one: the natural extension `T_ℂ` of `T`
/// to ℂⁿ, which is fixed by ♭.
pub fn complexify(t: &RealOperator) -> ComplexOperator {
    ComplexOperator {
        m: t.m.map(|x| Complex64::new(x, 0.0)),
    }
}

/// The conjugation `S♭ = C S C`: entrywise complex conjugation. Involutive
/// and multiplicative (it preserves products in the given order).
pub fn flat(s: &ComplexOperator) -> ComplexOperator {
    ComplexOperator {
        m: s.m.map(|z| z.conj()),
    }
}

/// Decomposes `S = U + iV` with `U = (S + S♭)/2` and `V = (S - S♭)/2i`, both
/// real.
pub fn real_imag_parts(s: &ComplexOperator) -> (RealOperator, RealOperator) {
    let u = RealOperator {
        m: s.m.map(|z| z.re),
    };
    let v = RealOperator {
        m: s.m.map(|z| z.im),
    };
    (u, v)
}

/// The 4×4 real matrix of left multiplication by `q` on ℍ in the basis
/// (1, j, k, l).
fn left_block(q: Quaternion) -> [[f64; 4]; 4] {
    let (a, b, c, d) = (q.x0, q.x1, q.x2, q.x3);
    [
        [a, -b, -c, -d],
        [b, a, -d, c],
        [c, d, a, -b],
        [d, -c, b, a],
    ]
}

/// The 4×4 real matrix of right multiplication by `q` on ℍ in the basis
/// (1, j, k, l).
fn right_block(q: Quaternion) -> [[f64; 4]; 4] {
    let (a, b, c, d) = (q.x0, q.x1, q.x2, q.x3);
    [
        [a, -b, -c, -d],
        [b, a, d, -c],
        [c, -d, a, b],
        [d, c, -b, a],
    ]
}

fn block_diag_4(block: [[f64; 4]; 4], m: usize) -> RealOperator {
    let mut out = DMatrix::zeros(4 * m, 4 * m);
    for comp in 0..m {
        for r in 0..4 {
            for c in 0..4 {
                out[(4 * comp + r, 4 * comp + c)] = block[r][c];
            }
        }
    }
    RealOperator { m: out }
}

/// The right scalar multiplication `R_q(x) = x·q` on ℍᵐ as a 4m×4m real
/// matrix (componentwise right multiplication). `R` is an anti-morphism:
/// `R_p R_q = R_{qp}`.
pub fn right_mult_op(q: Quaternion, m: usize) -> RealOperator {
    block_diag_4(right_block(q), m)
}

/// The left scalar multiplication `L_q(x) = q·x` on ℍᵐ as a 4m×4m real
/// matrix. `L` is an injective algebra morphism.
pub fn left_mult_op(q: Quaternion, m: usize) -> RealOperator {
    block_diag_4(left_block(q), m)
}

/// Tests whether a real-linear map on ℍᵐ, given as a 4m×4m real matrix in
/// the (1, j, k, l) component basis, commutes with the right scalar
/// multiplications `R_j`, `R_k`, `R_l` to `rtol` (the `R_l` check is
/// mathematically redundant but kept as a guard).
pub fn is_right_linear(t: &RealOperator, rtol: f64) -> Result<bool> {
    let n = t.dim();
    if n % 4 != 0 {
        return Err(Error::Dimension(format!(
            "a map on H^m must have real dimension divisible by 4, got {n}"
        )));
    }
    let m = n / 4;
    let scale = rtol * (1.0 + t.norm());
    for unit in [Quaternion::J, Quaternion::K, Quaternion::L] {
        let r = right_mult_op(unit, m);
        let comm = (&t.m * &r.m) - (&r.m * &t.m);
        if comm.norm() > scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Realifies a quaternion matrix to the 2m×2m complex matrix obtained by
/// replacing each entry with its 2×2 matrix-quaternion block. Unital and
/// multiplicative; the image is exactly the set of complex matrices fixed by
/// `W ↦ J W̄ J⁻¹` with `J` the block-diagonal symplectic form of
/// [`conjugation_defect`].
pub fn qop_to_complex(t: &QOperator) -> ComplexOperator {
    let m = t.dim();
    let mut out = DMatrix::from_element(2 * m, 2 * m, Complex64::new(0.0, 0.0));
    for r in 0..m {
        for c in 0..m {
            let block = MatrixQuaternion::from_quaternion(t.get(r, c)).entries();
            for br in 0..2 {
                for bc in 0..2 {
                    out[(2 * r + br, 2 * c + bc)] = block[br][bc];
                }
            }
        }
    }
    ComplexOperator { m: out }
}

/// Realifies a quaternion matrix to its 4m×4m real matrix in the
/// componentwise (1, j, k, l) basis: entry (r, c) becomes the 4×4 left
/// multiplication block of `T[r][c]`.
pub fn qop_real_rep(t: &QOperator) -> RealOperator {
    let m = t.dim();
    let mut out = DMatrix::zeros(4 * m, 4 * m);
    for r in 0..m {
        for c in 0..m {
            let block = left_block(t.get(r, c));
            for br in 0..4 {
                for bc in 0..4 {
                    out[(4 * r + br, 4 * c + bc)] = block[br][bc];
                }
            }
        }
    }
    RealOperator { m: out }
}

/// Distance of a 2m×2m complex matrix from the image of [`qop_to_complex`]:
/// the Frobenius norm of `(S - J S̄ J⁻¹)/2`, where `J` is block-diagonal with
/// 2×2 blocks `[[0, 1], [-1, 0]]`. Zero exactly on the matrices with
/// quaternion block structure; for a calculus result it measures the failure
/// of the ♭-symmetry (equivalently, of right-linearity).
pub fn conjugation_defect(s: &ComplexOperator) -> Result<f64> {
    let n = s.dim();
    if n % 2 != 0 {
        return Err(Error::Dimension(format!(
            "quaternionic realifications have even dimension, got {n}"
        )));
    }
    let m = n / 2;
    let mut defect_sq = 0.0f64;
    for r in 0..m {
        for c in 0..m {
            let (z1, z2, back) = extract_block(&s.m, r, c);
            let ideal = MatrixQuaternion::new(z1, z2).entries();
            for br in 0..2 {
                for bc in 0..2 {
                    defect_sq += (back[br][bc] - ideal[br][bc]).norm_sqr();
                }
            }
        }
    }
    Ok(defect_sq.sqrt())
}

fn extract_block(
    m: &DMatrix<Complex64>,
    r: usize,
    c: usize,
) -> (Complex64, Complex64, [[Complex64; 2]; 2]) {
    let a = m[(2 * r, 2 * c)];
    let b = m[(2 * r, 2 * c + 1)];
    let d = m[(2 * r + 1, 2 * c)];
    let e = m[(2 * r + 1, 2 * c + 1)];
    // Orthogonal projection of the block onto the matrix-quaternion shape.
    let z1 = (a + e.conj()) * 0.5;
    let z2 = (b - d.conj()) * 0.5;
    (z1, z2, [[a, b], [d, e]])
}

/// Recovers the quaternion matrix from a 2m×2m complex realification,
/// projecting each 2×2 block onto the matrix-quaternion shape. Errors with
/// [`Error::RightLinearityViolation`] when the distance from the image
/// exceeds `rtol · (1 + ‖S‖)`.
pub fn complex_to_qop(s: &ComplexOperator, rtol: f64) -> Result<QOperator> {
    let n = s.dim();
    if n % 2 != 0 {
        return Err(Error::Dimension(format!(
            "quaternionic realifications have even dimension, got {n}"
        )));
    }
    let defect = conjugation_defect(s)?;
    let bound = rtol * (1.0 + s.norm());
    if defect > bound {
        return Err(Error::RightLinearityViolation(format!(
            "matrix is {defect:.3e} away from quaternion block structure (bound {bound:.3e})"
        )));
    }
    let m = n / 2;
    let mut entries = Vec::with_capacity(m * m);
    for r in 0..m {
        for c in 0..m {
            let (z1, z2, _) = extract_block(&s.m, r, c);
            entries.push(MatrixQuaternion::new(z1, z2).to_quaternion());
        }
    }
    QOperator::new(m, entries)
}
