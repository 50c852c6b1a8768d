//! Stem functions: the closed analytic-function grammar driving every
//! functional calculus in this crate.
//!
//! A *stem function* is an analytic function `F` on a conjugate-symmetric
//! domain satisfying the symmetry `F(ζ̄) = F(ζ)♭`, where `♭` conjugates the
//! coefficient algebra (complex conjugation on scalars, the central
//! conjugation `a + ib ↦ a - ib` on complexified quaternions, entrywise
//! conjugation on operators). Real, quaternion, and real-operator
//! coefficients with integer powers produce stem functions automatically; a
//! genuinely complex coefficient such as `i` breaks the symmetry, and
//! [`StemFunction::check_stem`] detects that numerically.
//!
//! The grammar is deliberately small — polynomials, `exp`, `sin`, `cos`,
//! shifted reciprocals, sums, and products with scalar factors — so that
//! every member is analytic with computable poles and the symmetry is
//! decidable by construction.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{embed_cquaternion, CQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::linop::RealOperator;
use crate::tol::{DEFAULT_RTOL, DEFAULT_SEED};

/// A polynomial coefficient. Real, quaternion, and operator coefficients
/// preserve stem symmetry; a complex coefficient with nonzero imaginary
/// part breaks it (useful for negative testing and for demonstrating
/// symmetry violations downstream).
#[derive(Debug, Clone)]
pub enum Coefficient {
    Real(f64),
    Complex(Complex64),
    /// Acts by left multiplication on quaternionic values.
    Quat(Quaternion),
    /// Real-entry operator coefficient; acts by left multiplication on
    /// operator values of the same dimension.
    Op(RealOperator),
}

/// The value algebra a stem function lands in, determined by its
/// coefficients. Scalar promotes into either other kind; quaternion and
/// operator coefficients cannot mix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Scalar,
    Quaternionic,
    Operator(usize),
}

impl ValueKind {
    fn merge(self, other: ValueKind) -> Result<ValueKind> {
        use ValueKind::*;
        match (self, other) {
            (Scalar, k) | (k, Scalar) => Ok(k),
            (Quaternionic, Quaternionic) => Ok(Quaternionic),
            (Operator(a), Operator(b)) if a == b => Ok(Operator(a)),
            (Operator(a), Operator(b)) => Err(Error::Dimension(format!(
                "operator coefficients of dimensions {a} and {b} cannot mix"
            ))),
            _ => Err(Error::Domain(
                "quaternion and operator coefficients cannot mix in one stem function".into(),
            )),
        }
    }
}

/// A pointwise value of a stem function: a complex scalar, a complexified
/// quaternion, or a complex matrix.
#[derive(Debug, Clone)]
pub enum StemValue {
    Complex(Complex64),
    CQuat(CQuaternion),
    Op(DMatrix<Complex64>),
}

impl StemValue {
    /// Magnitude used for relative tolerances.
    pub fn norm(&self) -> f64 {
        match self {
            StemValue::Complex(c) => c.norm(),
            StemValue::CQuat(v) => v.norm(),
            StemValue::Op(m) => m.norm(),
        }
    }

    /// Coefficient-algebra conjugation `♭`.
    pub fn flat(&self) -> StemValue {
        match self {
            StemValue::Complex(c) => StemValue::Complex(c.conj()),
            StemValue::CQuat(v) => StemValue::CQuat(v.conj()),
            StemValue::Op(m) => StemValue::Op(m.map(|e| e.conj())),
        }
    }

    fn scale(self, c: Complex64) -> StemValue {
        match self {
            StemValue::Complex(v) => StemValue::Complex(v * c),
            StemValue::CQuat(v) => StemValue::CQuat(v.scale(c)),
            StemValue::Op(m) => StemValue::Op(m * c),
        }
    }

    fn add(self, other: StemValue) -> Result<StemValue> {
        use StemValue::*;
        Ok(match (self, other) {
            (Complex(a), Complex(b)) => Complex(a + b),
            (Complex(a), CQuat(b)) | (CQuat(b), Complex(a)) => {
                CQuat(CQuaternion::from_complex(a) + b)
            }
            (CQuat(a), CQuat(b)) => CQuat(a + b),
            (Complex(a), Op(b)) | (Op(b), Complex(a)) => {
                let n = b.nrows();
                Op(DMatrix::identity(n, n) * a + b)
            }
            (Op(a), Op(b)) => {
                if a.nrows() != b.nrows() {
                    return Err(Error::Dimension(format!(
                        "cannot add operator values of dimensions {} and {}",
                        a.nrows(),
                        b.nrows()
                    )));
                }
                Op(a + b)
            }
            (CQuat(_), Op(_)) | (Op(_), CQuat(_)) => {
                return Err(Error::Domain(
                    "quaternion and operator values cannot mix".into(),
                ))
            }
        })
    }

    /// Difference norm against another value of the same kind.
    pub fn distance(&self, other: &StemValue) -> Result<f64> {
        use StemValue::*;
        Ok(match (self, other) {
            (Complex(a), Complex(b)) => (a - b).norm(),
            (CQuat(a), CQuat(b)) => (*a - *b).norm(),
            (Complex(a), CQuat(b)) | (CQuat(b), Complex(a)) => {
                (CQuaternion::from_complex(*a) - *b).norm()
            }
            (Op(a), Op(b)) => (a - b).norm(),
            _ => {
                return Err(Error::Domain(
                    "cannot compare stem values of different kinds".into(),
                ))
            }
        })
    }
}

impl Coefficient {
    fn to_value(&self) -> StemValue {
        match self {
            Coefficient::Real(r) => StemValue::Complex(Complex64::new(*r, 0.0)),
            Coefficient::Complex(c) => StemValue::Complex(*c),
            Coefficient::Quat(q) => StemValue::CQuat(CQuaternion::from(*q)),
            Coefficient::Op(a) => StemValue::Op(a.matrix().map(|e| Complex64::new(e, 0.0))),
        }
    }

    fn kind(&self) -> ValueKind {
        match self {
            Coefficient::Real(_) | Coefficient::Complex(_) => ValueKind::Scalar,
            Coefficient::Quat(_) => ValueKind::Quaternionic,
            Coefficient::Op(a) => ValueKind::Operator(a.dim()),
        }
    }
}

/// The operator space a stem function is evaluated against when its values
/// must be concrete complex matrices (the contour integrands).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalContext {
    /// Complexification of an `n`-dimensional real operator; scalar values
    /// become `ζ·I_n`, operator coefficients must have dimension `n`.
    RealOp(usize),
    /// Complex realification of an `m`-dimensional quaternionic operator
    /// (matrices of size `2m`); quaternion coefficients embed blockwise as
    /// left multiplications.
    QuatOp(usize),
}

impl EvalContext {
    /// Side length of the complex matrices produced in this context.
    pub fn matrix_dim(&self) -> usize {
        match self {
            EvalContext::RealOp(n) => *n,
            EvalContext::QuatOp(m) => 2 * m,
        }
    }
}

/// An analytic function from the closed stem grammar.
#[derive(Debug, Clone)]
pub enum StemFunction {
    /// `Σ cₙ ζⁿ` with coefficients acting by left multiplication.
    Polynomial(Vec<Coefficient>),
    Exp,
    Sin,
    Cos,
    /// `ζ ↦ 1/(ζ - a)` with a real pole `a`; the surrounding contour or
    /// spectrum must exclude `a`.
    Resolvent(f64),
    Sum(Vec<StemFunction>),
    /// Product `F·f` of an arbitrary stem `F` with a scalar stem `f`
    /// (scalar values are central, so the order is immaterial).
    Product {
        f: Box<StemFunction>,
        scalar: Box<StemFunction>,
    },
}

impl StemFunction {
    /// Polynomial with real coefficients, constant term first.
    pub fn poly_real(coeffs: &[f64]) -> StemFunction {
        StemFunction::Polynomial(coeffs.iter().map(|&c| Coefficient::Real(c)).collect())
    }

    /// Polynomial with quaternion coefficients (left multiplication),
    /// constant term first.
    pub fn poly_quat(coeffs: &[Quaternion]) -> StemFunction {
        StemFunction::Polynomial(coeffs.iter().map(|&c| Coefficient::Quat(c)).collect())
    }

    /// The identity function `ζ ↦ ζ`.
    pub fn identity() -> StemFunction {
        StemFunction::poly_real(&[0.0, 1.0])
    }

    /// The constant function `ζ ↦ c`.
    pub fn constant(c: f64) -> StemFunction {
        StemFunction::poly_real(&[c])
    }

    /// Product with a scalar stem; rejects non-scalar `scalar` factors.
    pub fn scaled(self, scalar: StemFunction) -> Result<StemFunction> {
        if scalar.kind()? != ValueKind::Scalar {
            return Err(Error::Domain(
                "the scaling factor of a stem product must be scalar-valued".into(),
            ));
        }
        Ok(StemFunction::Product {
            f: Box::new(self),
            scalar: Box::new(scalar),
        })
    }

    /// The value algebra of this function, or an error for inconsistent
    /// coefficient mixes.
    pub fn kind(&self) -> Result<ValueKind> {
        match self {
            StemFunction::Polynomial(coeffs) => coeffs
                .iter()
                .map(Coefficient::kind)
                .try_fold(ValueKind::Scalar, ValueKind::merge),
            StemFunction::Exp
            | StemFunction::Sin
            | StemFunction::Cos
            | StemFunction::Resolvent(_) => Ok(ValueKind::Scalar),
            StemFunction::Sum(terms) => terms
                .iter()
                .map(StemFunction::kind)
                .try_fold(ValueKind::Scalar, |acc, k| acc.merge(k?)),
            StemFunction::Product { f, scalar } => {
                if scalar.kind()? != ValueKind::Scalar {
                    return Err(Error::Domain(
                        "the scaling factor of a stem product must be scalar-valued".into(),
                    ));
                }
                f.kind()
            }
        }
    }

    /// Real poles of the function (from `Resolvent` nodes).
    pub fn poles(&self) -> Vec<f64> {
        match self {
            StemFunction::Resolvent(a) => vec![*a],
            StemFunction::Sum(terms) => terms.iter().flat_map(StemFunction::poles).collect(),
            StemFunction::Product { f, scalar } => {
                let mut p = f.poles();
                p.extend(scalar.poles());
                p
            }
            _ => Vec::new(),
        }
    }

    /// Pointwise evaluation at a complex point, in the value algebra given
    /// by the coefficients.
    pub fn eval_scalar(&self, z: Complex64) -> Result<StemValue> {
        match self {
            StemFunction::Polynomial(coeffs) => {
                let mut acc = StemValue::Complex(Complex64::new(0.0, 0.0));
                for c in coeffs.iter().rev() {
                    acc = acc.scale(z).add(c.to_value())?;
                }
                Ok(acc)
            }
            StemFunction::Exp => Ok(StemValue::Complex(z.exp())),
            StemFunction::Sin => Ok(StemValue::Complex(z.sin())),
            StemFunction::Cos => Ok(StemValue::Complex(z.cos())),
            StemFunction::Resolvent(a) => {
                let d = z - Complex64::new(*a, 0.0);
                if d.norm() <= 1e-13 * (1.0 + a.abs()) {
                    return Err(Error::Domain(format!(
                        "evaluation at the pole ζ = {a} of a shifted reciprocal"
                    )));
                }
                Ok(StemValue::Complex(d.inv()))
            }
            StemFunction::Sum(terms) => {
                let mut acc = StemValue::Complex(Complex64::new(0.0, 0.0));
                for t in terms {
                    acc = acc.add(t.eval_scalar(z)?)?;
                }
                Ok(acc)
            }
            StemFunction::Product { f, scalar } => {
                let s = match scalar.eval_scalar(z)? {
                    StemValue::Complex(c) => c,
                    _ => {
                        return Err(Error::Domain(
                            "the scaling factor of a stem product must be scalar-valued".into(),
                        ))
                    }
                };
                Ok(f.eval_scalar(z)?.scale(s))
            }
        }
    }

    /// Evaluation as a concrete complex matrix against an operator context:
    /// scalar values become multiples of the identity, quaternion
    /// coefficients embed as blockwise left multiplications in a
    /// quaternionic context, operator coefficients are used directly in a
    /// real context.
    pub fn eval_in_context(&self, z: Complex64, ctx: EvalContext) -> Result<DMatrix<Complex64>> {
        let n = ctx.matrix_dim();
        match self.eval_scalar(z)? {
            StemValue::Complex(c) => Ok(DMatrix::identity(n, n) * c),
            StemValue::CQuat(v) => match ctx {
                EvalContext::QuatOp(m) => {
                    let block = embed_cquaternion(&v);
                    let mut out = DMatrix::zeros(2 * m, 2 * m);
                    for b in 0..m {
                        for r in 0..2 {
                            for c in 0..2 {
                                out[(2 * b + r, 2 * b + c)] = block[r][c];
                            }
                        }
                    }
                    Ok(out)
                }
                EvalContext::RealOp(_) => Err(Error::Domain(
                    "quaternion coefficients require a quaternionic operator".into(),
                )),
            },
            StemValue::Op(m) => match ctx {
                EvalContext::RealOp(dim) if m.nrows() == dim => Ok(m),
                EvalContext::RealOp(dim) => Err(Error::Dimension(format!(
                    "operator coefficient dimension {} does not match operator dimension {dim}",
                    m.nrows()
                ))),
                EvalContext::QuatOp(_) => Err(Error::Domain(
                    "operator coefficients require a real operator".into(),
                )),
            },
        }
    }

    /// Numerically verifies the stem symmetry `F(ζ̄) = F(ζ)♭` at `samples`
    /// random conjugate pairs (tolerance `1e-12`, relative).
    pub fn check_stem(&self, samples: usize) -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 0x5745);
        let poles = self.poles();
        let mut done = 0;
        while done < samples {
            let re = rng.gen_range(-1.5..1.5);
            let im = rng.gen_range(0.2..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let z = Complex64::new(re, im);
            if poles
                .iter()
                .any(|&a| (z - Complex64::new(a, 0.0)).norm() < 0.3)
            {
                continue;
            }
            let at_z = self.eval_scalar(z)?;
            let at_conj = self.eval_scalar(z.conj())?;
            let tol = 1e-12 * (1.0 + at_z.norm());
            if at_conj.distance(&at_z.flat())? > tol {
                return Ok(false);
            }
            done += 1;
        }
        Ok(true)
    }

    /// Quaternionic evaluation: `f(q) = f(s₊)ι₊ + f(s₋)ι₋` with the
    /// spectral idempotents of `q`, computed inside the complexified
    /// quaternions; for real `q` this degenerates to `f(ℜq)`. The result
    /// must land in ℍ (guaranteed for stem functions), otherwise a
    /// [`Error::StemViolation`] is raised.
    pub fn eval_on_quaternion(&self, q: &Quaternion) -> Result<Quaternion> {
        match self.kind()? {
            ValueKind::Scalar | ValueKind::Quaternionic => {}
            ValueKind::Operator(_) => {
                return Err(Error::Domain(
                    "operator-coefficient stems cannot be evaluated on a quaternion".into(),
                ))
            }
        }
        if q.im_norm() == 0.0 {
            // 𝔰 is undefined on the real axis; by stem symmetry the scalar
            // value is real there, so return it directly.
            let v = self.to_cquat(self.eval_scalar(Complex64::new(q.re(), 0.0))?);
            return v.to_quaternion(DEFAULT_RTOL).map_err(|_| {
                Error::StemViolation(format!(
                    "value at the real point {} is not quaternionic (‖det im‖ = {:.3e})",
                    q.re(),
                    v.im.norm()
                ))
            });
        }
        let (ip, im) = idempotents(q)?;
        let (sp, sm) = q.spectrum();
        let vp = self.to_cquat(self.eval_scalar(sp)?);
        let vm = self.to_cquat(self.eval_scalar(sm)?);
        let total = vp * ip + vm * im;
        total.to_quaternion(DEFAULT_RTOL).map_err(|_| {
            Error::StemViolation(format!(
                "value at {q} escapes ℍ (‖im part‖ = {:.3e}); the function is not a stem",
                total.im.norm()
            ))
        })
    }

    fn to_cquat(&self, v: StemValue) -> CQuaternion {
        match v {
            StemValue::Complex(c) => CQuaternion::from_complex(c),
            StemValue::CQuat(q) => q,
            StemValue::Op(_) => unreachable!("operator kind rejected before evaluation"),
        }
    }
}

/// The spectral idempotents `ι± = (1 ∓ i𝔰)/2` of a non-real quaternion,
/// where `𝔰 = ℑq/‖ℑq‖`. They satisfy `ι₊ + ι₋ = 1`, `ι±² = ι±`, and
/// `ι₊ι₋ = 0` inside the complexified quaternions.
pub fn idempotents(q: &Quaternion) -> Result<(CQuaternion, CQuaternion)> {
    let s = q
        .unit_imaginary()
        .map_err(|_| Error::Domain("idempotents are undefined for real quaternions".into()))?;
    let half = Quaternion::scalar(0.5);
    let plus = CQuaternion::new(half, s * -0.5);
    let minus = CQuaternion::new(half, s * 0.5);
    Ok((plus, minus))
}
