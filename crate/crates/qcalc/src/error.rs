//! Error types shared across the crate.
//!
//! Numerical gates (singularity tests, residual checks, structural symmetry
//! checks) report failures through dedicated variants so callers can react to
//! *why* a computation was rejected, not just that it failed.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (zero divisor, pole hit, point not strictly inside a domain, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Matrix dimensions are incompatible or an input is not square.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The iterative eigenvalue solver did not converge.
    #[error("eigenvalue computation failed to converge")]
    EigenFailure,

    /// `zeta - T` failed the invertibility gate while evaluating a resolvent.
    #[error("resolvent is singular at zeta = {0}")]
    SingularResolvent(String),

    /// A quadratic operator pencil failed the invertibility gate.
    #[error("operator pencil is singular at {0}")]
    SingularPencil(String),

    /// A computed inverse failed its multiply-back residual check.
    #[error("inverse failed accuracy check: residual {residual:.3e} exceeds bound {bound:.3e}")]
    InverseAccuracy { residual: f64, bound: f64 },

    /// Contour construction could not produce an admissible curve family.
    #[error("contour construction failed: {0}")]
    Contour(String),

    /// A function failed the stem symmetry requirement, either up front or
    /// through an out-of-tolerance imaginary part in a calculus result.
    #[error("stem symmetry violated: {0}")]
    StemViolation(String),

    /// A calculus result did not commute with the right scalar
    /// multiplications, i.e. it left the algebra of right-linear operators.
    #[error("right-linearity violated: {0}")]
    RightLinearityViolation(String),

    /// No random shift produced simple eigenvalues for a commuting pair.
    #[error("defective commuting pair: {0}")]
    DefectivePair(String),

    /// Doubling the quadrature resolution moved the result by more than the
    /// stability bound, so the requested resolution cannot be trusted.
    #[error("quadrature resolution too coarse: {0}")]
    Resolution(String),

    /// Text input (function grammar, matrix JSON) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure when reading or writing files.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON payload.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code for CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Dimension(_) => "dimension",
            Error::EigenFailure => "eigen_failure",
            Error::SingularResolvent(_) => "singular_resolvent",
            Error::SingularPencil(_) => "singular_pencil",
            Error::InverseAccuracy { .. } => "inverse_accuracy",
            Error::Contour(_) => "contour",
            Error::StemViolation(_) => "stem_violation",
            Error::RightLinearityViolation(_) => "right_linearity",
            Error::DefectivePair(_) => "defective_pair",
            Error::Resolution(_) => "resolution",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
