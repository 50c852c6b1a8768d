//! Dense linear-algebra plumbing: eigenvalues, singular-value gates, checked
//! inverses, and deterministic quadrature reductions.
//!
//! All decompositions delegate to `nalgebra`. The wrappers exist to give the
//! rest of the crate a uniform error surface (convergence failures become
//! [`Error::EigenFailure`], singular systems fail loudly) and to centralize
//! the residual checks that keep silent inaccuracies out of the calculi.

use nalgebra::{DMatrix, Schur, SVD};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tol::SINGULARITY_RTOL;

/// Iteration cap for Schur and SVD; generous for desk-scale matrices.
const MAX_ITER: usize = 10_000;

/// Eigenvalues of a real square matrix as complex numbers, via the real
/// Schur form. Order is solver-defined; callers normalize.
pub fn eigenvalues_real(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let schur = Schur::try_new(m.clone(), f64::EPSILON, MAX_ITER).ok_or(Error::EigenFailure)?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Eigenvalues of a complex square matrix via the complex Schur form.
pub fn eigenvalues_complex(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let schur = Schur::try_new(m.clone(), f64::EPSILON, MAX_ITER).ok_or(Error::EigenFailure)?;
    let ev = schur.eigenvalues().ok_or(Error::EigenFailure)?;
    Ok(ev.iter().copied().collect())
}

/// Smallest and largest singular values of a real matrix.
pub fn sv_extrema_real(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, MAX_ITER)
        .ok_or(Error::EigenFailure)?;
    Ok(extrema(svd.singular_values.as_slice()))
}

/// Smallest and largest singular values of a complex matrix.
pub fn sv_extrema_complex(m: &DMatrix<Complex64>) -> Result<(f64, f64)> {
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, MAX_ITER)
        .ok_or(Error::EigenFailure)?;
    Ok(extrema(svd.singular_values.as_slice()))
}

fn extrema(sv: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &s in sv {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    if !lo.is_finite() {
        lo = 0.0;
    }
    (lo, hi)
}

/// Relative singular-value gate: true when the matrix passes the
/// invertibility test `sigma_min > rtol * sigma_max`.
pub fn passes_invertibility_gate(sigma_min: f64, sigma_max: f64, rtol: f64) -> bool {
    sigma_max > 0.0 && sigma_min > rtol * sigma_max
}

/// Convenience: invertibility gate for a complex matrix at the default
/// threshold [`SINGULARITY_RTOL`].
pub fn is_invertible_complex(m: &DMatrix<Complex64>) -> Result<bool> {
    let (lo, hi) = sv_extrema_complex(m)?;
    Ok(passes_invertibility_gate(lo, hi, SINGULARITY_RTOL))
}

/// Inverse of a complex matrix with a multiply-back residual check:
/// `‖A·A⁻¹ - I‖_F ≤ 1e-10 · (1 + ‖A‖_F‖A⁻¹‖_F)`.
pub fn checked_inverse(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = m.nrows();
    let inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularPencil("matrix inverse does not exist".into()))?;
    let residual = (m * &inv - DMatrix::<Complex64>::identity(n, n)).norm();
    let bound = 1e-10 * (1.0 + m.norm() * inv.norm());
    if residual > bound {
        return Err(Error::InverseAccuracy { residual, bound });
    }
    Ok(inv)
}

/// Inverse of a real matrix with the same residual policy as
/// [`checked_inverse`].
pub fn checked_inverse_real(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularPencil("matrix inverse does not exist".into()))?;
    let residual = (m * &inv - DMatrix::<f64>::identity(n, n)).norm();
    let bound = 1e-10 * (1.0 + m.norm() * inv.norm());
    if residual > bound {
        return Err(Error::InverseAccuracy { residual, bound });
    }
    Ok(inv)
}

/// A unit-norm right null vector of `m`: the right singular vector for the
/// smallest singular value.
pub fn null_vector(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let svd = SVD::try_new(m.clone(), false, true, f64::EPSILON, MAX_ITER)
        .ok_or(Error::EigenFailure)?;
    let vt = svd
        .v_t
        .as_ref()
        .ok_or_else(|| Error::Domain("SVD did not return right singular vectors".into()))?;
    let sv = svd.singular_values.as_slice();
    let mut imin = 0;
    for (idx, &s) in sv.iter().enumerate() {
        if s < sv[imin] {
            imin = idx;
        }
    }
    // Rows of Vᴴ are conjugated right singular vectors.
    Ok(vt.row(imin).iter().map(|z| z.conj()).collect())
}

/// Sums quadrature terms in a fixed pairwise order, independent of how the
/// terms were produced. Panics on an empty input (quadratures always have at
/// least one node).
pub fn pairwise_sum(mut terms: Vec<DMatrix<Complex64>>) -> DMatrix<Complex64> {
    assert!(!terms.is_empty(), "pairwise_sum of no terms");
    while terms.len() > 1 {
        terms = terms
            .chunks(2)
            .map(|pair| {
                if pair.len() == 2 {
                    &pair[0] + &pair[1]
                } else {
                    pair[0].clone()
                }
            })
            .collect();
    }
    terms.pop().expect("nonempty")
}

/// Evaluates `count` independent quadrature terms, possibly in parallel, and
/// reduces them with [`pairwise_sum`]. The reduction order depends only on
/// `count`, so results are reproducible for a fixed node count regardless of
/// the number of worker threads. Errors are reported in index order.
pub fn sum_terms<F>(count: usize, eval: F) -> Result<DMatrix<Complex64>>
where
    F: Fn(usize) -> Result<DMatrix<Complex64>> + Sync + Send,
{
    let results: Vec<Result<DMatrix<Complex64>>> = (0..count)
        .into_par_iter()
        .map(|idx| eval(idx))
        .collect();
    let mut terms = Vec::with_capacity(count);
    for r in results {
        terms.push(r?);
    }
    Ok(pairwise_sum(terms))
}
