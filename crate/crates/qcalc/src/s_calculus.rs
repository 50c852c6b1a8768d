//! The S-functional calculus: slice-plane contour integration against the
//! right S-resolvent.
//!
//! A quaternionic operator has no complex resolvent, but for every
//! quaternion `s` outside the spectral spheres the *right S-resolvent*
//!
//! ```text
//! S_R⁻¹(s, T) = −(T − s̄)(T² − 2ℜs·T + ‖s‖²)⁻¹
//! ```
//!
//! exists, and integrating `Φ(s)·ds_κ·S_R⁻¹(s, T)` over the boundary of a
//! slice domain in the plane `ℂ_κ = {u + vκ}` reproduces the functional
//! calculus: `(1/2π)∮ Φ(s) ds_κ S_R⁻¹(s, T) = Φ(T)`. Here `κ` is any unit
//! imaginary quaternion, `Φ` is the quaternionic evaluation of a stem
//! function, and `ds_κ` is the line element `(du + κ dv)·(−κ)` along the
//! positively oriented curve. The orientation and sign conventions are
//! pinned by the normalization identity `(1/2π)∮ ds_κ S_R⁻¹ = I`, which
//! [`s_normalization`] computes directly and the tests enforce.
//!
//! The results are independent of `κ` and agree with the contour calculus
//! of [`crate::rd`] on the complex realification; [`equivalence_check`]
//! measures that agreement.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{embed_cquaternion, CQuaternion, MatrixQuaternion, Quaternion};
use crate::contour::{build_contour, default_margin, Circle, Contour};
use crate::error::{Error, Result};
use crate::linop::{complex_to_qop, conjugation_defect, qop_to_complex, ComplexOperator, QOperator};
use crate::numeric;
use crate::rd::fc_quaternionic;
use crate::spectra::{quaternionic_spectrum, unsaturate, QSpectrumSet};
use crate::stem::StemFunction;
use crate::tol::{SINGULARITY_RTOL, STEM_IMAG_RTOL};

/// A slice plane `ℂ_κ = {u + vκ : u, v ∈ ℝ}` selected by a unit imaginary
/// quaternion `κ` (so `κ² = −1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicePlane {
    kappa: Quaternion,
}

impl SlicePlane {
    /// Builds from a purely imaginary quaternion, normalizing its length;
    /// rejects quaternions with a real part or with no imaginary part.
    pub fn new(kappa: Quaternion) -> Result<SlicePlane> {
        if kappa.re().abs() > 1e-14 * (1.0 + kappa.norm()) {
            return Err(Error::Domain(format!(
                "a slice direction must be purely imaginary, got real part {}",
                kappa.re()
            )));
        }
        let unit = kappa.unit_imaginary().map_err(|_| {
            Error::Domain("a slice direction needs a nonzero imaginary part".into())
        })?;
        debug_assert!((unit * unit + Quaternion::ONE).norm() < 1e-14);
        Ok(SlicePlane { kappa: unit })
    }

    /// Builds from imaginary components `(x1, x2, x3)`.
    pub fn from_components(x1: f64, x2: f64, x3: f64) -> Result<SlicePlane> {
        SlicePlane::new(Quaternion::new(0.0, x1, x2, x3))
    }

    /// The unit imaginary direction of the plane.
    pub fn kappa(&self) -> Quaternion {
        self.kappa
    }

    /// The quaternion `u + vκ`.
    pub fn point(&self, u: f64, v: f64) -> Quaternion {
        Quaternion::scalar(u) + self.kappa * v
    }
}

/// The boundary of a slice domain: circles in the `(u, v)` coordinates of
/// a plane `ℂ_κ`, symmetric under `v ↦ −v` and enclosing both trace points
/// `(u, ±v)` of every spectral sphere.
#[derive(Debug, Clone)]
pub struct SliceBoundary {
    plane: SlicePlane,
    contour: Contour,
}

impl SliceBoundary {
    /// The boundary curves, with circle centers read as `(u, v)` pairs.
    pub fn curves(&self) -> &[Circle] {
        self.contour.circles()
    }

    /// The slice plane the curves live in.
    pub fn plane(&self) -> &SlicePlane {
        &self.plane
    }

    /// The underlying planar contour (for geometric queries).
    pub fn planar_contour(&self) -> &Contour {
        &self.contour
    }

    /// Boundary point and line element of curve `idx` at parameter `t`:
    /// returns `(s, ds_κ/dt)` with `s = u(t) + v(t)κ` and
    /// `ds_κ/dt = (u′ + κv′)(−κ) = r(cos t + κ sin t)`.
    pub fn point_and_element(&self, idx: usize, t: f64) -> (Quaternion, Quaternion) {
        let circle = &self.contour.circles()[idx];
        let (u0, v0, r) = (circle.center.re, circle.center.im, circle.radius);
        let s = self.plane.point(u0 + r * t.cos(), v0 + r * t.sin());
        let element = (Quaternion::scalar(t.cos()) + self.plane.kappa * t.sin()) * r;
        (s, element)
    }
}

/// Builds a slice-domain boundary enclosing the spectral spheres with the
/// given margin: circles around every trace point `(u, ±v)`, merged when
/// overlapping, exactly `v`-symmetric.
pub fn slice_boundary(
    spec: &QSpectrumSet,
    plane: &SlicePlane,
    margin: f64,
) -> Result<SliceBoundary> {
    let contour = build_contour(&unsaturate(spec), margin)?;
    Ok(SliceBoundary {
        plane: *plane,
        contour,
    })
}

/// Blockwise left multiplication by a quaternion on the complex
/// realification of ℍ^m.
fn blockdiag_left(q: Quaternion, m: usize) -> DMatrix<Complex64> {
    let block = MatrixQuaternion::from_quaternion(q).entries();
    let mut out = DMatrix::zeros(2 * m, 2 * m);
    for b in 0..m {
        for r in 0..2 {
            for c in 0..2 {
                out[(2 * b + r, 2 * b + c)] = block[r][c];
            }
        }
    }
    out
}

/// Blockwise left multiplication by a complexified quaternion.
fn blockdiag_cquat(v: &CQuaternion, m: usize) -> DMatrix<Complex64> {
    let block = embed_cquaternion(v);
    let mut out = DMatrix::zeros(2 * m, 2 * m);
    for b in 0..m {
        for r in 0..2 {
            for c in 0..2 {
                out[(2 * b + r, 2 * b + c)] = block[r][c];
            }
        }
    }
    out
}

/// The right S-resolvent `S_R⁻¹(s, T) = −(T − s̄)(T² − 2ℜs·T + ‖s‖²)⁻¹`
/// on the complex realification, gated on invertibility of the quadratic
/// pencil.
pub fn s_resolvent_right(s: &Quaternion, t: &QOperator) -> Result<ComplexOperator> {
    let m = qop_to_complex(t).into_matrix();
    let n = m.nrows();
    let pencil = &m * &m - &m * Complex64::new(2.0 * s.re(), 0.0)
        + DMatrix::<Complex64>::identity(n, n) * Complex64::new(s.norm_sqr(), 0.0);
    let (lo, hi) = numeric::sv_extrema_complex(&pencil)?;
    if !numeric::passes_invertibility_gate(lo, hi, SINGULARITY_RTOL) {
        return Err(Error::SingularPencil(format!(
            "s = {s} meets the spectral spheres (pencil σ_min/σ_max = {:.3e})",
            lo / hi.max(f64::MIN_POSITIVE)
        )));
    }
    let pencil_inv = numeric::checked_inverse(&pencil)?;
    let shifted = m - blockdiag_left(s.conj(), t.dim());
    ComplexOperator::new(-(shifted * pencil_inv))
}

/// `(ζ − s)⁻¹` inside the complexified quaternions: equals
/// `(ζ − s̄)/((ζ−u)² + v²)` with `(u, v)` the sphere parameters of `s`.
fn central_shift_inverse(zeta: Complex64, s: &Quaternion) -> Result<CQuaternion> {
    let (u, v) = (s.re(), s.im_norm());
    let denom = (zeta - Complex64::new(u, 0.0)).powi(2) + Complex64::new(v * v, 0.0);
    if denom.norm() <= 1e-13 * (1.0 + s.norm_sqr() + zeta.norm_sqr()) {
        return Err(Error::Domain(format!(
            "ζ = {zeta} lies on the spectrum of s = {s}"
        )));
    }
    let numer = CQuaternion::new(
        Quaternion::scalar(zeta.re) - s.conj(),
        Quaternion::scalar(zeta.im),
    );
    Ok(numer.scale(denom.inv()))
}

/// Diagnostics of a slice-plane quadrature.
#[derive(Debug, Clone)]
pub struct SFcOutcome {
    pub op: QOperator,
    /// Distance of the raw realified result from the quaternionic image.
    pub defect: f64,
    /// Norm of the raw result.
    pub scale: f64,
    pub boundary: SliceBoundary,
    pub nodes: usize,
}

fn slice_quadrature<F>(
    t: &QOperator,
    boundary: &SliceBoundary,
    nodes: usize,
    integrand_left: F,
) -> Result<DMatrix<Complex64>>
where
    F: Fn(&Quaternion, &Quaternion) -> Result<Quaternion> + Sync + Send,
{
    if nodes < 4 {
        return Err(Error::Domain(format!(
            "at least 4 quadrature nodes per curve are required, got {nodes}"
        )));
    }
    let m = t.dim();
    let curves = boundary.curves().len();
    numeric::sum_terms(curves * nodes, |idx| {
        let curve = idx / nodes;
        let k = idx % nodes;
        let theta = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
        let (s, element) = boundary.point_and_element(curve, theta);
        let resolvent = s_resolvent_right(&s, t).map_err(|e| match e {
            Error::SingularPencil(msg) => {
                Error::SingularPencil(format!("node {k} of curve {curve}: {msg}"))
            }
            other => other,
        })?;
        let left = integrand_left(&s, &element)?;
        // The trapezoid weight Δt and the 1/2π prefactor combine to
        // 1/nodes.
        let weight = Complex64::new(1.0 / nodes as f64, 0.0);
        Ok(blockdiag_left(left, m) * resolvent.matrix() * weight)
    })
}

/// The normalization integral `(1/2π)∮ ds_κ S_R⁻¹(s, T)`, which must be
/// the identity; computing it validates the orientation and sign of the
/// line element. `margin` overrides the default boundary margin.
pub fn s_normalization(
    t: &QOperator,
    plane: &SlicePlane,
    nodes: usize,
    margin: Option<f64>,
) -> Result<QOperator> {
    let spec = quaternionic_spectrum(t)?;
    let margin = margin.unwrap_or_else(|| default_margin(&unsaturate(&spec)));
    let boundary = slice_boundary(&spec, plane, margin)?;
    let raw = slice_quadrature(t, &boundary, nodes, |_, element| Ok(*element))?;
    complex_to_qop(&ComplexOperator::new(raw)?, STEM_IMAG_RTOL)
}

/// S-functional calculus: quadrature of `(1/2π)∮ Φ(s) ds_κ S_R⁻¹(s, T)`
/// over the slice boundary in the plane `κ`, where `Φ` is the quaternionic
/// evaluation of `f`. Returns the operator together with boundary and
/// defect diagnostics.
pub fn s_fc_detailed(
    f: &StemFunction,
    t: &QOperator,
    plane: &SlicePlane,
    nodes: usize,
    margin: Option<f64>,
) -> Result<SFcOutcome> {
    let spec = quaternionic_spectrum(t)?;
    let margin = margin.unwrap_or_else(|| default_margin(&unsaturate(&spec)));
    let boundary = slice_boundary(&spec, plane, margin)?;
    for a in f.poles() {
        let pole = Complex64::new(a, 0.0);
        if boundary.planar_contour().contains(pole)
            || boundary.planar_contour().clearance(&[pole]) < 1e-9
        {
            return Err(Error::Domain(format!(
                "pole at {a} lies inside or on the slice boundary"
            )));
        }
    }
    let raw = slice_quadrature(t, &boundary, nodes, |s, element| {
        Ok(f.eval_on_quaternion(s)? * *element)
    })?;
    let scale = raw.norm();
    let raw_op = ComplexOperator::new(raw)?;
    let defect = conjugation_defect(&raw_op)?;
    if defect > STEM_IMAG_RTOL * scale {
        return Err(Error::StemViolation(format!(
            "slice quadrature lies {defect:.3e} from the quaternionic image against a norm of \
             {scale:.3e}"
        )));
    }
    let op = complex_to_qop(&raw_op, STEM_IMAG_RTOL)?;
    Ok(SFcOutcome {
        op,
        defect,
        scale,
        boundary,
        nodes,
    })
}

/// As [`s_fc_detailed`] with the default margin, returning only the
/// operator.
pub fn s_fc(
    f: &StemFunction,
    t: &QOperator,
    plane: &SlicePlane,
    nodes: usize,
) -> Result<QOperator> {
    Ok(s_fc_detailed(f, t, plane, nodes, None)?.op)
}

/// Residuals of the S-resolvent kernel identities at `(ζ, s, T)`.
#[derive(Debug, Clone)]
pub struct KernelResiduals {
    /// Residual of `(ζ−s)·S_R⁻¹ = S_R⁻¹·(ζ−T) − 1`.
    pub defining: f64,
    /// Residual of the partial-fraction rearrangement
    /// `(ζ−s)⁻¹S_R⁻¹ = S_R⁻¹(ζ−T)⁻¹ + (ζ−s)⁻¹(ζ−T)⁻¹`;
    /// absent when `ζ` meets the spectrum of `s` or of `T`.
    pub rearranged: Option<f64>,
    /// Norm of the S-resolvent, the natural reference scale.
    pub scale: f64,
}

/// Evaluates both S-resolvent kernel identities in the complexified
/// algebra and reports their residuals. `ζ` acts centrally; `s` acts
/// through the quaternion structure.
pub fn kernel_identity_check(
    zeta: Complex64,
    s: &Quaternion,
    t: &QOperator,
) -> Result<KernelResiduals> {
    let m = t.dim();
    let n = 2 * m;
    let sr = s_resolvent_right(s, t)?;
    let rep = qop_to_complex(t).into_matrix();
    let identity = DMatrix::<Complex64>::identity(n, n);

    // (ζ − s) as an element of the complexified quaternions.
    let zeta_minus_s = CQuaternion::new(
        Quaternion::scalar(zeta.re) - *s,
        Quaternion::scalar(zeta.im),
    );
    let lhs = blockdiag_cquat(&zeta_minus_s, m) * sr.matrix();
    let rhs = sr.matrix() * (&identity * zeta - &rep) - &identity;
    let defining = (lhs - rhs).norm();

    let shifted = &identity * zeta - &rep;
    let rearranged = match (
        central_shift_inverse(zeta, s),
        numeric::is_invertible_complex(&shifted),
    ) {
        (Ok(shift_inv), Ok(true)) => {
            let resolvent = numeric::checked_inverse(&shifted)?;
            let lhs = blockdiag_cquat(&shift_inv, m) * sr.matrix();
            let rhs =
                sr.matrix() * &resolvent + blockdiag_cquat(&shift_inv, m) * &resolvent;
            Some((lhs - rhs).norm())
        }
        _ => None,
    };

    Ok(KernelResiduals {
        defining,
        rearranged,
        scale: sr.norm().max(1.0),
    })
}

/// The scalar boundary integral `(1/2π)∮ (ζ−s)⁻¹ ds_κ`, which vanishes
/// when `ζ` (read as a point of the `(u,v)`-plane) lies outside the slice
/// domain.
pub fn exterior_kernel_integral(
    zeta: Complex64,
    boundary: &SliceBoundary,
    nodes: usize,
) -> Result<CQuaternion> {
    if nodes < 4 {
        return Err(Error::Domain(format!(
            "at least 4 quadrature nodes per curve are required, got {nodes}"
        )));
    }
    let mut total = CQuaternion::ZERO;
    for idx in 0..boundary.curves().len() {
        for k in 0..nodes {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
            let (s, element) = boundary.point_and_element(idx, theta);
            let kernel = central_shift_inverse(zeta, &s)?;
            total = total + (kernel * CQuaternion::from(element)) * (1.0 / nodes as f64);
        }
    }
    Ok(total)
}

/// Agreement report between the slice-plane calculus and the contour
/// calculus on the realification.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    /// Result of the contour calculus.
    pub rd: QOperator,
    /// Slice-plane results per plane, in input order.
    pub s_results: Vec<QOperator>,
    /// Largest deviation of any slice result from the contour result or
    /// from another slice result.
    pub max_deviation: f64,
    /// `max(1, ‖rd‖)`, the reference for the threshold.
    pub scale: f64,
    /// True when `max_deviation ≤ 1e-6·scale`.
    pub pass: bool,
}

/// Computes `f(T)` by the contour calculus and by the slice-plane calculus
/// in each given plane, and reports the largest pairwise deviation; passes
/// at `1e-6` relative.
pub fn equivalence_check(
    f: &StemFunction,
    t: &QOperator,
    planes: &[SlicePlane],
    nodes: usize,
) -> Result<EquivalenceReport> {
    let rd = fc_quaternionic(f, t, nodes)?;
    let mut s_results = Vec::with_capacity(planes.len());
    for plane in planes {
        s_results.push(s_fc(f, t, plane, nodes)?);
    }
    let mut max_deviation = 0.0f64;
    for a in &s_results {
        max_deviation = max_deviation.max(a.max_abs_diff(&rd));
    }
    for i in 0..s_results.len() {
        for jdx in i + 1..s_results.len() {
            max_deviation = max_deviation.max(s_results[i].max_abs_diff(&s_results[jdx]));
        }
    }
    let scale = rd.norm().max(1.0);
    Ok(EquivalenceReport {
        rd,
        s_results,
        max_deviation,
        scale,
        pass: max_deviation <= 1e-6 * scale,
    })
}
