//! Complex and quaternionic spectra.
//!
//! The complex spectrum of a real operator `T` is the eigenvalue multiset of
//! its complexification; for a quaternion matrix it is the eigenvalue
//! multiset of the 2m×2m complex realification. Both are conjugate
//! symmetric, and the crate enforces that structure after every eigensolve
//! by snapping near-real eigenvalues onto the axis and averaging
//! near-conjugate pairs into exact ones.
//!
//! The quaternionic spectrum σ_ℍ(T) of a right-linear operator is a union
//! of spheres: `q ∈ σ_ℍ(T)` iff the pencil `T² - 2(ℜq)T + ‖q‖²` is
//! singular, which depends on `q` only through `(ℜq, ‖ℑq‖)`. A
//! [`QSpectrumSet`] stores those sphere parameters `(u, v ≥ 0)`, with
//! `(u, 0)` encoding a real point; as a subset of ℍ it is spectrally
//! saturated (axially symmetric) by construction. [`saturate`] and
//! [`unsaturate`] translate between sphere data and conjugate pairs of
//! complex points.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linop::{qop_to_complex, QOperator, RealOperator};
use crate::numeric;
use crate::tol::{PAIRING_TOL, SINGULARITY_RTOL};
use crate::Quaternion;

/// A finite multiset of complex spectral points, kept conjugate symmetric
/// and canonically ordered.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    points: Vec<Complex64>,
}

impl ComplexSpectrum {
    /// Normalizes a raw eigenvalue list: imaginary parts below
    /// [`PAIRING_TOL`]·scale are snapped to zero, near-conjugate pairs are
    /// repaired to exact pairs (matching tolerance `1e-8`·scale), and points
    /// are sorted by real part, then imaginary part.
    pub fn from_raw(points: Vec<Complex64>) -> Self {
        let scale = points
            .iter()
            .map(|z| z.norm())
            .fold(1.0f64, f64::max);
        let mut reals: Vec<f64> = Vec::new();
        let mut upper: Vec<Complex64> = Vec::new();
        let mut lower: Vec<Complex64> = Vec::new();
        for z in &points {
            if z.im.abs() <= PAIRING_TOL * scale {
                reals.push(z.re);
            } else if z.im > 0.0 {
                upper.push(*z);
            } else {
                lower.push(*z);
            }
        }
        let mut out: Vec<Complex64> = reals.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let match_tol = 1e-8 * scale;
        for u in upper {
            let mut best: Option<(usize, f64)> = None;
            for (idx, l) in lower.iter().enumerate() {
                let d = (u - l.conj()).norm();
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((idx, d));
                }
            }
            match best {
                Some((idx, d)) if d <= match_tol => {
                    let l = lower.swap_remove(idx);
                    let mean = (u + l.conj()) * 0.5;
                    out.push(mean);
                    out.push(mean.conj());
                }
                _ => out.push(u),
            }
        }
        out.extend(lower);
        out.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        ComplexSpectrum { points: out }
    }

    /// Builds from already-clean points (still sorted canonically).
    pub fn from_points(points: Vec<Complex64>) -> Self {
        let mut points = points;
        points.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        ComplexSpectrum { points }
    }

    /// The spectral points with multiplicity.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Number of points (with multiplicity).
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True when there are no points.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `max(1, max |λ|)`.
    pub fn scale(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(1.0f64, f64::max)
    }

    /// True when `λ` is within `tol` (absolute) of some point.
    pub fn contains(&self, lambda: Complex64, tol: f64) -> bool {
        self.points.iter().any(|p| (p - lambda).norm() <= tol)
    }

    /// Distance from `λ` to the nearest spectral point.
    pub fn distance_to(&self, lambda: Complex64) -> f64 {
        self.points
            .iter()
            .map(|p| (p - lambda).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// True when every point's conjugate appears with the same multiplicity
    /// (greedy matching within `tol`).
    pub fn is_conjugate_symmetric(&self, tol: f64) -> bool {
        let mut pool = self.points.clone();
        while let Some(z) = pool.pop() {
            let want = z.conj();
            match pool
                .iter()
                .enumerate()
                .filter(|(_, p)| (**p - want).norm() <= tol)
                .map(|(idx, _)| idx)
                .next()
            {
                Some(idx) => {
                    pool.swap_remove(idx);
                }
                None => {
                    // Self-conjugate (real) points match themselves.
                    if z.im.abs() > tol {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Representatives of the distinct spectral points: clusters within
    /// `1e-9`·scale are collapsed to one point.
    pub fn distinct_points(&self) -> Vec<Complex64> {
        let tol = 1e-9 * self.scale();
        let mut reps: Vec<Complex64> = Vec::new();
        for z in &self.points {
            if !reps.iter().any(|r| (r - z).norm() <= tol) {
                reps.push(*z);
            }
        }
        reps
    }

    /// Smallest distance between two distinct spectral points, or `None`
    /// when fewer than two remain after collapsing multiplicities.
    pub fn min_gap(&self) -> Option<f64> {
        let reps = self.distinct_points();
        if reps.len() < 2 {
            return None;
        }
        let mut gap = f64::INFINITY;
        for a in 0..reps.len() {
            for b in a + 1..reps.len() {
                gap = gap.min((reps[a] - reps[b]).norm());
            }
        }
        Some(gap)
    }
}

/// A finite set of spectral spheres `(u, v ≥ 0)`, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq)]
pub struct QSpectrumSet {
    spheres: Vec<(f64, f64)>,
}

impl QSpectrumSet {
    /// Builds from raw `(u, v)` pairs; negative `v` is folded to `|v|`,
    /// near-duplicates (within `1e-9` relative) are merged, and the list is
    /// sorted lexicographically.
    pub fn from_pairs(pairs: Vec<(f64, f64)>) -> Self {
        let scale = pairs
            .iter()
            .map(|(u, v)| u.abs().max(v.abs()))
            .fold(1.0f64, f64::max);
        let tol = 1e-9 * scale;
        let mut spheres: Vec<(f64, f64)> = Vec::new();
        for (u, v) in pairs {
            let v = v.abs();
            if !spheres
                .iter()
                .any(|(su, sv)| (su - u).abs() <= tol && (sv - v).abs() <= tol)
            {
                spheres.push((u, v));
            }
        }
        spheres.sort_by(|a, b| a.partial_cmp(b).unwrap());
        QSpectrumSet { spheres }
    }

    /// The sphere parameters.
    pub fn spheres(&self) -> &[(f64, f64)] {
        &self.spheres
    }

    /// True when no spheres are stored.
    pub fn is_empty(&self) -> bool {
        self.spheres.is_empty()
    }

    /// Distance from `q`'s sphere parameters `(ℜq, ‖ℑq‖)` to the nearest
    /// stored sphere, in the (u, v) half-plane.
    pub fn distance_to(&self, q: &Quaternion) -> f64 {
        let (u, v) = (q.re(), q.im_norm());
        self.spheres
            .iter()
            .map(|(su, sv)| ((su - u).powi(2) + (sv - v).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min)
    }

    /// True when `q` lies on one of the spheres within `tol` (absolute).
    pub fn contains(&self, q: &Quaternion, tol: f64) -> bool {
        self.distance_to(q) <= tol
    }
}

/// Complex spectrum of a real operator: eigenvalues of `complexify(T)`,
/// normalized to exact conjugate symmetry.
pub fn complex_spectrum(t: &RealOperator) -> Result<ComplexSpectrum> {
    let ev = numeric::eigenvalues_real(t.matrix())?;
    Ok(ComplexSpectrum::from_raw(ev))
}

/// Complex spectrum of a quaternion-matrix operator: eigenvalues of the
/// 2m×2m complex realification, normalized to exact conjugate symmetry.
pub fn complex_spectrum_q(t: &QOperator) -> Result<ComplexSpectrum> {
    let rep = qop_to_complex(t);
    let ev = numeric::eigenvalues_complex(rep.matrix())?;
    Ok(ComplexSpectrum::from_raw(ev))
}

/// Singular values `(σ_min, σ_max)` of the real pencil
/// `(ℜλ - T)² + (ℑλ)²` whose singularity characterizes `λ ∈ σ_ℂ(T)`.
pub fn point_gate(t: &RealOperator, lambda: Complex64) -> Result<(f64, f64)> {
    let n = t.dim();
    let shifted = DMatrixReal::identity(n, n) * lambda.re - t.matrix();
    let pencil = &shifted * &shifted + DMatrixReal::identity(n, n) * (lambda.im * lambda.im);
    numeric::sv_extrema_real(&pencil)
}

type DMatrixReal = nalgebra::DMatrix<f64>;

/// True when `λ` is a singular point of `T`: the pencil of [`point_gate`]
/// has `σ_min ≤ rtol·scale` at [`SINGULARITY_RTOL`], where
/// `scale = max(σ_max, (1 + ‖T‖ + |λ|)²)`. The floor term keeps the gate
/// meaningful when the pencil collapses to the zero matrix, which happens
/// exactly (minimal polynomial) whenever the sphere of `λ` carries the
/// whole spectrum.
pub fn is_singular_point(t: &RealOperator, lambda: Complex64) -> Result<bool> {
    is_singular_point_with(t, lambda, SINGULARITY_RTOL)
}

/// As [`is_singular_point`] with an explicit gate threshold.
pub fn is_singular_point_with(t: &RealOperator, lambda: Complex64, rtol: f64) -> Result<bool> {
    let (lo, hi) = point_gate(t, lambda)?;
    let scale = hi.max((1.0 + t.norm() + lambda.norm()).powi(2));
    Ok(lo <= rtol * scale)
}

/// Singular values `(σ_min, σ_max)` of the quadratic pencil
/// `T² - 2(ℜq)T + ‖q‖²` on the complex realification of a quaternionic
/// operator.
pub fn q_spectrum_gate(t: &QOperator, q: &Quaternion) -> Result<(f64, f64)> {
    let rep = qop_to_complex(t);
    let m = rep.matrix();
    let n = m.nrows();
    let pencil = m * m - m * Complex64::new(2.0 * q.re(), 0.0)
        + nalgebra::DMatrix::<Complex64>::identity(n, n) * Complex64::new(q.norm_sqr(), 0.0);
    numeric::sv_extrema_complex(&pencil)
}

/// True when `q ∈ σ_ℍ(T)`: the quadratic pencil has `σ_min ≤ rtol·scale`
/// at [`SINGULARITY_RTOL`], with the same scale floor as
/// [`is_singular_point`].
pub fn q_in_spectrum(t: &QOperator, q: &Quaternion) -> Result<bool> {
    q_in_spectrum_with(t, q, SINGULARITY_RTOL)
}

/// As [`q_in_spectrum`] with an explicit gate threshold.
pub fn q_in_spectrum_with(t: &QOperator, q: &Quaternion, rtol: f64) -> Result<bool> {
    let (lo, hi) = q_spectrum_gate(t, q)?;
    let scale = hi.max((1.0 + t.norm() + q.norm()).powi(2));
    Ok(lo <= rtol * scale)
}

/// Quaternionic spectrum of a quaternion-matrix operator as spectral
/// spheres: each conjugate pair `u ± iv` of the complex spectrum yields the
/// sphere `(u, v)`.
pub fn quaternionic_spectrum(t: &QOperator) -> Result<QSpectrumSet> {
    Ok(saturate_spectrum(&complex_spectrum_q(t)?))
}

/// Sphere parameters of a set of complex points: `λ ↦ (ℜλ, |ℑλ|)`.
pub fn saturate_spectrum(spec: &ComplexSpectrum) -> QSpectrumSet {
    QSpectrumSet::from_pairs(spec.points().iter().map(|z| (z.re, z.im)).collect())
}

/// Spectral spheres generated by a set of quaternions: `q ↦ (ℜq, ‖ℑq‖)`.
pub fn saturate(points: &[Quaternion]) -> QSpectrumSet {
    QSpectrumSet::from_pairs(points.iter().map(|q| (q.re(), q.im_norm())).collect())
}

/// The complex trace of a sphere set: each `(u, v)` yields `u ± iv`
/// (a single real point when `v = 0`).
pub fn unsaturate(s: &QSpectrumSet) -> ComplexSpectrum {
    let mut points = Vec::new();
    for &(u, v) in s.spheres() {
        if v == 0.0 {
            points.push(Complex64::new(u, 0.0));
        } else {
            points.push(Complex64::new(u, v));
            points.push(Complex64::new(u, -v));
        }
    }
    ComplexSpectrum::from_points(points)
}

/// Spectrum of the diagonal multiplication operator with symbol values
/// `theta`: the multiset union of the per-entry spectra `s±(θ_x)`. Agrees
/// with the eigenvalues of `QOperator::from_diagonal(theta)`.
pub fn mult_op_spectrum(theta: &[Quaternion]) -> Result<ComplexSpectrum> {
    if theta.is_empty() {
        return Err(Error::Domain(
            "multiplication operator needs a nonempty symbol".into(),
        ));
    }
    let mut points = Vec::with_capacity(theta.len() * 2);
    for q in theta {
        let (sp, sm) = q.spectrum();
        points.push(sp);
        points.push(sm);
    }
    Ok(ComplexSpectrum::from_raw(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rotation_block(u: f64, v: f64) -> RealOperator {
        RealOperator::from_rows(&[vec![u, v], vec![-v, u]]).unwrap()
    }

    fn rand_q(rng: &mut ChaCha8Rng) -> Quaternion {
        Quaternion::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        )
    }

    #[test]
    fn rotation_block_spectrum() {
        let spec = complex_spectrum(&rotation_block(1.0, 2.0)).unwrap();
        assert_eq!(spec.len(), 2);
        assert!(spec.contains(c(1.0, 2.0), 1e-12));
        assert!(spec.contains(c(1.0, -2.0), 1e-12));
    }

    #[test]
    fn identity_spectrum_with_multiplicity() {
        let spec = complex_spectrum(&RealOperator::identity(2)).unwrap();
        assert_eq!(spec.points(), &[c(1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn left_scalar_spectrum() {
        // L_q on ℍ¹ has complex spectrum {s+(q), s-(q)}, multiplicity 1 each
        // in the 2×2 realification.
        let q = Quaternion::new(1.0, 2.0, 2.0, 1.0);
        let spec = complex_spectrum_q(&QOperator::left_scalar(q, 1)).unwrap();
        assert_eq!(spec.len(), 2);
        assert!(spec.contains(c(1.0, 3.0), 1e-10));
        assert!(spec.contains(c(1.0, -3.0), 1e-10));
    }

    #[test]
    fn singular_point_examples() {
        let t = rotation_block(1.0, 2.0);
        assert!(is_singular_point(&t, c(1.0, 2.0)).unwrap());
        assert!(!is_singular_point(&RealOperator::identity(3), c(0.0, 0.0)).unwrap());
    }

    #[test]
    fn singular_points_agree_with_eigenvalues() {
        // Oracle: eigensolver membership, on random operators and probe
        // points either at an eigenvalue or safely away from all of them.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut checked = 0;
        while checked < 500 {
            let n = rng.gen_range(2..6);
            let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let t = RealOperator::new(m).unwrap();
            let spec = complex_spectrum(&t).unwrap();
            let take_member = rng.gen_bool(0.5);
            let lambda = if take_member {
                spec.points()[rng.gen_range(0..spec.len())]
            } else {
                let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                if spec.distance_to(z) < 0.3 {
                    continue; // ambiguous probe; redraw
                }
                z
            };
            assert_eq!(
                is_singular_point(&t, lambda).unwrap(),
                take_member,
                "disagreement at λ={lambda} for T with spectrum {:?}",
                spec.points()
            );
            checked += 1;
        }
    }

    #[test]
    fn quaternionic_spectrum_examples() {
        let q = Quaternion::new(1.0, 2.0, 2.0, 1.0);
        let s = quaternionic_spectrum(&QOperator::left_scalar(q, 1)).unwrap();
        assert_eq!(s.spheres().len(), 1);
        let (u, v) = s.spheres()[0];
        assert!((u - 1.0).abs() < 1e-10 && (v - 3.0).abs() < 1e-10);

        // diag(j, 1+2k) → spheres (0,1) and (1,2).
        let theta = [
            Quaternion::J,
            Quaternion::ONE + Quaternion::K * 2.0,
        ];
        let s = quaternionic_spectrum(&QOperator::from_diagonal(&theta)).unwrap();
        assert_eq!(s.spheres().len(), 2);
        assert!(s.contains(&Quaternion::J, 1e-9));
        assert!(s.contains(&(Quaternion::ONE + Quaternion::K * 2.0), 1e-9));

        // A real scalar operator has the single real sphere (3, 0).
        let s = quaternionic_spectrum(&QOperator::left_scalar(Quaternion::scalar(3.0), 2)).unwrap();
        assert_eq!(s.spheres(), &[(3.0, 0.0)]);
    }

    #[test]
    fn q_membership_examples() {
        let lj = QOperator::left_scalar(Quaternion::J, 1);
        // k is equivalent to j, so it lies in σ_ℍ(L_j).
        assert!(q_in_spectrum(&lj, &Quaternion::K).unwrap());
        let id = QOperator::identity(2);
        assert!(!q_in_spectrum(&id, &Quaternion::J).unwrap());
    }

    #[test]
    fn q_membership_on_random_spheres() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..25 {
            let dim = rng.gen_range(1..4usize);
            let entries: Vec<Quaternion> = (0..dim * dim).map(|_| rand_q(&mut rng)).collect();
            let t = QOperator::new(dim, entries).unwrap();
            let spheres = quaternionic_spectrum(&t).unwrap();
            let &(u, v) = spheres
                .spheres()
                .get(rng.gen_range(0..spheres.spheres().len()))
                .unwrap();
            // Pick a random point on the sphere: q = u + v·κ.
            let dir = rand_q(&mut rng);
            let kappa = match dir.unit_imaginary() {
                Ok(k) => k,
                Err(_) => Quaternion::J,
            };
            let q = Quaternion::scalar(u) + kappa * v;
            assert!(
                q_in_spectrum(&t, &q).unwrap(),
                "point on sphere ({u},{v}) escaped the gate"
            );
        }
    }

    #[test]
    fn saturation_round_trips() {
        let s = saturate(&[Quaternion::J, Quaternion::K]);
        assert_eq!(s.spheres(), &[(0.0, 1.0)]);

        let set = QSpectrumSet::from_pairs(vec![(1.0, 2.0)]);
        let spec = unsaturate(&set);
        assert_eq!(spec.points(), &[c(1.0, -2.0), c(1.0, 2.0)]);

        // Round trip keeps sphere data fixed.
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..20 {
            let pairs: Vec<(f64, f64)> = (0..rng.gen_range(1..5))
                .map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(0.0..2.0)))
                .collect();
            let set = QSpectrumSet::from_pairs(pairs);
            let back = saturate_spectrum(&unsaturate(&set));
            assert_eq!(back, set);
        }
    }

    #[test]
    fn unsaturate_of_quaternionic_spectrum_is_complex_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..20 {
            let dim = rng.gen_range(1..4usize);
            let entries: Vec<Quaternion> = (0..dim * dim).map(|_| rand_q(&mut rng)).collect();
            let t = QOperator::new(dim, entries).unwrap();
            let spec = complex_spectrum_q(&t).unwrap();
            let back = unsaturate(&quaternionic_spectrum(&t).unwrap());
            // Set equality (multiplicity dropped by the sphere encoding).
            for z in back.points() {
                assert!(spec.distance_to(*z) < 1e-7);
            }
            for z in spec.points() {
                assert!(back.distance_to(*z) < 1e-7);
            }
        }
    }

    #[test]
    fn mult_op_examples() {
        let spec = mult_op_spectrum(&[Quaternion::J]).unwrap();
        assert_eq!(spec.points(), &[c(0.0, -1.0), c(0.0, 1.0)]);

        let spec = mult_op_spectrum(&[
            Quaternion::scalar(3.0),
            Quaternion::ONE + Quaternion::J,
        ])
        .unwrap();
        assert!(spec.contains(c(3.0, 0.0), 1e-14));
        assert!(spec.contains(c(1.0, 1.0), 1e-14));
        assert!(spec.contains(c(1.0, -1.0), 1e-14));

        assert!(mult_op_spectrum(&[]).is_err());
    }

    #[test]
    fn mult_op_matches_diagonal_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..100 {
            let len = rng.gen_range(1..6usize);
            let theta: Vec<Quaternion> = (0..len).map(|_| rand_q(&mut rng)).collect();
            let by_formula = mult_op_spectrum(&theta).unwrap();
            let by_eigen = complex_spectrum_q(&QOperator::from_diagonal(&theta)).unwrap();
            assert_eq!(by_formula.len(), by_eigen.len());
            for (a, b) in by_formula.points().iter().zip(by_eigen.points()) {
                assert!((a - b).norm() < 1e-10, "mismatch {a} vs {b}");
            }
        }
    }

    #[test]
    fn spectra_are_conjugate_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..30 {
            let n = rng.gen_range(2..7);
            let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let spec = complex_spectrum(&RealOperator::new(m).unwrap()).unwrap();
            assert!(spec.is_conjugate_symmetric(1e-8 * spec.scale()));
        }
        for _ in 0..20 {
            let dim = rng.gen_range(1..4usize);
            let entries: Vec<Quaternion> = (0..dim * dim).map(|_| rand_q(&mut rng)).collect();
            let spec = complex_spectrum_q(&QOperator::new(dim, entries).unwrap()).unwrap();
            assert!(spec.is_conjugate_symmetric(1e-8 * spec.scale()));
        }
    }

    #[test]
    fn spectrum_nonempty() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..10 {
            let dim = rng.gen_range(1..4usize);
            let entries: Vec<Quaternion> = (0..dim * dim).map(|_| rand_q(&mut rng)).collect();
            let t = QOperator::new(dim, entries).unwrap();
            assert!(!quaternionic_spectrum(&t).unwrap().is_empty());
        }
    }

    #[test]
    fn min_gap_and_distinct() {
        let spec = ComplexSpectrum::from_points(vec![
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 2.0),
        ]);
        assert_eq!(spec.distinct_points().len(), 3);
        assert!((spec.min_gap().unwrap() - 1.0).abs() < 1e-12);
        let single = ComplexSpectrum::from_points(vec![c(2.0, 0.0), c(2.0, 0.0)]);
        assert!(single.min_gap().is_none());
    }
}
