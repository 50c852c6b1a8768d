//! Conjugate-symmetric contours enclosing spectra.
//!
//! A [`Contour`] is a union of positively oriented, pairwise disjoint
//! circles. [`build_contour`] produces one from a spectrum by greedy
//! clustering: each cluster gets a circle at its centroid whose radius
//! covers the cluster plus a safety margin, overlapping circles force their
//! clusters to merge, and the result inherits the conjugate symmetry of
//! the input spectrum (centers that land on the real axis are snapped
//! exactly onto it; mirror circles are paired exactly).
//!
//! Contours may also be assembled manually, e.g. a single circle around one
//! eigenvalue to compute a Riesz projection; such contours need not be
//! symmetric or enclose the whole spectrum.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectra::ComplexSpectrum;

/// A positively oriented circle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    /// The point `center + radius·e^{iθ}`.
    pub fn point_at(&self, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, theta)
    }

    /// True when `z` lies strictly inside.
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Distance from `z` to the circle line.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        ((z - self.center).norm() - self.radius).abs()
    }

    fn overlaps(&self, other: &Circle) -> bool {
        // A small buffer avoids numerically tangent circles.
        (self.center - other.center).norm() <= 1.05 * (self.radius + other.radius)
    }
}

/// A union of pairwise disjoint, positively oriented circles.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    circles: Vec<Circle>,
}

impl Contour {
    /// A contour made of a single circle. No symmetry is implied; this is
    /// the building block for Riesz projections onto individual
    /// eigenvalues.
    pub fn single(center: Complex64, radius: f64) -> Result<Contour> {
        Contour::from_circles(vec![Circle { center, radius }])
    }

    /// A contour from explicit circles; validates positive radii and
    /// pairwise disjointness.
    pub fn from_circles(circles: Vec<Circle>) -> Result<Contour> {
        if circles.is_empty() {
            return Err(Error::Contour("a contour needs at least one circle".into()));
        }
        for c in &circles {
            if !(c.radius > 0.0) || !c.radius.is_finite() || !c.center.is_finite() {
                return Err(Error::Contour(format!(
                    "invalid circle (center {}, radius {})",
                    c.center, c.radius
                )));
            }
        }
        for a in 0..circles.len() {
            for b in a + 1..circles.len() {
                let gap = (circles[a].center - circles[b].center).norm()
                    - circles[a].radius
                    - circles[b].radius;
                if gap <= 0.0 {
                    return Err(Error::Contour(format!(
                        "circles {a} and {b} overlap (gap {gap:.3e})"
                    )));
                }
            }
        }
        Ok(Contour { circles })
    }

    /// The circles of the contour.
    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    /// True when `z` lies strictly inside some circle.
    pub fn contains(&self, z: Complex64) -> bool {
        self.circles.iter().any(|c| c.contains(z))
    }

    /// True when every spectral point lies strictly inside the union.
    pub fn encloses(&self, spec: &ComplexSpectrum) -> bool {
        spec.points().iter().all(|&z| self.contains(z))
    }

    /// Smallest distance from any of the given points to the contour
    /// lines; infinite for an empty point list.
    pub fn clearance(&self, points: &[Complex64]) -> f64 {
        points
            .iter()
            .map(|&z| {
                self.circles
                    .iter()
                    .map(|c| c.boundary_distance(z))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// True when each circle's mirror (center conjugated) is present
    /// within `tol`; circles with real centers are their own mirror.
    pub fn is_conjugate_symmetric(&self, tol: f64) -> bool {
        self.circles.iter().all(|c| {
            self.circles.iter().any(|d| {
                (d.center - c.center.conj()).norm() <= tol && (d.radius - c.radius).abs() <= tol
            })
        })
    }
}

/// Default safety margin for a spectrum: `0.5·min(1, gap/2)` with the
/// minimal spectral gap (or `0.5` when the spectrum has at most one
/// distinct point). Balances resolvent conditioning against the need to
/// stay inside the function's domain.
pub fn default_margin(spec: &ComplexSpectrum) -> f64 {
    match spec.min_gap() {
        Some(gap) => 0.5 * 1.0f64.min(gap / 2.0),
        None => 0.5,
    }
}

/// Builds a conjugate-symmetric contour enclosing the spectrum with the
/// given safety margin: every spectral point ends up at distance at least
/// `margin` inside its circle, and the circles are pairwise disjoint.
pub fn build_contour(spec: &ComplexSpectrum, margin: f64) -> Result<Contour> {
    if !(margin > 0.0) || !margin.is_finite() {
        return Err(Error::Contour(format!("margin must be positive, got {margin}")));
    }
    let pts = spec.distinct_points();
    if pts.is_empty() {
        return Err(Error::Contour("cannot enclose an empty spectrum".into()));
    }

    // Greedy clustering: one circle per cluster; overlapping circles merge
    // their clusters and the circles are rebuilt. Terminates because each
    // merge reduces the cluster count.
    let mut clusters: Vec<Vec<Complex64>> = pts.iter().map(|&z| vec![z]).collect();
    let circles = loop {
        let circles: Vec<Circle> = clusters
            .iter()
            .map(|cl| {
                let center = cl.iter().sum::<Complex64>() / cl.len() as f64;
                let spread = cl
                    .iter()
                    .map(|z| (z - center).norm())
                    .fold(0.0f64, f64::max);
                Circle {
                    center,
                    radius: spread + margin,
                }
            })
            .collect();
        let mut merged = None;
        'search: for a in 0..circles.len() {
            for b in a + 1..circles.len() {
                if circles[a].overlaps(&circles[b]) {
                    merged = Some((a, b));
                    break 'search;
                }
            }
        }
        match merged {
            Some((a, b)) => {
                let moved = clusters.swap_remove(b);
                clusters[a].extend(moved);
            }
            None => break circles,
        }
    };

    let symmetrized = symmetrize(circles).or_else(|_| {
        // Degenerate geometry: fall back to one large circle on the real
        // axis enclosing everything.
        let center_re = pts.iter().map(|z| z.re).sum::<f64>() / pts.len() as f64;
        let center = Complex64::new(center_re, 0.0);
        let spread = pts
            .iter()
            .map(|z| (z - center).norm())
            .fold(0.0f64, f64::max);
        Ok::<Vec<Circle>, Error>(vec![Circle {
            center,
            radius: spread + margin,
        }])
    })?;

    let contour = Contour::from_circles(symmetrized)?;
    debug_assert!(contour.encloses(spec));
    Ok(contour)
}

/// Makes the mirror symmetry of a circle family exact: near-real centers
/// are snapped onto the axis, and mirror pairs are replaced by exact
/// conjugates of the upper member. Fails if some circle has no mirror.
fn symmetrize(circles: Vec<Circle>) -> Result<Vec<Circle>> {
    let scale = circles
        .iter()
        .map(|c| c.center.norm() + c.radius)
        .fold(1.0f64, f64::max);
    let tol = 1e-9 * scale;
    let mut out = Vec::with_capacity(circles.len());
    let mut lower: Vec<Circle> = Vec::new();
    for c in circles {
        if c.center.im.abs() <= tol {
            out.push(Circle {
                center: Complex64::new(c.center.re, 0.0),
                radius: c.radius,
            });
        } else if c.center.im > 0.0 {
            out.push(c);
        } else {
            lower.push(c);
        }
    }
    let uppers: Vec<Circle> = out
        .iter()
        .copied()
        .filter(|c| c.center.im > 0.0)
        .collect();
    if uppers.len() != lower.len() {
        return Err(Error::Contour("mirror circles do not pair up".into()));
    }
    for u in uppers {
        let pos = lower
            .iter()
            .position(|l| {
                (l.center - u.center.conj()).norm() <= tol && (l.radius - u.radius).abs() <= tol
            })
            .ok_or_else(|| Error::Contour("mirror circles do not pair up".into()))?;
        lower.swap_remove(pos);
        out.push(Circle {
            center: u.center.conj(),
            radius: u.radius,
        });
    }
    Ok(out)
}
