//! Intrinsic geometry of the curved plane M²_R.
//!
//! Points are stereographic coordinates z ∈ ℂ of the sphere of radius R,
//! projected from the north pole. The origin is the south pole and the
//! point at infinity is the north pole. The metric is
//! `ds² = 4R⁴ |dz|² / (R² + |z|²)²`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SingularKind};

/// Relative singularity tolerance, scaled by R for distances.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-9;

/// Radius of curvature R = 1/√K of the positively curved plane.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct CurvatureRadius(f64);

impl CurvatureRadius {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 {
            Ok(Self(r))
        } else {
            Err(Error::InvalidConfiguration(format!(
                "curvature radius must be positive and finite, got {r}"
            )))
        }
    }

    pub fn from_curvature(k: f64) -> Result<Self> {
        if k.is_finite() && k > 0.0 {
            Self::new(1.0 / k.sqrt())
        } else {
            Err(Error::InvalidConfiguration(format!(
                "curvature must be positive, got {k}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn squared(self) -> f64 {
        self.0 * self.0
    }

    /// Gaussian curvature K = 1/R².
    pub fn curvature(self) -> f64 {
        1.0 / self.squared()
    }
}

impl TryFrom<f64> for CurvatureRadius {
    type Error = Error;
    fn try_from(r: f64) -> Result<Self> {
        Self::new(r)
    }
}

impl From<CurvatureRadius> for f64 {
    fn from(r: CurvatureRadius) -> f64 {
        r.0
    }
}

/// A point of the extended plane ℂ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanePoint {
    Finite(Complex64),
    Infinity,
}

impl PlanePoint {
    pub fn new(re: f64, im: f64) -> Self {
        PlanePoint::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PlanePoint::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            PlanePoint::Finite(z) => Some(z),
            PlanePoint::Infinity => None,
        }
    }

    /// Distance between two points on the extended plane, with ∞ only
    /// close to itself.
    pub fn separation(&self, other: &PlanePoint) -> f64 {
        match (self, other) {
            (PlanePoint::Finite(a), PlanePoint::Finite(b)) => (a - b).norm(),
            (PlanePoint::Infinity, PlanePoint::Infinity) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl From<Complex64> for PlanePoint {
    fn from(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            PlanePoint::Finite(z)
        } else {
            PlanePoint::Infinity
        }
    }
}

/// Point of the sphere x² + y² + w² = R² embedded in ℝ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

impl SpherePoint {
    pub fn dot(&self, o: &SpherePoint) -> f64 {
        self.x * o.x + self.y * o.y + self.w * o.w
    }

    pub fn cross(&self, o: &SpherePoint) -> SpherePoint {
        SpherePoint {
            x: self.y * o.w - self.w * o.y,
            y: self.w * o.x - self.x * o.w,
            w: self.x * o.y - self.y * o.x,
        }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// λ(z) = 4R⁴/(R²+|z|²)², the conformal factor of the metric.
pub fn conformal_factor(z: PlanePoint, radius: CurvatureRadius) -> Result<f64> {
    let z = z.finite().ok_or(Error::InfinitePoint)?;
    Ok(conformal_factor_at(z, radius.get()))
}

#[inline]
pub(crate) fn conformal_factor_at(z: Complex64, r: f64) -> f64 {
    let r2 = r * r;
    let s = r2 + z.norm_sqr();
    4.0 * r2 * r2 / (s * s)
}

/// Numerator of the cotangent relation, 4R²Re(z_k z̄_j) + (|z_k|²−R²)(|z_j|²−R²).
#[inline]
fn cot_numerator(zk: Complex64, zj: Complex64, r2: f64) -> f64 {
    4.0 * r2 * (zk * zj.conj()).re + (zk.norm_sqr() - r2) * (zj.norm_sqr() - r2)
}

/// Square root of Θ = 4R²|z_j−z_k|²|R²+z̄_j z_k|².
#[inline]
fn sqrt_theta(zk: Complex64, zj: Complex64, r: f64) -> f64 {
    2.0 * r * (zj - zk).norm() * antipodal_margin(zk, zj, r)
}

/// |R² + z̄_j z_k|, which vanishes exactly on the antipodal set.
#[inline]
pub fn antipodal_margin(zk: Complex64, zj: Complex64, r: f64) -> f64 {
    (Complex64::new(r * r, 0.0) + zj.conj() * zk).norm()
}

pub(crate) fn classify_singular(zk: Complex64, zj: Complex64, r: f64, tol: f64) -> Option<SingularKind> {
    if (zk - zj).norm() < tol * r {
        Some(SingularKind::Collision)
    } else if antipodal_margin(zk, zj, r) < tol * r * r {
        Some(SingularKind::Antipodal)
    } else {
        None
    }
}

/// cot(d_kj / R) for a nonsingular pair.
///
/// Uses the all-modulus form of Θ. Pairs whose Θ falls below the
/// singularity tolerance return [`Error::SingularPair`] with indices 0, 1.
pub fn cot_of_distance(zk: PlanePoint, zj: PlanePoint, radius: CurvatureRadius) -> Result<f64> {
    cot_of_distance_tol(zk, zj, radius, DEFAULT_SINGULAR_TOL)
}

pub fn cot_of_distance_tol(
    zk: PlanePoint,
    zj: PlanePoint,
    radius: CurvatureRadius,
    tol: f64,
) -> Result<f64> {
    let r = radius.get();
    match (zk, zj) {
        (PlanePoint::Finite(a), PlanePoint::Finite(b)) => {
            if let Some(kind) = classify_singular(a, b, r, tol) {
                return Err(Error::SingularPair { i: 0, j: 1, kind });
            }
            Ok(cot_numerator(a, b, r * r) / sqrt_theta(a, b, r))
        }
        // ∞ is the north pole: reduce to the lifted-angle form.
        (PlanePoint::Infinity, PlanePoint::Infinity) => Err(Error::SingularPair {
            i: 0,
            j: 1,
            kind: SingularKind::Collision,
        }),
        (PlanePoint::Finite(a), PlanePoint::Infinity) | (PlanePoint::Infinity, PlanePoint::Finite(a)) => {
            let n = a.norm();
            if n < tol * r {
                return Err(Error::SingularPair {
                    i: 0,
                    j: 1,
                    kind: SingularKind::Antipodal,
                });
            }
            // angle from the north pole is 2·atan(R/|z|)
            Ok(1.0 / (2.0 * (r / n).atan()).tan())
        }
    }
}

/// Unchecked cot(d/R) for finite points, used by the force evaluation.
#[inline]
pub(crate) fn cot_unchecked(zk: Complex64, zj: Complex64, r: f64) -> f64 {
    cot_numerator(zk, zj, r * r) / sqrt_theta(zk, zj, r)
}

/// Geodesic distance in [0, πR].
///
/// The angle is recovered as `atan2(√Θ, numerator)`, which inverts the
/// cotangent relation on (0, π) and extends it continuously to coincident
/// points (0) and antipodal points (πR).
pub fn geodesic_distance(zk: PlanePoint, zj: PlanePoint, radius: CurvatureRadius) -> f64 {
    let r = radius.get();
    match (zk, zj) {
        (PlanePoint::Finite(a), PlanePoint::Finite(b)) => {
            if a == b {
                return 0.0;
            }
            let num = cot_numerator(a, b, r * r);
            let den = sqrt_theta(a, b, r);
            r * den.atan2(num)
        }
        (PlanePoint::Infinity, PlanePoint::Infinity) => 0.0,
        (PlanePoint::Finite(a), PlanePoint::Infinity) | (PlanePoint::Infinity, PlanePoint::Finite(a)) => {
            2.0 * r * (r / a.norm()).atan()
        }
    }
}

/// Inverse stereographic projection from the north pole.
pub fn lift_to_sphere(z: PlanePoint, radius: CurvatureRadius) -> SpherePoint {
    let r = radius.get();
    match z {
        PlanePoint::Infinity => SpherePoint { x: 0.0, y: 0.0, w: r },
        PlanePoint::Finite(z) => {
            let r2 = r * r;
            let n2 = z.norm_sqr();
            let s = r2 + n2;
            SpherePoint {
                x: 2.0 * r2 * z.re / s,
                y: 2.0 * r2 * z.im / s,
                w: r * (n2 - r2) / s,
            }
        }
    }
}

/// Stereographic projection from the north pole; the north pole maps to ∞.
pub fn project_to_plane(p: SpherePoint, radius: CurvatureRadius) -> PlanePoint {
    let r = radius.get();
    let denom = r - p.w;
    // points within rounding of the north pole go to infinity
    if denom <= f64::EPSILON * r {
        return PlanePoint::Infinity;
    }
    PlanePoint::Finite(Complex64::new(r * p.x / denom, r * p.y / denom))
}

/// Great-circle distance between two points of the embedded sphere.
pub fn great_circle_distance(p: &SpherePoint, q: &SpherePoint, radius: CurvatureRadius) -> f64 {
    let r = radius.get();
    let c = p.cross(q).norm();
    r * c.atan2(p.dot(q))
}

/// Antipode of z on the sphere, −R² z / |z|².
pub fn antipode(z: PlanePoint, radius: CurvatureRadius) -> PlanePoint {
    match z {
        PlanePoint::Infinity => PlanePoint::Finite(Complex64::new(0.0, 0.0)),
        PlanePoint::Finite(z) if z.norm_sqr() == 0.0 => PlanePoint::Infinity,
        PlanePoint::Finite(z) => PlanePoint::Finite(-z * (radius.squared() / z.norm_sqr())),
    }
}

/// |z_k − z_j| < tol.
pub fn is_collision(zk: PlanePoint, zj: PlanePoint, tol: f64) -> bool {
    zk.separation(&zj) < tol
}

/// |z_k + (R²/|z_j|²) z_j| < tol; the origin pairs only with ∞.
pub fn is_antipodal(zk: PlanePoint, zj: PlanePoint, radius: CurvatureRadius, tol: f64) -> bool {
    zk.separation(&antipode(zj, radius)) < tol
}

/// Angular distance check used by tests: d(0, z) = 2R·atan(|z|/R).
pub fn radial_distance(z: Complex64, radius: CurvatureRadius) -> f64 {
    let r = radius.get();
    2.0 * r * (z.norm() / r).atan()
}
