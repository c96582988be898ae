//! Möbius transformations of the Riemann sphere and their trace
//! classification.

use std::fmt;
use std::ops::{Mul, Neg};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::PlanePoint;

/// Tolerance on Im(tr²) and on |tr² − 4| used by [`MobiusMatrix::classify`].
pub const TRACE_TOL: f64 = 1e-10;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Element of SL(2,ℂ) acting by z ↦ (az+b)/(cz+d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MobiusClass {
    Elliptic,
    Hyperbolic,
    Parabolic,
    Loxodromic,
}

impl fmt::Display for MobiusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MobiusClass::Elliptic => "elliptic",
            MobiusClass::Hyperbolic => "hyperbolic",
            MobiusClass::Parabolic => "parabolic",
            MobiusClass::Loxodromic => "loxodromic",
        };
        f.write_str(s)
    }
}

/// Fixed points of a non-identity transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPointSet {
    One(PlanePoint),
    Two(PlanePoint, PlanePoint),
}

impl FixedPointSet {
    pub fn len(&self) -> usize {
        match self {
            FixedPointSet::One(_) => 1,
            FixedPointSet::Two(..) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<PlanePoint> {
        match *self {
            FixedPointSet::One(p) => vec![p],
            FixedPointSet::Two(p, q) => vec![p, q],
        }
    }
}

impl MobiusMatrix {
    /// Builds a matrix from arbitrary entries, rescaling by 1/√det.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > 1e-14 * scale * scale) || !det.norm().is_finite() {
            return Err(Error::DegenerateMatrix(det.norm()));
        }
        let k = ONE / det.sqrt();
        Ok(Self {
            a: a * k,
            b: b * k,
            c: c * k,
            d: d * k,
        })
    }

    /// Entries already satisfying ad − bc = 1; no rescaling.
    pub fn unimodular(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::unimodular(ONE, ZERO, ZERO, ONE)
    }

    pub fn diagonal(lambda: Complex64) -> Self {
        Self::unimodular(lambda, ZERO, ZERO, ONE / lambda)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn trace_sq(&self) -> Complex64 {
        let t = self.trace();
        t * t
    }

    pub fn inverse(&self) -> Self {
        Self::unimodular(self.d, -self.b, -self.c, self.a)
    }

    /// Same transformation up to the ±I ambiguity.
    pub fn approx_eq_projective(&self, other: &Self, tol: f64) -> bool {
        let close = |s: Complex64| {
            (self.a - s * other.a).norm() <= tol
                && (self.b - s * other.b).norm() <= tol
                && (self.c - s * other.c).norm() <= tol
                && (self.d - s * other.d).norm() <= tol
        };
        close(ONE) || close(-ONE)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq_projective(&Self::identity(), tol)
    }

    /// Applies the fractional linear map on the extended plane.
    pub fn apply(&self, z: PlanePoint) -> PlanePoint {
        match z {
            PlanePoint::Infinity => {
                if self.c == ZERO {
                    PlanePoint::Infinity
                } else {
                    PlanePoint::Finite(self.a / self.c)
                }
            }
            PlanePoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den == ZERO {
                    PlanePoint::Infinity
                } else {
                    PlanePoint::from((self.a * z + self.b) / den)
                }
            }
        }
    }

    pub fn classify(&self) -> MobiusClass {
        self.classify_with(TRACE_TOL)
    }

    /// Trace classification of the induced transformation.
    pub fn classify_with(&self, tol: f64) -> MobiusClass {
        let t2 = self.trace_sq();
        if t2.im.abs() > tol {
            return MobiusClass::Loxodromic;
        }
        let x = t2.re;
        if (x - 4.0).abs() <= tol {
            MobiusClass::Parabolic
        } else if x > 4.0 {
            MobiusClass::Hyperbolic
        } else if x >= 0.0 {
            MobiusClass::Elliptic
        } else {
            MobiusClass::Loxodromic
        }
    }

    /// Roots of c z² + (d − a) z − b = 0 on the Riemann sphere.
    pub fn fixed_points(&self) -> Result<FixedPointSet> {
        if self.is_identity(TRACE_TOL) {
            return Err(Error::IdentityTransformation);
        }
        let parabolic = self.classify() == MobiusClass::Parabolic;
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if c.norm() <= 1e-15 * scale {
            // ∞ is fixed; the finite fixed point solves (d − a) z = b
            let dm = d - a;
            if parabolic || dm.norm() <= 1e-15 * scale {
                return Ok(FixedPointSet::One(PlanePoint::Infinity));
            }
            return Ok(FixedPointSet::Two(PlanePoint::Finite(b / dm), PlanePoint::Infinity));
        }
        let bq = d - a;
        if parabolic {
            return Ok(FixedPointSet::One(PlanePoint::Finite(-bq / (2.0 * c))));
        }
        let disc = self.trace_sq() - 4.0;
        let s = disc.sqrt();
        // pick the sign avoiding cancellation
        let q = if (bq + s).norm() >= (bq - s).norm() {
            -0.5 * (bq + s)
        } else {
            -0.5 * (bq - s)
        };
        let z1 = q / c;
        let z2 = -b / q;
        Ok(FixedPointSet::Two(PlanePoint::Finite(z1), PlanePoint::Finite(z2)))
    }
}

impl Mul for MobiusMatrix {
    type Output = MobiusMatrix;
    fn mul(self, o: MobiusMatrix) -> MobiusMatrix {
        MobiusMatrix::unimodular(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Neg for MobiusMatrix {
    type Output = MobiusMatrix;
    fn neg(self) -> MobiusMatrix {
        MobiusMatrix::unimodular(-self.a, -self.b, -self.c, -self.d)
    }
}

/// Real scaling φ(t) for the homographic loxodromic set.
pub type ScaleFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// One-parameter families t ↦ A(t) defining each solution class.
#[derive(Clone)]
pub enum SubgroupKind {
    /// diag(e^{it/2}, e^{−it/2}): z ↦ e^{it} z.
    EllipticG,
    /// diag(e^{t/2}, e^{−t/2}): z ↦ e^{t} z.
    HyperbolicG,
    /// [[1, t], [0, 1]]: z ↦ z + t.
    ParabolicG,
    /// z ↦ e^{t(1+i)} z, expanding for t > 0.
    AsymptoticLox,
    /// z ↦ e^{−t(1+i)/2} z, the flow of 2ż = −(1+i)z.
    AsymptoticLoxFlow,
    /// z ↦ φ(t) e^{it} z. A one-parameter set, not a subgroup.
    HomographicLox(Option<ScaleFn>),
}

impl fmt::Debug for SubgroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupKind::EllipticG => f.write_str("EllipticG"),
            SubgroupKind::HyperbolicG => f.write_str("HyperbolicG"),
            SubgroupKind::ParabolicG => f.write_str("ParabolicG"),
            SubgroupKind::AsymptoticLox => f.write_str("AsymptoticLox"),
            SubgroupKind::AsymptoticLoxFlow => f.write_str("AsymptoticLoxFlow"),
            SubgroupKind::HomographicLox(p) => {
                write!(f, "HomographicLox({})", if p.is_some() { "φ" } else { "None" })
            }
        }
    }
}

impl SubgroupKind {
    /// Whether t ↦ A(t) obeys A(s)A(t) = A(s+t).
    pub fn is_group(&self) -> bool {
        !matches!(self, SubgroupKind::HomographicLox(_))
    }
}

pub fn subgroup_element(kind: &SubgroupKind, t: f64) -> Result<MobiusMatrix> {
    let m = match kind {
        SubgroupKind::EllipticG => MobiusMatrix::diagonal(Complex64::from_polar(1.0, t / 2.0)),
        SubgroupKind::HyperbolicG => MobiusMatrix::diagonal(Complex64::new((t / 2.0).exp(), 0.0)),
        SubgroupKind::ParabolicG => {
            MobiusMatrix::unimodular(ONE, Complex64::new(t, 0.0), ZERO, ONE)
        }
        SubgroupKind::AsymptoticLox => {
            MobiusMatrix::diagonal((Complex64::new(1.0, 1.0) * (t / 2.0)).exp())
        }
        SubgroupKind::AsymptoticLoxFlow => {
            MobiusMatrix::diagonal((Complex64::new(-1.0, -1.0) * (t / 4.0)).exp())
        }
        SubgroupKind::HomographicLox(phi) => {
            let phi = phi.as_ref().ok_or(Error::MissingScaling)?;
            let s = phi(t)?;
            if !(s > 0.0) {
                return Err(Error::Domain(format!("scaling φ({t}) = {s} is not positive")));
            }
            MobiusMatrix::diagonal(Complex64::from_polar(s.sqrt(), t / 2.0))
        }
    };
    Ok(m)
}

/// Orbit of z0 under the family, sampled on `t_grid`.
pub fn orbit_samples(kind: &SubgroupKind, z0: PlanePoint, t_grid: &[f64]) -> Result<Vec<PlanePoint>> {
    if z0.is_infinite() {
        return Err(Error::InfinitePoint);
    }
    t_grid
        .iter()
        .map(|&t| subgroup_element(kind, t).map(|m| m.apply(z0)))
        .collect()
}
