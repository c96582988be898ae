//! Condition systems characterizing each Möbius solution class, their
//! velocity laws, and the homothetic scaling function φ(t).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{self, Configuration};
use crate::error::{Error, Result};
use crate::geom::CurvatureRadius;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionClassTag {
    #[serde(rename = "elliptic")]
    MobiusElliptic,
    #[serde(rename = "hyperbolic")]
    MobiusHyperbolic,
    #[serde(rename = "parabolic")]
    MobiusParabolic,
    AsymptoticLoxodromic,
    HomographicLoxodromic,
    TotallyGeodesic,
}

impl SolutionClassTag {
    pub const ALL: [SolutionClassTag; 6] = [
        SolutionClassTag::MobiusElliptic,
        SolutionClassTag::MobiusHyperbolic,
        SolutionClassTag::MobiusParabolic,
        SolutionClassTag::AsymptoticLoxodromic,
        SolutionClassTag::HomographicLoxodromic,
        SolutionClassTag::TotallyGeodesic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolutionClassTag::MobiusElliptic => "elliptic",
            SolutionClassTag::MobiusHyperbolic => "hyperbolic",
            SolutionClassTag::MobiusParabolic => "parabolic",
            SolutionClassTag::AsymptoticLoxodromic => "asymptotic-loxodromic",
            SolutionClassTag::HomographicLoxodromic => "homographic-loxodromic",
            SolutionClassTag::TotallyGeodesic => "totally-geodesic",
        }
    }

    /// μ in the linear velocity law ż_k = μ z_k, where one exists.
    pub fn linear_rate(self) -> Option<Complex64> {
        match self {
            SolutionClassTag::MobiusElliptic => Some(Complex64::new(0.0, -0.5)),
            SolutionClassTag::MobiusHyperbolic => Some(Complex64::new(-0.5, 0.0)),
            SolutionClassTag::AsymptoticLoxodromic => Some(Complex64::new(-0.5, -0.5)),
            SolutionClassTag::HomographicLoxodromic => Some(Complex64::new(-0.25, 0.75)),
            SolutionClassTag::MobiusParabolic | SolutionClassTag::TotallyGeodesic => None,
        }
    }
}

impl fmt::Display for SolutionClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolutionClassTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolutionClassTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown class '{s}'")))
    }
}

/// Sign used on the right-hand side of the homographic system.
///
/// The printed system carries a minus sign in front of the mass sum; the
/// system obtained by substituting ż = (3i−1)z/4 into the equations of
/// motion has a plus sign, like every other class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HomographicSign {
    #[default]
    Printed,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub tag: SolutionClassTag,
    pub t: f64,
    #[serde(serialize_with = "crate::io::serialize_complex_vec")]
    pub per_body: Vec<Complex64>,
    pub max_norm: f64,
    pub l2_norm: f64,
}

impl ResidualReport {
    pub fn new(tag: SolutionClassTag, t: f64, per_body: Vec<Complex64>) -> Self {
        let max_norm = per_body.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let l2_norm = per_body.iter().map(|r| r.norm_sqr()).sum::<f64>().sqrt();
        Self {
            tag,
            t,
            per_body,
            max_norm,
            l2_norm,
        }
    }
}

/// Left-hand side of the tag's condition system for one body.
pub fn lhs(tag: SolutionClassTag, z: Complex64, r: f64) -> Complex64 {
    let r2 = r * r;
    let r6 = r2 * r2 * r2;
    let n2 = z.norm_sqr();
    let s = r2 + n2;
    let s4 = (s * s) * (s * s);
    match tag {
        SolutionClassTag::MobiusElliptic => z * (2.0 * r6 * (n2 - r2) / s4),
        SolutionClassTag::MobiusHyperbolic => z * (2.0 * r6 * (r2 - n2) / s4),
        SolutionClassTag::MobiusParabolic => z.conj() * (-4.0 * r6 / s4),
        SolutionClassTag::AsymptoticLoxodromic => Complex64::i() * z * (4.0 * r6 * (r2 - n2) / s4),
        SolutionClassTag::HomographicLoxodromic => {
            let k = Complex64::new(-1.0, 3.0);
            k * k * z * (r6 * (r2 - n2) / (2.0 * s4))
        }
        SolutionClassTag::TotallyGeodesic => Complex64::new(0.0, 0.0),
    }
}

/// Per-body residuals LHS − RHS on raw slices; masses are not validated.
pub fn residual_raw(
    tag: SolutionClassTag,
    z: &[Complex64],
    masses: &[f64],
    r: f64,
    sign: HomographicSign,
) -> Vec<Complex64> {
    (0..z.len())
        .map(|k| match tag {
            SolutionClassTag::TotallyGeodesic => -dynamics::grad_conjugate_raw(z, masses, k, r),
            SolutionClassTag::HomographicLoxodromic if sign == HomographicSign::Printed => {
                lhs(tag, z[k], r) + dynamics::kernel_sum(z, masses, k, r)
            }
            _ => lhs(tag, z[k], r) - dynamics::kernel_sum(z, masses, k, r),
        })
        .collect()
}

/// Residual of the tag's condition system exactly as printed.
pub fn residual(tag: SolutionClassTag, c: &Configuration) -> ResidualReport {
    residual_with(tag, c, HomographicSign::Printed, 0.0)
}

pub fn residual_with(tag: SolutionClassTag, c: &Configuration, sign: HomographicSign, t: f64) -> ResidualReport {
    let per_body = residual_raw(tag, &c.positions(), &c.masses(), c.radius().get(), sign);
    ResidualReport::new(tag, t, per_body)
}

/// Velocity prescribed by the tag's law at position z.
pub fn velocity_law(tag: SolutionClassTag, z: Complex64) -> Result<Complex64> {
    match tag {
        SolutionClassTag::MobiusParabolic => Ok(Complex64::new(-0.5, 0.0)),
        SolutionClassTag::TotallyGeodesic => Err(Error::Unsupported(
            "totally geodesic velocities come from φ; use set_velocities_phi".into(),
        )),
        _ => Ok(tag.linear_rate().expect("linear law") * z),
    }
}

/// Overwrites velocities according to the tag's law; positions unchanged.
pub fn set_velocities(tag: SolutionClassTag, c: &Configuration) -> Result<Configuration> {
    let v = c
        .positions()
        .into_iter()
        .map(|z| velocity_law(tag, z))
        .collect::<Result<Vec<_>>>()?;
    c.with_velocities(&v)
}

/// ż_k(0) = φ̇(0) z_k(0) for the homothetic motion z_k(t) = φ(t) z_k(0).
pub fn set_velocities_phi(c: &Configuration, phi_dot0: f64) -> Result<Configuration> {
    let v: Vec<Complex64> = c.positions().into_iter().map(|z| z * phi_dot0).collect();
    c.with_velocities(&v)
}

/// Closed-form flow of the tag's velocity law from z0.
///
/// Elliptic e^{−it/2}z₀, hyperbolic e^{−t/2}z₀, parabolic z₀ − t/2,
/// asymptotic loxodromic e^{−(1+i)t/2}z₀, homographic e^{(3i−1)t/4}z₀.
pub fn residual_mobius_orbit(tag: SolutionClassTag, z0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    match tag {
        SolutionClassTag::MobiusParabolic => Ok(z0.iter().map(|z| z - 0.5 * t).collect()),
        SolutionClassTag::TotallyGeodesic => Err(Error::Unsupported(
            "totally geodesic flow depends on φ; use PhiParams".into(),
        )),
        _ => {
            let g = (tag.linear_rate().expect("linear law") * t).exp();
            Ok(z0.iter().map(|z| g * z).collect())
        }
    }
}

/// Parameters of the homothetic scaling φ(t) = (R/r₀) tan(C₂Rr₀ t + C₁),
/// the general solution of φ̇/(R² + φ²r₀²) = C₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiParams {
    pub r0: f64,
    pub radius: f64,
    pub c1: f64,
    pub c2: f64,
    /// φ(0), kept separately so that it is reproduced exactly.
    pub phi0: f64,
}

impl PhiParams {
    pub fn from_constants(r0: f64, radius: CurvatureRadius, c1: f64, c2: f64) -> Result<Self> {
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(Error::Domain(format!("r0 must be positive, got {r0}")));
        }
        if !(c1.is_finite() && c2.is_finite()) || c1.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::Domain("C1 must lie in (−π/2, π/2)".into()));
        }
        Ok(Self {
            r0,
            radius: radius.get(),
            c1,
            c2,
            phi0: radius.get() / r0 * c1.tan(),
        })
    }

    /// φ(0) = 1 and φ̇(0) = `phi_dot0`.
    pub fn with_initial_slope(r0: f64, radius: CurvatureRadius, phi_dot0: f64) -> Result<Self> {
        let r = radius.get();
        let c1 = (r0 / r).atan();
        let c2 = phi_dot0 / (r * r + r0 * r0);
        let mut p = Self::from_constants(r0, radius, c1, c2)?;
        p.phi0 = 1.0;
        Ok(p)
    }

    /// φ(0) = 1 with the initial slope −1/r₀ of the closed form as printed.
    pub fn printed_slope(r0: f64, radius: CurvatureRadius) -> Result<Self> {
        Self::with_initial_slope(r0, radius, -1.0 / r0)
    }

    fn omega(&self) -> f64 {
        self.c2 * self.radius * self.r0
    }

    /// Time interval around 0 on which the tangent has no pole.
    pub fn domain(&self) -> (f64, f64) {
        let half = std::f64::consts::FRAC_PI_2;
        let w = self.omega();
        if w == 0.0 {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        let a = (-half - self.c1) / w;
        let b = (half - self.c1) / w;
        (a.min(b), a.max(b))
    }

    fn check(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if t > lo && t < hi {
            Ok(())
        } else {
            Err(Error::Domain(format!("t = {t} outside the pole-free interval ({lo}, {hi})")))
        }
    }
}

/// φ(t), evaluated through the tangent addition formula
/// φ = (φ₀ + kτ)/(1 − φ₀τ/k), k = R/r₀, τ = tan(C₂Rr₀t), so that φ(0) = φ₀
/// exactly.
pub fn phi(t: f64, p: &PhiParams) -> Result<f64> {
    p.check(t)?;
    let k = p.radius / p.r0;
    let tau = (p.omega() * t).tan();
    Ok((p.phi0 + k * tau) / (1.0 - p.phi0 / k * tau))
}

/// φ̇ = C₂ (R² + r₀²φ²).
pub fn phi_dot(t: f64, p: &PhiParams) -> Result<f64> {
    let f = phi(t, p)?;
    Ok(p.c2 * (p.radius * p.radius + p.r0 * p.r0 * f * f))
}

/// φ̈ = 2C₂ r₀² φ φ̇.
pub fn phi_ddot(t: f64, p: &PhiParams) -> Result<f64> {
    let f = phi(t, p)?;
    let fd = p.c2 * (p.radius * p.radius + p.r0 * p.r0 * f * f);
    Ok(2.0 * p.c2 * p.r0 * p.r0 * f * fd)
}

/// The closed form exactly as printed:
/// (R²/r₀²) tan(arctan(r₀²/R²) − R²r₀ t/(r₀⁴+R⁴)).
pub fn phi_printed(t: f64, r0: f64, radius: CurvatureRadius) -> Result<f64> {
    let (arg, scale) = printed_arg(t, r0, radius);
    if arg.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!("t = {t} crosses a pole of the printed φ")));
    }
    Ok(scale * arg.tan())
}

pub fn phi_dot_printed(t: f64, r0: f64, radius: CurvatureRadius) -> Result<f64> {
    let (arg, scale) = printed_arg(t, r0, radius);
    if arg.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!("t = {t} crosses a pole of the printed φ")));
    }
    let r = radius.get();
    let r2 = r * r;
    let w = r2 * r0 / (r0.powi(4) + r2 * r2);
    let c = arg.cos();
    Ok(-scale * w / (c * c))
}

fn printed_arg(t: f64, r0: f64, radius: CurvatureRadius) -> (f64, f64) {
    let r2 = radius.squared();
    let q = r0 * r0 / r2;
    let w = r2 * r0 / (r0.powi(4) + r2 * r2);
    (q.atan() - w * t, 1.0 / q)
}

/// Residual of φ̈ − 2r₀²φφ̇²/(R² + φ²r₀²) at t.
pub fn phi_ode_residual(t: f64, p: &PhiParams) -> Result<f64> {
    let f = phi(t, p)?;
    let fd = phi_dot(t, p)?;
    let fdd = phi_ddot(t, p)?;
    Ok(fdd - 2.0 * p.r0 * p.r0 * f * fd * fd / (p.radius * p.radius + f * f * p.r0 * p.r0))
}

/// Comparison of the initial slope of the printed closed form with the
/// value φ̇(0) = −1 stated alongside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeDiscrepancy {
    pub r0: f64,
    pub printed_slope: f64,
    pub stated_slope: f64,
    pub difference: f64,
    pub consistent: bool,
}

pub fn phi_slope_discrepancy(r0: f64, radius: CurvatureRadius) -> Result<SlopeDiscrepancy> {
    let printed = phi_dot_printed(0.0, r0, radius)?;
    let stated = -1.0;
    let difference = printed - stated;
    Ok(SlopeDiscrepancy {
        r0,
        printed_slope: printed,
        stated_slope: stated,
        difference,
        consistent: difference.abs() < 1e-12,
    })
}
