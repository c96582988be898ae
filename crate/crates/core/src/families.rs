//! Concrete solution families: α-equations, mass solves, constructors and
//! the determinant conditions behind the uniqueness results.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::conditions::{self, HomographicSign, PhiParams, SolutionClassTag};
use crate::dynamics::{self, Configuration};
use crate::error::{Error, Result};
use crate::geom::CurvatureRadius;
use crate::roots::{self, Polynomial, RootResult};

/// Scan resolution for the α-equations on [0, π].
pub const ALPHA_SCAN_POINTS: usize = 10_000;
const ALPHA_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyShape {
    /// z₁ = −z₂ (on the real axis, or on the imaginary axis for parabolic).
    #[serde(rename = "two-body")]
    TwoBodyAntipodal,
    /// z₃ = 0, z₁ = −z₂.
    #[serde(rename = "eulerian")]
    ThreeBodyEulerian,
    /// z_k = r e^{2πik/3}.
    #[serde(rename = "equilateral")]
    ThreeBodyEquilateral,
    /// z₁ = αRi, z₂ = −αRi, z₃ = 0.
    #[serde(rename = "parabolic-center")]
    ThreeBodyParabolicWithCenter,
}

impl FamilyShape {
    pub const ALL: [FamilyShape; 4] = [
        FamilyShape::TwoBodyAntipodal,
        FamilyShape::ThreeBodyEulerian,
        FamilyShape::ThreeBodyEquilateral,
        FamilyShape::ThreeBodyParabolicWithCenter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyShape::TwoBodyAntipodal => "two-body",
            FamilyShape::ThreeBodyEulerian => "eulerian",
            FamilyShape::ThreeBodyEquilateral => "equilateral",
            FamilyShape::ThreeBodyParabolicWithCenter => "parabolic-center",
        }
    }
}

impl fmt::Display for FamilyShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyShape::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown shape '{s}'")))
    }
}

/// Parameters for [`build_family`].
///
/// `r` is the common modulus of the bodies off the origin (ignored by the
/// parabolic shapes, whose radius is αR). `m` is the mass of the outer
/// bodies and `big_m` that of the central one; they are used as given where
/// the family leaves them free and as fixed data otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySpec {
    pub tag: SolutionClassTag,
    pub shape: FamilyShape,
    pub radius: CurvatureRadius,
    pub r: Option<f64>,
    pub m: Option<f64>,
    pub big_m: Option<f64>,
}

impl FamilySpec {
    pub fn new(tag: SolutionClassTag, shape: FamilyShape, radius: CurvatureRadius) -> Self {
        Self {
            tag,
            shape,
            radius,
            r: None,
            m: None,
            big_m: None,
        }
    }

    pub fn r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn m(mut self, m: f64) -> Self {
        self.m = Some(m);
        self
    }

    pub fn big_m(mut self, big_m: f64) -> Self {
        self.big_m = Some(big_m);
        self
    }

    fn require_r(&self) -> Result<f64> {
        match self.r {
            Some(r) if r.is_finite() && r > 0.0 => Ok(r),
            Some(r) => Err(Error::Domain(format!("r must be positive, got {r}"))),
            None => Err(Error::Domain(format!("shape {} needs r", self.shape))),
        }
    }
}

/// All roots of an α-equation in [0, π] plus the physical one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaRoots {
    pub roots: Vec<RootResult>,
    /// Smallest root strictly greater than 1, if it lies below π.
    pub physical: Option<RootResult>,
}

impl AlphaRoots {
    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.root).collect()
    }

    pub fn physical(&self) -> Result<RootResult> {
        self.physical.ok_or_else(|| {
            Error::NoRoot("no root of the α-equation in (1, π); the mass is too large for this R".into())
        })
    }
}

/// 16α³(1−α²)² − (m/R)(1+α²)⁶.
pub fn parabolic_alpha_2body_eq(alpha: f64, m: f64, radius: f64) -> f64 {
    let a2 = alpha * alpha;
    let p = 1.0 + a2;
    let p3 = p * p * p;
    16.0 * alpha * a2 * (1.0 - a2) * (1.0 - a2) - m / radius * p3 * p3
}

fn parabolic_alpha_2body_deriv(alpha: f64, m: f64, radius: f64) -> f64 {
    let a2 = alpha * alpha;
    let q = 1.0 - a2;
    let p = 1.0 + a2;
    48.0 * a2 * q * q - 64.0 * alpha * a2 * alpha * q - m / radius * 12.0 * alpha * p.powi(5)
}

/// 16α³(1−α²)² − ((1+α²)⁴/R)[m(1+α²)² − 4M(1−α²)²].
pub fn parabolic_alpha_3body_eq(alpha: f64, m: f64, big_m: f64, radius: f64) -> f64 {
    let a2 = alpha * alpha;
    let p = 1.0 + a2;
    let q = 1.0 - a2;
    let p2 = p * p;
    16.0 * alpha * a2 * q * q - p2 * p2 / radius * (m * p2 - 4.0 * big_m * q * q)
}

fn parabolic_alpha_3body_deriv(alpha: f64, m: f64, big_m: f64, radius: f64) -> f64 {
    let a2 = alpha * alpha;
    let p = 1.0 + a2;
    let q = 1.0 - a2;
    let lhs = 48.0 * a2 * q * q - 64.0 * alpha * a2 * alpha * q;
    // d/dα of (m p⁶ − 4M p⁴ q²)/R
    let d = m * 12.0 * alpha * p.powi(5) - 4.0 * big_m * (8.0 * alpha * p.powi(3) * q * q - 4.0 * alpha * p.powi(4) * q);
    lhs - d / radius
}

fn alpha_roots<F, D>(f: F, df: D) -> AlphaRoots
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let roots = roots::scan_roots(f, df, 0.0, PI, ALPHA_SCAN_POINTS, ALPHA_ZERO_TOL);
    let physical = roots.iter().copied().find(|r| r.root > 1.0 + 1e-9 && r.root < PI);
    AlphaRoots { roots, physical }
}

fn check_mass(name: &str, m: f64) -> Result<()> {
    if m.is_finite() && m >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be non-negative, got {m}")))
    }
}

/// Roots in [0, π] of the two-body parabolic α-equation.
pub fn solve_parabolic_alpha_2body(m: f64, radius: CurvatureRadius) -> Result<AlphaRoots> {
    check_mass("m", m)?;
    let r = radius.get();
    Ok(alpha_roots(
        |a| parabolic_alpha_2body_eq(a, m, r),
        |a| parabolic_alpha_2body_deriv(a, m, r),
    ))
}

/// Roots in [0, π] of the three-body (central mass M) parabolic α-equation.
pub fn solve_parabolic_alpha_3body(m: f64, big_m: f64, radius: CurvatureRadius) -> Result<AlphaRoots> {
    check_mass("m", m)?;
    check_mass("M", big_m)?;
    let r = radius.get();
    Ok(alpha_roots(
        |a| parabolic_alpha_3body_eq(a, m, big_m, r),
        |a| parabolic_alpha_3body_deriv(a, m, big_m, r),
    ))
}

/// The equal mass m (possibly non-real or negative) that would make the
/// tag's residual vanish for z₁ = r, z₂ = −r.
pub fn required_antipodal_mass(tag: SolutionClassTag, r: f64, radius: CurvatureRadius) -> Result<Complex64> {
    match tag {
        SolutionClassTag::MobiusParabolic | SolutionClassTag::TotallyGeodesic => {
            return Err(Error::Unsupported(format!("no antipodal mass law for the {tag} class")));
        }
        _ => {}
    }
    let big_r = radius.get();
    if !(r.is_finite() && r > 0.0) || (r - big_r).abs() < 1e-12 * big_r {
        return Err(Error::Domain(format!("need 0 < r ≠ R, got r = {r}")));
    }
    let z = Complex64::new(r, 0.0);
    let lhs = conditions::lhs(tag, z, big_r);
    let k = dynamics::pair_kernel(z, -z, big_r);
    let lhs = match tag {
        SolutionClassTag::HomographicLoxodromic => -lhs,
        _ => lhs,
    };
    Ok(lhs / k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AntipodalMass {
    pub mass: f64,
    pub residual: f64,
}

/// Equal mass for the pair z₁ = r, z₂ = −r; the residual is linear in m.
pub fn solve_antipodal_mass(tag: SolutionClassTag, r: f64, radius: CurvatureRadius) -> Result<AntipodalMass> {
    let m = required_antipodal_mass(tag, r, radius)?;
    let big_r = radius.get();
    let side = if r < big_r { "r < R" } else { "r > R" };
    if m.im.abs() > 1e-12 * m.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::Infeasible(format!(
            "{tag} antipodal pair at r = {r}, R = {big_r}: required mass {} + {}i is not real",
            m.re, m.im
        )));
    }
    if m.re <= 0.0 {
        return Err(Error::Infeasible(format!(
            "{tag} antipodal pair at r = {r}, R = {big_r} ({side}): required mass {} is not positive",
            m.re
        )));
    }
    let z = [Complex64::new(r, 0.0), Complex64::new(-r, 0.0)];
    let res = conditions::residual_raw(tag, &z, &[m.re, m.re], big_r, HomographicSign::Printed);
    Ok(AntipodalMass {
        mass: m.re,
        residual: res.iter().map(|x| x.norm()).fold(0.0, f64::max),
    })
}

/// Result of a linear mass solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassSolution {
    /// Mass of each body.
    pub masses: Vec<f64>,
    /// Unknowns whose coefficients and right-hand side vanish identically;
    /// they keep the supplied value.
    pub free: Vec<bool>,
    pub residual: f64,
}

/// Solves the tag's condition system for masses that are linear unknowns.
///
/// `pattern[k]` names the unknown carried by body k. Unknowns listed in
/// `fixed` keep the given value; `default` supplies values for unknowns the
/// system leaves undetermined. The system is solved in the least-squares
/// sense over the reals; any inconsistency or non-positive mass is
/// reported as infeasible.
pub fn solve_masses(
    tag: SolutionClassTag,
    z: &[Complex64],
    pattern: &[usize],
    fixed: &[(usize, f64)],
    default: f64,
    radius: CurvatureRadius,
) -> Result<MassSolution> {
    let big_r = radius.get();
    let n = z.len();
    let p = pattern.iter().copied().max().map_or(0, |x| x + 1);
    let sign = if tag == SolutionClassTag::HomographicLoxodromic { -1.0 } else { 1.0 };

    // columns: A[k][u] = Σ_{j: pattern[j]=u, j≠k} kernel(z_k, z_j)
    let mut a = vec![vec![Complex64::new(0.0, 0.0); p]; n];
    let mut term_scale = 0.0f64;
    for k in 0..n {
        for j in 0..n {
            if j != k {
                let kern = dynamics::pair_kernel(z[k], z[j], big_r);
                term_scale = term_scale.max(kern.norm());
                a[k][pattern[j]] += sign * kern;
            }
        }
    }
    let mut b: Vec<Complex64> = z.iter().map(|&zk| conditions::lhs(tag, zk, big_r)).collect();
    let lhs_scale = z
        .iter()
        .map(|zk| {
            let s = big_r * big_r + zk.norm_sqr();
            8.0 * big_r.powi(6) * (s * zk.norm() + 1.0) / (s * s * s * s)
        })
        .fold(0.0, f64::max);

    let mut value = vec![default; p];
    let mut known = vec![false; p];
    for &(u, v) in fixed {
        if u < p {
            value[u] = v;
            known[u] = true;
        }
    }
    for u in 0..p {
        if known[u] {
            for k in 0..n {
                b[k] -= a[k][u] * value[u];
            }
        }
    }
    let coef_tol = 1e-10 * term_scale.max(f64::MIN_POSITIVE);
    let mut free = vec![false; p];
    let mut active = Vec::new();
    for u in 0..p {
        if known[u] {
            continue;
        }
        let col = (0..n).map(|k| a[k][u].norm()).fold(0.0, f64::max);
        if col <= coef_tol {
            free[u] = true;
        } else {
            active.push(u);
        }
    }

    if !active.is_empty() {
        let x = least_squares(&a, &b, &active)?;
        for (i, &u) in active.iter().enumerate() {
            value[u] = x[i];
        }
    }
    let mut res = 0.0f64;
    for k in 0..n {
        let mut r = b[k];
        for &u in &active {
            r -= a[k][u] * value[u];
        }
        res = res.max(r.norm());
    }
    let scale = lhs_scale.max(term_scale * value.iter().map(|v| v.abs()).fold(0.0, f64::max));
    if res > 1e-9 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Infeasible(format!(
            "{tag}: no real masses satisfy the condition system (least-squares residual {res:e})"
        )));
    }
    let masses: Vec<f64> = pattern.iter().map(|&u| value[u]).collect();
    if let Some((k, m)) = masses.iter().enumerate().find(|(_, m)| !(**m > 0.0)) {
        return Err(Error::Infeasible(format!(
            "{tag}: body {k} would need mass {m}, which is not positive"
        )));
    }
    let per_body = conditions::residual_raw(tag, z, &masses, big_r, HomographicSign::Printed);
    Ok(MassSolution {
        masses,
        free,
        residual: per_body.iter().map(|x| x.norm()).fold(0.0, f64::max),
    })
}

/// Real least squares min Σ_k |b_k − Σ_u a_ku x_u|² over the `active`
/// columns via the normal equations (at most a handful of unknowns).
fn least_squares(a: &[Vec<Complex64>], b: &[Complex64], active: &[usize]) -> Result<Vec<f64>> {
    let q = active.len();
    let mut g = vec![vec![0.0; q + 1]; q];
    for k in 0..a.len() {
        for (i, &u) in active.iter().enumerate() {
            for (j, &v) in active.iter().enumerate() {
                g[i][j] += (a[k][u].conj() * a[k][v]).re;
            }
            g[i][q] += (a[k][u].conj() * b[k]).re;
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..q {
        let piv = (col..q)
            .max_by(|&x, &y| g[x][col].abs().total_cmp(&g[y][col].abs()))
            .expect("non-empty");
        if g[piv][col].abs() < 1e-300 {
            return Err(Error::Infeasible("mass unknowns are not independent".into()));
        }
        g.swap(col, piv);
        for row in 0..q {
            if row != col {
                let f = g[row][col] / g[col][col];
                for c in col..=q {
                    g[row][c] -= f * g[col][c];
                }
            }
        }
    }
    Ok((0..q).map(|i| g[i][q] / g[i][i]).collect())
}

fn phi_velocities(c: &Configuration) -> Result<Configuration> {
    let r0 = c.positions().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if r0 == 0.0 {
        return Ok(c.clone());
    }
    let p = PhiParams::printed_slope(r0, c.radius())?;
    let slope = conditions::phi_dot(0.0, &p)?;
    conditions::set_velocities_phi(c, slope)
}

/// Positions, masses and velocities of the requested family member.
pub fn build_family(spec: &FamilySpec) -> Result<Configuration> {
    use FamilyShape::*;
    use SolutionClassTag::*;
    let radius = spec.radius;
    let big_r = radius.get();
    let c0 = Complex64::new(0.0, 0.0);
    let tg = spec.tag == TotallyGeodesic;

    let (z, masses): (Vec<Complex64>, Vec<f64>) = match (spec.shape, spec.tag) {
        (TwoBodyAntipodal, MobiusParabolic) => {
            let m = spec.m.unwrap_or(1e-3);
            let alpha = solve_parabolic_alpha_2body(m, radius)?.physical()?.root;
            let z1 = Complex64::new(0.0, alpha * big_r);
            (vec![z1, -z1], vec![m, m])
        }
        (ThreeBodyParabolicWithCenter, MobiusParabolic) => {
            let m = spec.m.unwrap_or(5e-4);
            let big_m = spec.big_m.unwrap_or(1e-4);
            let alpha = solve_parabolic_alpha_3body(m, big_m, radius)?.physical()?.root;
            let z1 = Complex64::new(0.0, alpha * big_r);
            (vec![z1, -z1, c0], vec![m, m, big_m])
        }
        (ThreeBodyParabolicWithCenter, _) => {
            return Err(Error::Unsupported("the parabolic-center shape belongs to the parabolic class".into()));
        }
        (TwoBodyAntipodal, TotallyGeodesic) => {
            return Err(Error::Infeasible(
                "two bodies admit no totally geodesic motion (obstruction is strictly positive)".into(),
            ));
        }
        (TwoBodyAntipodal, tag) => {
            let r = spec.require_r()?;
            let m = solve_antipodal_mass(tag, r, radius)?.mass;
            let z1 = Complex64::new(r, 0.0);
            (vec![z1, -z1], vec![m, m])
        }
        (ThreeBodyEulerian, tag) => {
            let r = spec.require_r()?;
            let z1 = Complex64::new(r, 0.0);
            let z = vec![z1, -z1, c0];
            let m = spec.m.unwrap_or(1.0);
            let sol = solve_masses(tag, &z, &[0, 0, 1], &[(0, m)], spec.big_m.unwrap_or(1.0), radius)?;
            (z, sol.masses)
        }
        (ThreeBodyEquilateral, tag) => {
            let r = spec.require_r()?;
            let z: Vec<Complex64> = (0..3).map(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / 3.0)).collect();
            let m = spec.m.unwrap_or(1.0);
            let fixed: &[(usize, f64)] = if tg { &[(0, m)] } else { &[] };
            let sol = solve_masses(tag, &z, &[0, 0, 0], fixed, m, radius)?;
            (z, sol.masses)
        }
    };
    let cfg = Configuration::from_parts(radius, &masses, &z, None)?;
    if tg {
        phi_velocities(&cfg)
    } else {
        conditions::set_velocities(spec.tag, &cfg)
    }
}

/// The printed three-body determinant
/// (R²+z₁z̄₃)(R²+z₂z̄₁)(R²+z₃z̄₂) − (R²+z₁z̄₂)(R²+z₁z̄₃)(R²+z₂z̄₃).
pub fn totally_geodesic_det_3body_raw(z: [Complex64; 3], radius: f64) -> Complex64 {
    let r2 = Complex64::new(radius * radius, 0.0);
    let p = |a: Complex64, b: Complex64| r2 + a * b.conj();
    let [z1, z2, z3] = z;
    p(z1, z3) * p(z2, z1) * p(z3, z2) - p(z1, z2) * p(z1, z3) * p(z2, z3)
}

pub fn totally_geodesic_det_3body(c: &Configuration) -> Result<Complex64> {
    let z = three(c)?;
    Ok(totally_geodesic_det_3body_raw(z, c.radius().get()))
}

/// The same determinant with the second product taken as the complex
/// conjugate of the first, (R²+z₁z̄₂)(R²+z₂z̄₃)(R²+z₃z̄₁).
pub fn totally_geodesic_det_3body_conjugate_form(z: [Complex64; 3], radius: f64) -> Complex64 {
    let r2 = Complex64::new(radius * radius, 0.0);
    let p = |a: Complex64, b: Complex64| r2 + a * b.conj();
    let [z1, z2, z3] = z;
    p(z1, z3) * p(z2, z1) * p(z3, z2) - p(z1, z2) * p(z2, z3) * p(z3, z1)
}

fn three(c: &Configuration) -> Result<[Complex64; 3]> {
    let z = c.positions();
    z.try_into()
        .map_err(|_| Error::InvalidConfiguration("expected exactly three bodies".into()))
}

/// z₂z̄₁ − z₁z̄₂, the reduction of the determinant for an antipodal pair.
pub fn eulerian_reduction(z1: Complex64, z2: Complex64) -> Complex64 {
    z2 * z1.conj() - z1 * z2.conj()
}

/// Left sides of the trigonometric system
/// sin θ₂ − sin θ₃ + sin(θ₃−θ₂) and cos θ₂ + cos θ₃ + cos(θ₃−θ₂).
pub fn equilateral_trig_system(theta2: f64, theta3: f64) -> (f64, f64) {
    (
        theta2.sin() - theta3.sin() + (theta3 - theta2).sin(),
        theta2.cos() + theta3.cos() + (theta3 - theta2).cos(),
    )
}

fn wrap(a: f64) -> f64 {
    let x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x - 2.0 * PI
    } else {
        x
    }
}

/// Torus distance from (θ₂, θ₃) to the nearest collision (θ₂ = 0, θ₃ = 0
/// or θ₂ = θ₃).
pub fn collision_distance(theta2: f64, theta3: f64) -> f64 {
    let a = wrap(theta2).abs();
    let b = wrap(theta3).abs();
    let c = wrap(theta3 - theta2).abs() / std::f64::consts::SQRT_2;
    a.min(b).min(c)
}

/// Torus distance from (θ₂, θ₃) to the equilateral points (2π/3, 4π/3)
/// and (4π/3, 2π/3).
pub fn equilateral_distance(theta2: f64, theta3: f64) -> f64 {
    let d = |a: f64, b: f64| {
        let x = wrap(theta2 - a);
        let y = wrap(theta3 - b);
        x.hypot(y)
    };
    d(2.0 * PI / 3.0, 4.0 * PI / 3.0).min(d(4.0 * PI / 3.0, 2.0 * PI / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetGridScan {
    pub r: f64,
    pub radius: f64,
    pub grid: usize,
    pub exclusion: f64,
    /// |det| at θ = (0, 2π/3, 4π/3).
    pub at_equilateral: f64,
    /// Smallest |det| over grid points outside the exclusion zones.
    pub min_outside: f64,
    pub argmin: (f64, f64),
    pub points_checked: usize,
}

/// Scans |det| over an n×n grid of (θ₂, θ₃) with z₁ = r, z₂ = re^{iθ₂},
/// z₃ = re^{iθ₃}, skipping points within `exclusion` of a collision or of
/// an equilateral point.
pub fn scan_det_grid<F>(det: F, r: f64, radius: f64, n: usize, exclusion: f64) -> DetGridScan
where
    F: Fn([Complex64; 3], f64) -> Complex64,
{
    let at = |t2: f64, t3: f64| {
        det(
            [Complex64::new(r, 0.0), Complex64::from_polar(r, t2), Complex64::from_polar(r, t3)],
            radius,
        )
    };
    let mut best = (f64::INFINITY, (0.0, 0.0));
    let mut count = 0;
    for i in 0..n {
        let t2 = 2.0 * PI * i as f64 / n as f64;
        for j in 0..n {
            let t3 = 2.0 * PI * j as f64 / n as f64;
            if collision_distance(t2, t3) <= exclusion || equilateral_distance(t2, t3) <= exclusion {
                continue;
            }
            count += 1;
            let v = at(t2, t3).norm();
            if v < best.0 {
                best = (v, (t2, t3));
            }
        }
    }
    DetGridScan {
        r,
        radius,
        grid: n,
        exclusion,
        at_equilateral: at(2.0 * PI / 3.0, 4.0 * PI / 3.0).norm(),
        min_outside: best.0,
        argmin: best.1,
        points_checked: count,
    }
}

/// Modulus of 1/(|z₂−z₁|²(z̄₂−z̄₁)²|R²+z̄₂z₁|⁴), the determinant whose
/// non-vanishing rules out two-body totally geodesic motion.
pub fn two_body_geodesic_obstruction(c: &Configuration) -> Result<f64> {
    let z = c.positions();
    if z.len() != 2 {
        return Err(Error::InvalidConfiguration("expected exactly two bodies".into()));
    }
    Ok(two_body_obstruction_raw(z[0], z[1], c.radius().get()))
}

pub fn two_body_obstruction_raw(z1: Complex64, z2: Complex64, radius: f64) -> f64 {
    let d = (z2 - z1).norm();
    let a = crate::geom::antipodal_margin(z1, z2, radius);
    let d2 = d * d;
    let a2 = a * a;
    1.0 / (d2 * d2 * a2 * a2)
}

/// Max-norm of the totally geodesic residual for the restricted Eulerian
/// configuration z₁ = r, z₂ = −r, z₃ = 0 with a massless third body.
pub fn restricted_eulerian_tg_residual(r: f64, m: f64, radius: CurvatureRadius) -> Result<f64> {
    if !(r > 0.0 && m > 0.0) {
        return Err(Error::Domain("need r > 0 and m > 0".into()));
    }
    let z1 = Complex64::new(r, 0.0);
    let z = [z1, -z1, Complex64::new(0.0, 0.0)];
    dynamics::check_nonsingular(&z, radius.get(), crate::geom::DEFAULT_SINGULAR_TOL)?;
    let res = conditions::residual_raw(
        SolutionClassTag::TotallyGeodesic,
        &z,
        &[m, m, 0.0],
        radius.get(),
        HomographicSign::Printed,
    );
    Ok(res.iter().map(|x| x.norm()).fold(0.0, f64::max))
}

/// r(R²−r²)(α²+R²)² + α(R²−α²)(r²+R²)², whose real roots give the second
/// position α of a hyperbolic pair with z₁ = r.
pub fn hyperbolic_pair_alpha_poly(r: f64, radius: f64) -> Polynomial {
    let r2 = radius * radius;
    let s = r * r + r2;
    let a2r2 = Polynomial::new(vec![r2, 0.0, 1.0]);
    let first = a2r2.pow(2).scale(r * (r2 - r * r));
    let second = Polynomial::new(vec![0.0, r2, 0.0, -1.0]).scale(s * s);
    first.add(&second)
}

pub fn hyperbolic_pair_alpha_roots(r: f64, radius: CurvatureRadius) -> Vec<f64> {
    let p = hyperbolic_pair_alpha_poly(r, radius.get());
    p.real_roots(200_000).into_iter().map(|x| x.root).collect()
}
