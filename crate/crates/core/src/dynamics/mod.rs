//! Cotangent force function, equations of motion, energy and integration.

mod integrator;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result, SingularKind};
use crate::geom::{self, CurvatureRadius, DEFAULT_SINGULAR_TOL};
pub use integrator::{DormandPrince, StepOutcome, Tolerances};

/// One point mass with position and velocity in the stereographic plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Body {
    pub mass: f64,
    pub z: Complex64,
    pub v: Complex64,
}

impl Body {
    pub fn new(mass: f64, z: Complex64, v: Complex64) -> Self {
        Self { mass, z, v }
    }

    pub fn at_rest(mass: f64, z: Complex64) -> Self {
        Self::new(mass, z, Complex64::new(0.0, 0.0))
    }
}

/// A nonsingular configuration of n ≥ 1 positive masses on M²_R.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    radius: CurvatureRadius,
    bodies: Vec<Body>,
}

impl Configuration {
    pub fn new(radius: CurvatureRadius, bodies: Vec<Body>) -> Result<Self> {
        if bodies.is_empty() {
            return Err(Error::InvalidConfiguration("no bodies".into()));
        }
        for (k, b) in bodies.iter().enumerate() {
            if !(b.mass.is_finite() && b.mass > 0.0) {
                return Err(Error::InvalidConfiguration(format!(
                    "body {k}: mass must be positive, got {}",
                    b.mass
                )));
            }
            if !(b.z.re.is_finite() && b.z.im.is_finite() && b.v.re.is_finite() && b.v.im.is_finite()) {
                return Err(Error::InvalidConfiguration(format!("body {k}: non-finite state")));
            }
        }
        let zs: Vec<Complex64> = bodies.iter().map(|b| b.z).collect();
        check_nonsingular(&zs, radius.get(), DEFAULT_SINGULAR_TOL)?;
        Ok(Self { radius, bodies })
    }

    /// Builds a configuration from parallel slices; all velocities zero if
    /// `velocities` is `None`.
    pub fn from_parts(
        radius: CurvatureRadius,
        masses: &[f64],
        positions: &[Complex64],
        velocities: Option<&[Complex64]>,
    ) -> Result<Self> {
        if masses.len() != positions.len() || velocities.is_some_and(|v| v.len() != masses.len()) {
            return Err(Error::InvalidConfiguration("length mismatch".into()));
        }
        let zero = Complex64::new(0.0, 0.0);
        let bodies = masses
            .iter()
            .zip(positions)
            .enumerate()
            .map(|(k, (&m, &z))| Body::new(m, z, velocities.map_or(zero, |v| v[k])))
            .collect();
        Self::new(radius, bodies)
    }

    pub fn radius(&self) -> CurvatureRadius {
        self.radius
    }

    pub fn n(&self) -> usize {
        self.bodies.len()
    }

    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    pub fn masses(&self) -> Vec<f64> {
        self.bodies.iter().map(|b| b.mass).collect()
    }

    pub fn positions(&self) -> Vec<Complex64> {
        self.bodies.iter().map(|b| b.z).collect()
    }

    pub fn velocities(&self) -> Vec<Complex64> {
        self.bodies.iter().map(|b| b.v).collect()
    }

    /// Same masses and positions, new velocities.
    pub fn with_velocities(&self, v: &[Complex64]) -> Result<Self> {
        if v.len() != self.n() {
            return Err(Error::InvalidConfiguration("length mismatch".into()));
        }
        let mut out = self.clone();
        for (b, &vk) in out.bodies.iter_mut().zip(v) {
            b.v = vk;
        }
        Ok(out)
    }

    /// Rotates every position and velocity by e^{iθ}.
    pub fn rotated(&self, theta: f64) -> Self {
        let u = Complex64::from_polar(1.0, theta);
        let mut out = self.clone();
        for b in &mut out.bodies {
            b.z *= u;
            b.v *= u;
        }
        out
    }
}

/// Fails with the first singular pair found (collision takes precedence).
pub fn check_nonsingular(z: &[Complex64], r: f64, tol: f64) -> Result<()> {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if let Some(kind) = geom::classify_singular(z[i], z[j], r, tol) {
                return Err(Error::SingularPair { i, j, kind });
            }
        }
    }
    Ok(())
}

/// Closest approach to the singular set over all pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proximity {
    pub min_separation: f64,
    pub separation_pair: (usize, usize),
    pub min_antipodal_margin: f64,
    pub margin_pair: (usize, usize),
}

pub fn proximity(z: &[Complex64], r: f64) -> Proximity {
    let mut p = Proximity {
        min_separation: f64::INFINITY,
        separation_pair: (0, 0),
        min_antipodal_margin: f64::INFINITY,
        margin_pair: (0, 0),
    };
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = (z[i] - z[j]).norm();
            if d < p.min_separation {
                p.min_separation = d;
                p.separation_pair = (i, j);
            }
            let m = geom::antipodal_margin(z[i], z[j], r);
            if m < p.min_antipodal_margin {
                p.min_antipodal_margin = m;
                p.margin_pair = (i, j);
            }
        }
    }
    p
}

/// The pair kernel (|z_j|²+R²)²(R²+z̄_j z_k)(z_j−z_k) / (|z_j−z_k|³|R²+z̄_j z_k|³).
///
/// Both the gradient and every condition system are sums of this kernel
/// weighted by the masses.
#[inline]
pub fn pair_kernel(zk: Complex64, zj: Complex64, r: f64) -> Complex64 {
    let r2 = r * r;
    let s = zj.norm_sqr() + r2;
    let a = Complex64::new(r2, 0.0) + zj.conj() * zk;
    let dz = zj - zk;
    let dn = dz.norm();
    let an = a.norm();
    a * dz * (s * s / (dn * dn * dn * an * an * an))
}

/// Σ_{j≠k} m_j · kernel(z_k, z_j). Masses are not checked, so zero or
/// negative weights are allowed (used by the mass solvers).
pub fn kernel_sum(z: &[Complex64], masses: &[f64], k: usize, r: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, (&zj, &mj)) in z.iter().zip(masses).enumerate() {
        if j != k {
            acc += mj * pair_kernel(z[k], zj, r);
        }
    }
    acc
}

/// U_R = (1/R) Σ_{k<j} m_k m_j cot(d_kj/R).
pub fn force_function(c: &Configuration) -> f64 {
    let r = c.radius.get();
    let b = &c.bodies;
    let mut u = 0.0;
    for k in 0..b.len() {
        for j in k + 1..b.len() {
            u += b[k].mass * b[j].mass * geom::cot_unchecked(b[k].z, b[j].z, r);
        }
    }
    u / r
}

/// ∂U_R/∂z̄_k in the Wirtinger convention.
pub fn grad_conjugate(c: &Configuration, k: usize) -> Complex64 {
    let r = c.radius.get();
    let z = c.positions();
    let m = c.masses();
    grad_conjugate_raw(&z, &m, k, r)
}

pub fn grad_conjugate_raw(z: &[Complex64], masses: &[f64], k: usize, r: f64) -> Complex64 {
    let r2 = r * r;
    kernel_sum(z, masses, k, r) * (masses[k] * (r2 + z[k].norm_sqr()) / (4.0 * r2))
}

fn accelerations_into(z: &[Complex64], v: &[Complex64], masses: &[f64], r: f64, out: &mut [Complex64]) {
    let r2 = r * r;
    let r6 = r2 * r2 * r2;
    for k in 0..z.len() {
        let s = r2 + z[k].norm_sqr();
        let geo = 2.0 * z[k].conj() * v[k] * v[k] / s;
        out[k] = geo + kernel_sum(z, masses, k, r) * (s * s * s / (8.0 * r6));
    }
}

/// Accelerations z̈_k from the equations of motion.
pub fn eom_rhs(c: &Configuration) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); c.n()];
    accelerations_into(&c.positions(), &c.velocities(), &c.masses(), c.radius.get(), &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyValue {
    pub kinetic: f64,
    pub force_function: f64,
    pub total: f64,
}

/// Kinetic energy ½Σ m_k λ(z_k)|ż_k|², force function, and K − U.
pub fn energy(c: &Configuration) -> EnergyValue {
    let r = c.radius.get();
    let kinetic = 0.5
        * c.bodies
            .iter()
            .map(|b| b.mass * geom::conformal_factor_at(b.z, r) * b.v.norm_sqr())
            .sum::<f64>();
    let u = force_function(c);
    EnergyValue {
        kinetic,
        force_function: u,
        total: kinetic - u,
    }
}

/// Relative drift |E − E₀| / scale, where the scale is |E₀| or, when the
/// total energy is nearly zero, K₀ + |U₀|.
pub fn relative_energy_drift(e0: &EnergyValue, e: &EnergyValue) -> f64 {
    let mut scale = e0.total.abs();
    let alt = e0.kinetic + e0.force_function.abs();
    if scale < 1e-12 * alt.max(1e-300) {
        scale = alt;
    }
    if scale == 0.0 {
        return (e.total - e0.total).abs();
    }
    (e.total - e0.total).abs() / scale
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub t_end: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
    /// Evenly spaced output samples (excluding t = 0). `None` records every
    /// accepted step.
    pub samples: Option<usize>,
    /// Stop when a pair separation falls below `collision_guard · R`.
    pub collision_guard: f64,
    /// Stop when |R² + z̄_j z_k| falls below `antipodal_guard · R²`.
    pub antipodal_guard: f64,
}

impl IntegrateOptions {
    pub fn new(t_end: f64, tol: f64) -> Self {
        Self {
            t_end,
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.samples = Some(n);
        self
    }
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            t_end: 1.0,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_steps: 1_000_000,
            samples: None,
            collision_guard: 1e-6,
            antipodal_guard: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Termination {
    Completed,
    SingularApproach {
        t: f64,
        i: usize,
        j: usize,
        kind: SingularKind,
    },
    StiffnessFailure {
        t: f64,
        step: f64,
    },
    StepLimit {
        t: f64,
    },
    NonFinite {
        t: f64,
    },
}

impl Termination {
    pub fn is_completed(&self) -> bool {
        matches!(self, Termination::Completed)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
    pub min_step: f64,
    pub max_step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub z: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub energy: EnergyValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub radius: CurvatureRadius,
    pub masses: Vec<f64>,
    pub samples: Vec<Sample>,
    pub stats: StepStats,
    pub termination: Termination,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least the initial sample")
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// Rebuilds the configuration at sample `i`.
    pub fn configuration(&self, i: usize) -> Result<Configuration> {
        let s = &self.samples[i];
        Configuration::from_parts(self.radius, &self.masses, &s.z, Some(&s.v))
    }

    /// Maximum relative energy drift over the samples.
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.first().energy;
        self.samples
            .iter()
            .map(|s| relative_energy_drift(&e0, &s.energy))
            .fold(0.0, f64::max)
    }
}

fn pack(z: &[Complex64], v: &[Complex64], y: &mut [f64]) {
    for k in 0..z.len() {
        y[4 * k] = z[k].re;
        y[4 * k + 1] = z[k].im;
        y[4 * k + 2] = v[k].re;
        y[4 * k + 3] = v[k].im;
    }
}

fn unpack(y: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = y.len() / 4;
    let z = (0..n).map(|k| Complex64::new(y[4 * k], y[4 * k + 1])).collect();
    let v = (0..n).map(|k| Complex64::new(y[4 * k + 2], y[4 * k + 3])).collect();
    (z, v)
}

fn sample_from(radius: CurvatureRadius, masses: &[f64], t: f64, y: &[f64]) -> Sample {
    let (z, v) = unpack(y);
    let bodies = masses
        .iter()
        .zip(z.iter().zip(&v))
        .map(|(&m, (&z, &v))| Body::new(m, z, v))
        .collect();
    let energy = energy(&Configuration { radius, bodies });
    Sample { t, z, v, energy }
}

/// Integrates with default options to `t_end` at abs = rel = `tol`.
pub fn integrate(c0: &Configuration, t_end: f64, tol: f64) -> Trajectory {
    integrate_with(c0, &IntegrateOptions::new(t_end, tol))
}

pub fn integrate_with(c0: &Configuration, opts: &IntegrateOptions) -> Trajectory {
    let n = c0.n();
    let r = c0.radius.get();
    let masses = c0.masses();
    let mut y = vec![0.0; 4 * n];
    pack(&c0.positions(), &c0.velocities(), &mut y);

    let rhs_masses = masses.clone();
    let mut zbuf = vec![Complex64::new(0.0, 0.0); n];
    let mut vbuf = zbuf.clone();
    let mut abuf = zbuf.clone();
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
        for k in 0..n {
            zbuf[k] = Complex64::new(y[4 * k], y[4 * k + 1]);
            vbuf[k] = Complex64::new(y[4 * k + 2], y[4 * k + 3]);
        }
        accelerations_into(&zbuf, &vbuf, &rhs_masses, r, &mut abuf);
        for k in 0..n {
            dy[4 * k] = vbuf[k].re;
            dy[4 * k + 1] = vbuf[k].im;
            dy[4 * k + 2] = abuf[k].re;
            dy[4 * k + 3] = abuf[k].im;
        }
    };
    let tol = Tolerances {
        abs: opts.abs_tol,
        rel: opts.rel_tol,
    };
    let mut dp = DormandPrince::new(4 * n, tol, rhs);

    let mut samples = vec![sample_from(c0.radius, &masses, 0.0, &y)];
    let mut stats = StepStats {
        min_step: f64::INFINITY,
        ..StepStats::default()
    };
    let outputs: Vec<f64> = match opts.samples {
        Some(m) if m > 0 => (1..=m).map(|i| opts.t_end * i as f64 / m as f64).collect(),
        _ => vec![opts.t_end],
    };
    let record_all = opts.samples.is_none();

    let mut t = 0.0;
    let mut next_out = 0;
    let mut termination = Termination::Completed;
    let mut h = if opts.t_end > 0.0 {
        dp.initial_step(t, &y, opts.t_end)
    } else {
        0.0
    };

    while next_out < outputs.len() && opts.t_end > 0.0 {
        if stats.accepted >= opts.max_steps {
            termination = Termination::StepLimit { t };
            break;
        }
        let target = outputs[next_out];
        match dp.step(t, &mut y, h, target - t) {
            StepOutcome::Accepted { h_used, h_next } => {
                stats.accepted += 1;
                stats.min_step = stats.min_step.min(h_used);
                stats.max_step = stats.max_step.max(h_used);
                let hit = h_used >= target - t;
                t = if hit { target } else { t + h_used };
                h = h_next;
                let (z, _) = unpack(&y);
                let guard = guard_violation(&z, r, opts);
                if hit {
                    next_out += 1;
                }
                if record_all || hit || guard.is_some() {
                    samples.push(sample_from(c0.radius, &masses, t, &y));
                }
                if let Some((i, j, kind)) = guard {
                    termination = Termination::SingularApproach { t, i, j, kind };
                    break;
                }
            }
            StepOutcome::Underflow { h } => {
                termination = Termination::StiffnessFailure { t, step: h };
                break;
            }
            StepOutcome::NonFinite => {
                termination = Termination::NonFinite { t };
                break;
            }
        }
    }
    stats.rejected = dp.rejected;
    stats.rhs_evals = dp.rhs_evals;
    if stats.accepted == 0 {
        stats.min_step = 0.0;
    }
    Trajectory {
        radius: c0.radius,
        masses,
        samples,
        stats,
        termination,
    }
}

fn guard_violation(z: &[Complex64], r: f64, opts: &IntegrateOptions) -> Option<(usize, usize, SingularKind)> {
    let p = proximity(z, r);
    if p.min_separation < opts.collision_guard * r {
        let (i, j) = p.separation_pair;
        return Some((i, j, SingularKind::Collision));
    }
    if p.min_antipodal_margin < opts.antipodal_guard * r * r {
        let (i, j) = p.margin_pair;
        return Some((i, j, SingularKind::Antipodal));
    }
    None
}
