//! Trajectory-level checks: agreement with the predicted one-parameter
//! flow, fitted rates, persistence of the condition residuals, and
//! conservation bookkeeping.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::conditions::{self, PhiParams, SolutionClassTag};
use crate::dynamics::{self, Trajectory};
use crate::error::{Error, Result};

/// What the fitted rate means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateKind {
    /// μ in z_k(t) ≈ e^{μt} z_k(0).
    Exponential,
    /// v in z_k(t) ≈ z_k(0) + v t.
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub tag: SolutionClassTag,
    pub max_deviation: f64,
    pub time_of_max: f64,
    pub body_of_max: usize,
    pub rate_kind: RateKind,
    #[serde(serialize_with = "crate::io::serialize_complex_vec")]
    pub fitted_rate: Vec<Complex64>,
    /// Samples with t ≤ this value were used for the fit.
    pub fit_window: f64,
    pub samples: usize,
}

impl InvarianceReport {
    pub fn rate(&self) -> Complex64 {
        self.fitted_rate[0]
    }
}

/// Unwrapped log(z(t)/z(0)) along a sample sequence.
fn unwrapped_logs(zs: &[Complex64]) -> Vec<Complex64> {
    let z0 = zs[0];
    let mut out = Vec::with_capacity(zs.len());
    let mut prev_arg = 0.0;
    let mut turns = 0.0;
    for z in zs {
        let q = z / z0;
        let a = q.arg();
        if !out.is_empty() {
            let d = a - prev_arg;
            if d > PI {
                turns -= 2.0 * PI;
            } else if d < -PI {
                turns += 2.0 * PI;
            }
        }
        prev_arg = a;
        out.push(Complex64::new(q.norm().ln(), a + turns));
    }
    out
}

/// Least-squares slope through the origin, Σ t y / Σ t².
fn slope_through_origin(t: &[f64], y: &[Complex64]) -> Complex64 {
    let num: Complex64 = t.iter().zip(y).map(|(t, y)| y * *t).sum();
    let den: f64 = t.iter().map(|t| t * t).sum();
    num / den
}

/// Fits the complex rate over samples with t ≤ `window`.
///
/// Bodies at the origin carry no exponential information and are skipped.
/// The returned vector holds the joint fit first, then one entry per body
/// (NaN for skipped bodies).
pub fn fit_rate(traj: &Trajectory, kind: RateKind, window: f64) -> Result<Vec<Complex64>> {
    let used: Vec<usize> = (0..traj.len()).filter(|&i| traj.samples[i].t <= window).collect();
    if used.len() < 2 {
        return Err(Error::Domain("rate fit needs at least two samples in the window".into()));
    }
    let t: Vec<f64> = used.iter().map(|&i| traj.samples[i].t - traj.samples[0].t).collect();
    let n = traj.masses.len();
    let mut per_body = Vec::with_capacity(n);
    let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
    for k in 0..n {
        let zs: Vec<Complex64> = used.iter().map(|&i| traj.samples[i].z[k]).collect();
        let y: Vec<Complex64> = match kind {
            RateKind::Exponential => {
                if zs[0].norm() < 1e-12 {
                    per_body.push(Complex64::new(f64::NAN, f64::NAN));
                    continue;
                }
                unwrapped_logs(&zs)
            }
            RateKind::Linear => zs.iter().map(|z| z - zs[0]).collect(),
        };
        per_body.push(slope_through_origin(&t, &y));
        num += t.iter().zip(&y).map(|(t, y)| y * *t).sum::<Complex64>();
        den += t.iter().map(|t| t * t).sum::<f64>();
    }
    if den == 0.0 {
        return Err(Error::Domain("no body carries rate information".into()));
    }
    let mut out = vec![num / den];
    out.extend(per_body);
    Ok(out)
}

fn predicted(tag: SolutionClassTag, traj: &Trajectory, t: f64) -> Result<Vec<Complex64>> {
    let s0 = traj.first();
    if tag != SolutionClassTag::TotallyGeodesic {
        return conditions::residual_mobius_orbit(tag, &s0.z, t - s0.t);
    }
    // homothetic: z_k(t) = φ(t) z_k(0) with the slope read off the body
    // farthest from the origin
    let (k, r0) = s0
        .z
        .iter()
        .enumerate()
        .map(|(k, z)| (k, z.norm()))
        .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    if r0 == 0.0 {
        return Ok(s0.z.clone());
    }
    let slope = (s0.v[k] / s0.z[k]).re;
    let p = PhiParams::with_initial_slope(r0, traj.radius, slope)?;
    let f = conditions::phi(t - s0.t, &p)?;
    Ok(s0.z.iter().map(|z| z * f).collect())
}

/// Compares every sample with the closed-form flow of the tag from the
/// first sample and fits the empirical rate over the first quarter.
pub fn check_orbit_invariance(traj: &Trajectory, tag: SolutionClassTag) -> Result<InvarianceReport> {
    if traj.is_empty() {
        return Err(Error::Domain("empty trajectory".into()));
    }
    let mut worst = (0.0, traj.first().t, 0);
    for s in &traj.samples {
        let p = match predicted(tag, traj, s.t) {
            Ok(p) => p,
            // the homothetic prediction stops at the pole of φ
            Err(Error::Domain(_)) => break,
            Err(e) => return Err(e),
        };
        for (k, (z, q)) in s.z.iter().zip(&p).enumerate() {
            let d = (z - q).norm();
            if d > worst.0 {
                worst = (d, s.t, k);
            }
        }
    }
    let kind = if tag == SolutionClassTag::MobiusParabolic {
        RateKind::Linear
    } else {
        RateKind::Exponential
    };
    let t0 = traj.first().t;
    let window = t0 + 0.25 * (traj.last().t - t0);
    let fitted_rate = fit_rate(traj, kind, window * (1.0 + 1e-12))?;
    Ok(InvarianceReport {
        tag,
        max_deviation: worst.0,
        time_of_max: worst.1,
        body_of_max: worst.2,
        rate_kind: kind,
        fitted_rate,
        fit_window: window,
        samples: traj.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftReport {
    pub tag: SolutionClassTag,
    pub times: Vec<f64>,
    pub residual_max_norm: Vec<f64>,
    pub energy_drift: Vec<f64>,
    pub max_energy_drift: f64,
    pub initial_residual: f64,
    pub max_residual: f64,
    /// First time the residual exceeds ten times its initial value.
    pub first_exceedance: Option<f64>,
    pub min_separation: f64,
    pub min_antipodal_margin: f64,
}

/// Evaluates the tag's residual at every sample, with energy and
/// singular-set bookkeeping.
pub fn residual_drift(traj: &Trajectory, tag: SolutionClassTag) -> DriftReport {
    let r = traj.radius.get();
    let e0 = traj.first().energy;
    let mut times = Vec::with_capacity(traj.len());
    let mut res = Vec::with_capacity(traj.len());
    let mut drift = Vec::with_capacity(traj.len());
    let mut min_sep = f64::INFINITY;
    let mut min_margin = f64::INFINITY;
    for s in &traj.samples {
        times.push(s.t);
        let per = conditions::residual_raw(tag, &s.z, &traj.masses, r, Default::default());
        res.push(per.iter().map(|x| x.norm()).fold(0.0, f64::max));
        drift.push(dynamics::relative_energy_drift(&e0, &s.energy));
        let p = dynamics::proximity(&s.z, r);
        min_sep = min_sep.min(p.min_separation);
        min_margin = min_margin.min(p.min_antipodal_margin);
    }
    let initial = res[0];
    let first_exceedance = times
        .iter()
        .zip(&res)
        .find(|(_, v)| **v > 10.0 * initial)
        .map(|(t, _)| *t);
    DriftReport {
        tag,
        max_energy_drift: drift.iter().copied().fold(0.0, f64::max),
        max_residual: res.iter().copied().fold(0.0, f64::max),
        initial_residual: initial,
        times,
        residual_max_norm: res,
        energy_drift: drift,
        first_exceedance,
        min_separation: min_sep,
        min_antipodal_margin: min_margin,
    }
}

/// Largest change of |z_k| from its initial value over all bodies.
pub fn modulus_variation(traj: &Trajectory) -> f64 {
    let z0 = &traj.first().z;
    traj.samples
        .iter()
        .flat_map(|s| s.z.iter().zip(z0).map(|(z, w)| (z.norm() - w.norm()).abs()))
        .fold(0.0, f64::max)
}

/// Whether |z_k| strictly decreases from sample to sample for every body
/// off the origin.
pub fn modulus_strictly_decreasing(traj: &Trajectory) -> bool {
    let n = traj.masses.len();
    (0..n)
        .filter(|&k| traj.first().z[k].norm() > 0.0)
        .all(|k| traj.samples.windows(2).all(|w| w[1].z[k].norm() < w[0].z[k].norm()))
}

/// Period 2π/|ω| of the angular motion of `body`, with ω fitted over the
/// whole trajectory.
pub fn angular_period(traj: &Trajectory, body: usize) -> Result<f64> {
    let rate = fit_rate(traj, RateKind::Exponential, f64::INFINITY)?;
    let w = rate[body + 1].im;
    if !w.is_finite() || w == 0.0 {
        return Err(Error::Domain("no angular motion".into()));
    }
    Ok(2.0 * PI / w.abs())
}
