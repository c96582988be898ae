//! Dormand–Prince 5(4) embedded Runge–Kutta with adaptive step control.

/// Outcome of a single call to [`DormandPrince::step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    Accepted { h_used: f64, h_next: f64 },
    Underflow { h: f64 },
    NonFinite,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

/// Integrator state for y' = f(t, y) with first-same-as-last reuse.
pub struct DormandPrince<F>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    rhs: F,
    tol: Tolerances,
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y_new: Vec<f64>,
    pub rhs_evals: usize,
    pub rejected: usize,
    fsal_valid: bool,
}

impl<F> DormandPrince<F>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    pub fn new(dim: usize, tol: Tolerances, rhs: F) -> Self {
        let z = || vec![0.0; dim];
        Self {
            rhs,
            tol,
            k: [z(), z(), z(), z(), z(), z(), z()],
            tmp: z(),
            y_new: z(),
            rhs_evals: 0,
            rejected: 0,
            fsal_valid: false,
        }
    }

    fn scale(&self, a: f64, b: f64) -> f64 {
        self.tol.abs + self.tol.rel * a.abs().max(b.abs())
    }

    fn rms(&self, v: &[f64], y: &[f64]) -> f64 {
        let s: f64 = v
            .iter()
            .zip(y)
            .map(|(vi, yi)| {
                let q = vi / self.scale(*yi, *yi);
                q * q
            })
            .sum();
        (s / v.len() as f64).sqrt()
    }

    /// Starting step size following Hairer, Nørsett & Wanner (II.4).
    pub fn initial_step(&mut self, t: f64, y: &[f64], h_max: f64) -> f64 {
        let n = y.len();
        let mut f0 = vec![0.0; n];
        (self.rhs)(t, y, &mut f0);
        self.rhs_evals += 1;
        let d0 = self.rms(y, y);
        let d1 = self.rms(&f0, y);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(h_max);
        let y1: Vec<f64> = y.iter().zip(&f0).map(|(yi, fi)| yi + h0 * fi).collect();
        let mut f1 = vec![0.0; n];
        (self.rhs)(t + h0, &y1, &mut f1);
        self.rhs_evals += 1;
        let diff: Vec<f64> = f1.iter().zip(&f0).map(|(a, b)| a - b).collect();
        let d2 = self.rms(&diff, y) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        self.k[0].copy_from_slice(&f0);
        self.fsal_valid = true;
        (100.0 * h0).min(h1).min(h_max)
    }

    /// Attempts steps from (t, y) until one of size ≤ `h` is accepted.
    ///
    /// On acceptance `y` holds the new state. `h_cap` bounds the step (used
    /// to land exactly on output times).
    pub fn step(&mut self, t: f64, y: &mut [f64], mut h: f64, h_cap: f64) -> StepOutcome {
        let n = y.len();
        if !self.fsal_valid {
            let mut k0 = std::mem::take(&mut self.k[0]);
            (self.rhs)(t, y, &mut k0);
            self.k[0] = k0;
            self.rhs_evals += 1;
            self.fsal_valid = true;
        }
        loop {
            // stretch steps that would stop just short of the cap
            let capped = h >= h_cap * (1.0 - 1e-6);
            if capped {
                h = h_cap;
            }
            if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                return StepOutcome::Underflow { h };
            }
            self.stages(t, y, h);
            let mut err_sq = 0.0;
            let mut finite = true;
            for i in 0..n {
                let e = h
                    * (E1 * self.k[0][i]
                        + E3 * self.k[2][i]
                        + E4 * self.k[3][i]
                        + E5 * self.k[4][i]
                        + E6 * self.k[5][i]
                        + E7 * self.k[6][i]);
                if !self.y_new[i].is_finite() || !e.is_finite() {
                    finite = false;
                }
                let q = e / self.scale(y[i], self.y_new[i]);
                err_sq += q * q;
            }
            let err = (err_sq / n as f64).sqrt();
            if !finite {
                self.rejected += 1;
                h *= MIN_FACTOR;
                if h < 1e-300 {
                    return StepOutcome::NonFinite;
                }
                continue;
            }
            if err <= 1.0 {
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                y.copy_from_slice(&self.y_new);
                self.k.swap(0, 6);
                // when the step was shortened to hit an output time keep
                // proposing the uncapped size
                let h_next = if capped { (h * factor).max(h) } else { h * factor };
                return StepOutcome::Accepted { h_used: h, h_next };
            }
            self.rejected += 1;
            h *= (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
        }
    }

    fn stages(&mut self, t: f64, y: &[f64], h: f64) {
        let n = y.len();
        macro_rules! stage {
            ($dst:expr, $c:expr, $($a:expr => $ki:expr),+) => {{
                for i in 0..n {
                    self.tmp[i] = y[i] + h * (0.0 $( + $a * self.k[$ki][i])+);
                }
                let mut out = std::mem::take(&mut self.k[$dst]);
                (self.rhs)(t + $c * h, &self.tmp, &mut out);
                self.k[$dst] = out;
                self.rhs_evals += 1;
            }};
        }
        stage!(1, C2, A21 => 0);
        stage!(2, C3, A31 => 0, A32 => 1);
        stage!(3, C4, A41 => 0, A42 => 1, A43 => 2);
        stage!(4, C5, A51 => 0, A52 => 1, A53 => 2, A54 => 3);
        stage!(5, 1.0, A61 => 0, A62 => 1, A63 => 2, A64 => 3, A65 => 4);
        for i in 0..n {
            self.y_new[i] = y[i]
                + h * (A71 * self.k[0][i]
                    + A73 * self.k[2][i]
                    + A74 * self.k[3][i]
                    + A75 * self.k[4][i]
                    + A76 * self.k[5][i]);
        }
        let mut out = std::mem::take(&mut self.k[6]);
        (self.rhs)(t + h, &self.y_new, &mut out);
        self.k[6] = out;
        self.rhs_evals += 1;
    }
}
