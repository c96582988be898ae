//! Scalar root finding: sign-change scan, bisection, Newton polishing and
//! detection of even-multiplicity (tangent) roots.

use serde::Serialize;

/// How a root was located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootKind {
    /// f changes sign across the bracket.
    SignChange,
    /// f touches zero without changing sign (found from a zero of f′).
    Tangent,
    /// f vanishes at a scan node or endpoint.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub root: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
    pub kind: RootKind,
}

/// Bisection on a sign-changing bracket down to adjacent floats.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, usize) {
    let mut fa = f(a);
    let mut iters = 0;
    if fa == 0.0 {
        return (a, 0);
    }
    if f(b) == 0.0 {
        return (b, 0);
    }
    while iters < 200 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        iters += 1;
        let fm = f(m);
        if fm == 0.0 {
            return (m, iters);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let x = if f(a).abs() <= f(b).abs() { a } else { b };
    (x, iters)
}

/// Newton steps that are kept only while they reduce |f| and stay inside
/// the bracket.
pub fn newton_polish<F, D>(f: &F, df: &D, mut x: f64, bracket: (f64, f64), steps: usize) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (lo, hi) = (bracket.0.min(bracket.1), bracket.0.max(bracket.1));
    let mut fx = f(x).abs();
    for _ in 0..steps {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let y = x - f(x) / d;
        if !(lo..=hi).contains(&y) {
            break;
        }
        let fy = f(y).abs();
        if fy >= fx {
            break;
        }
        x = y;
        fx = fy;
        if fx == 0.0 {
            break;
        }
    }
    x
}

/// All roots of f in [a, b] found on a uniform `n`-interval scan.
///
/// Sign changes are bracketed and bisected. Sign changes of f′ whose
/// extremum satisfies |f| ≤ `zero_tol` are reported as tangent roots, and
/// scan nodes (including the endpoints) with |f| ≤ `zero_tol` as exact
/// roots. Roots closer than `merge_tol` are merged, keeping the smaller
/// residual.
pub fn scan_roots<F, D>(f: F, df: D, a: f64, b: f64, n: usize, zero_tol: f64) -> Vec<RootResult>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let merge_tol = 1e-9 * (b - a).abs().max(1.0);
    let xs: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let ds: Vec<f64> = xs.iter().map(|&x| df(x)).collect();
    let mut out: Vec<RootResult> = Vec::new();

    for i in 0..=n {
        if fs[i].abs() <= zero_tol && fs[i].abs() <= neighbour_min(&fs, i) {
            out.push(RootResult {
                root: xs[i],
                bracket: (xs[i], xs[i]),
                residual: fs[i].abs(),
                iterations: 0,
                kind: RootKind::Exact,
            });
        }
    }
    for i in 0..n {
        let (x0, x1) = (xs[i], xs[i + 1]);
        if fs[i] != 0.0 && fs[i + 1] != 0.0 && (fs[i] < 0.0) != (fs[i + 1] < 0.0) {
            let (x, it) = bisect(&f, x0, x1);
            let x = newton_polish(&f, &df, x, (x0, x1), 3);
            out.push(RootResult {
                root: x,
                bracket: (x0, x1),
                residual: f(x).abs(),
                iterations: it,
                kind: RootKind::SignChange,
            });
        }
        if ds[i] != 0.0 && ds[i + 1] != 0.0 && (ds[i] < 0.0) != (ds[i + 1] < 0.0) {
            let (x, it) = bisect(&df, x0, x1);
            let fx = f(x).abs();
            if fx <= zero_tol && (fs[i] < 0.0) == (fs[i + 1] < 0.0) {
                out.push(RootResult {
                    root: x,
                    bracket: (x0, x1),
                    residual: fx,
                    iterations: it,
                    kind: RootKind::Tangent,
                });
            }
        }
    }

    out.sort_by(|p, q| p.root.total_cmp(&q.root));
    let mut merged: Vec<RootResult> = Vec::with_capacity(out.len());
    for r in out {
        match merged.last_mut() {
            Some(last) if (r.root - last.root).abs() < merge_tol => {
                if r.residual < last.residual || (r.kind != RootKind::Exact && last.kind == RootKind::Exact && r.residual <= last.residual) {
                    *last = r;
                }
            }
            _ => merged.push(r),
        }
    }
    merged
}

fn neighbour_min(fs: &[f64], i: usize) -> f64 {
    let l = if i > 0 { fs[i - 1].abs() } else { f64::INFINITY };
    let r = if i + 1 < fs.len() { fs[i + 1].abs() } else { f64::INFINITY };
    l.min(r)
}

/// Dense real polynomial with coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::new(vec![0.0]);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).copied().unwrap_or(0.0) + other.coeffs.get(i).copied().unwrap_or(0.0))
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::new(vec![1.0]), |acc, _| acc.mul(self))
    }

    /// Cauchy bound: every root satisfies |x| ≤ 1 + max|c_i/c_n|.
    pub fn root_bound(&self) -> f64 {
        let lead = *self.coeffs.last().unwrap();
        if lead == 0.0 {
            return 0.0;
        }
        1.0 + self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max)
    }

    /// Distinct real roots via a dense scan over the Cauchy interval.
    pub fn real_roots(&self, n_scan: usize) -> Vec<RootResult> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let b = self.root_bound() * (1.0 + 1e-9);
        let d = self.derivative();
        let scale = self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max) * b.max(1.0).powi(self.degree() as i32);
        scan_roots(|x| self.eval(x), |x| d.eval(x), -b, b, n_scan, 1e-13 * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_sqrt2() {
        let (x, it) = bisect(|x| x * x - 2.0, 0.0, 2.0);
        assert!((x - 2f64.sqrt()).abs() < 4e-16);
        assert!(it > 40);
    }

    #[test]
    fn polynomial_arithmetic() {
        let p = Polynomial::new(vec![1.0, 1.0]); // 1 + x
        let q = p.pow(3);
        assert_eq!(q.coeffs(), &[1.0, 3.0, 3.0, 1.0]);
        assert_eq!(q.derivative().coeffs(), &[3.0, 6.0, 3.0]);
        assert_eq!(q.eval(2.0), 27.0);
        assert_eq!(p.add(&p.scale(-1.0)).degree(), 0);
    }

    #[test]
    fn simple_real_roots() {
        // (x−1)(x+2)(x−3)
        let p = Polynomial::new(vec![1.0, -1.0]).mul(&Polynomial::new(vec![2.0, 1.0])).mul(&Polynomial::new(vec![-3.0, 1.0]));
        let r: Vec<f64> = p.real_roots(10_000).iter().map(|r| r.root).collect();
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn double_root_detected_as_tangent() {
        // (x−0.3)²(x+1)
        let p = Polynomial::new(vec![-0.3, 1.0]).pow(2).mul(&Polynomial::new(vec![1.0, 1.0]));
        let roots = p.real_roots(10_000);
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[1].kind, RootKind::Tangent);
        assert!((roots[1].root - 0.3).abs() < 1e-7);
    }

    #[test]
    fn endpoint_root_is_exact() {
        let f = |x: f64| x * x * x;
        let roots = scan_roots(f, |x| 3.0 * x * x, 0.0, 1.0, 1000, 1e-14);
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].root, 0.0);
    }

    #[test]
    fn no_roots() {
        let p = Polynomial::new(vec![1.0, 0.0, 1.0]);
        assert!(p.real_roots(1000).is_empty());
    }
}
