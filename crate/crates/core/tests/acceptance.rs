//! Acceptance criteria, one test each. Every test prints a single
//! `[AC-NN] PASS|FAIL ...` line (written directly to stdout so it shows up
//! even when the harness captures output) and then asserts.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use curved_nbody::conditions::{self, PhiParams, SolutionClassTag};
use curved_nbody::dynamics::{self, integrate_with, Body, Configuration, IntegrateOptions};
use curved_nbody::families::{self, FamilyShape, FamilySpec};
use curved_nbody::geom::{self, CurvatureRadius, PlanePoint};
use curved_nbody::mobius::{MobiusClass, MobiusMatrix};
use curved_nbody::verify;
use curved_nbody::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, pass: bool, what: &str, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "[AC-{id:02}] {verdict} {what}: {detail}");
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rad(r: f64) -> CurvatureRadius {
    CurvatureRadius::new(r).unwrap()
}

fn random_sl2(rng: &mut ChaCha8Rng) -> MobiusMatrix {
    loop {
        let mut z = || c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (a, b, cc, d) = (z(), z(), z(), z());
        if (a * d - b * cc).norm() > 0.2 {
            return MobiusMatrix::new(a, b, cc, d).unwrap();
        }
    }
}

#[test]
fn ac01_mobius_classification() {
    let start = Instant::now();
    let lam = Complex64::from_polar(1.0, PI / 8.0);
    let forms = [
        (MobiusMatrix::diagonal(lam), MobiusClass::Elliptic),
        (MobiusMatrix::new(c(1.0, 0.0), c(5.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap(), MobiusClass::Parabolic),
        (MobiusMatrix::diagonal(c(2.0, 0.0)), MobiusClass::Hyperbolic),
        (MobiusMatrix::diagonal(c(1.0, 1.0)), MobiusClass::Loxodromic),
    ];
    let tol = 1e-10;
    let normal_ok = forms.iter().all(|(m, cls)| m.classify_with(tol) == *cls);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let d = random_sl2(&mut rng);
        for (m, cls) in &forms {
            let conj = d.inverse() * *m * d;
            if conj.classify_with(tol) != *cls || (-conj).classify_with(tol) != *cls {
                mismatches += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = normal_ok && mismatches == 0 && secs < 1.0;
    report(
        1,
        pass,
        "Möbius classification",
        format!("normal forms ok={normal_ok}, conjugation mismatches={mismatches}/4000, runtime={secs:.3}s"),
    );
    assert!(pass);
}

#[test]
fn ac02_parabolic_alpha_two_body() {
    let start = Instant::now();
    let zero = families::solve_parabolic_alpha_2body(0.0, rad(1.0)).unwrap().values();
    let zero_ok = zero.len() == 2 && zero[0].abs() < 1e-12 && (zero[1] - 1.0).abs() < 1e-12;
    let sol = families::solve_parabolic_alpha_2body(1e-3, rad(1.0)).unwrap();
    let (root_ok, detail) = match sol.physical() {
        Ok(r) => {
            let res = families::parabolic_alpha_2body_eq(r.root, 1e-3, 1.0).abs();
            (r.root > 1.0 && r.root < PI && res < 1e-12, format!("α={:.15}, residual={res:.2e}", r.root))
        }
        Err(e) => (false, e.to_string()),
    };
    let secs = start.elapsed().as_secs_f64();
    let pass = zero_ok && root_ok && secs < 1.0;
    report(2, pass, "parabolic α-equation, 2 bodies", format!("m=0 roots={zero:?}; m/R=1e-3 {detail}; runtime={secs:.3}s"));
    assert!(pass);
}

#[test]
fn ac03_parabolic_alpha_three_body() {
    let zero = families::solve_parabolic_alpha_3body(0.0, 0.0, rad(1.0)).unwrap().values();
    let zero_ok = zero.len() == 2 && zero[0].abs() < 1e-12 && (zero[1] - 1.0).abs() < 1e-12;
    let sol = families::solve_parabolic_alpha_3body(5e-4, 1e-4, rad(1.0)).unwrap();
    let (root_ok, detail) = match sol.physical() {
        Ok(r) => {
            let res = families::parabolic_alpha_3body_eq(r.root, 5e-4, 1e-4, 1.0).abs();
            (r.root > 1.0 && r.root < PI && res < 1e-12, format!("α={:.15}, residual={res:.2e}", r.root))
        }
        Err(e) => (false, e.to_string()),
    };
    let pass = zero_ok && root_ok;
    report(3, pass, "parabolic α-equation, 3 bodies", format!("m=M=0 roots={zero:?}; m=5e-4, M=1e-4 {detail}"));
    assert!(pass);
}

#[test]
fn ac04_hyperbolic_antipodal_pair() {
    let (r, big_r) = (0.5, 1.0);
    let tag = SolutionClassTag::MobiusHyperbolic;
    let required = families::required_antipodal_mass(tag, r, rad(big_r)).unwrap();
    let spec = FamilySpec::new(tag, FamilyShape::TwoBodyAntipodal, rad(big_r)).r(r);
    let (pass, detail) = match families::build_family(&spec) {
        Err(e) => (false, format!("required equal mass m={:.6} ({e})", required.re)),
        Ok(cfg) => {
            let res = conditions::residual(tag, &cfg).max_norm;
            let traj = integrate_with(&cfg, &IntegrateOptions::new(0.2, 1e-12).with_samples(200));
            let rep = verify::check_orbit_invariance(&traj, tag).unwrap();
            let rate = rep.rate();
            let ok = res < 1e-10 && rep.max_deviation < 1e-4 && (rate.re + 0.5).abs() < 1e-3;
            (ok, format!("residual={res:.2e}, deviation={:.2e}, rate={rate}", rep.max_deviation))
        }
    };
    report(4, pass, "hyperbolic antipodal pair at r=R/2", detail);
    assert!(pass);
}

#[test]
fn ac05_parabolic_two_body_trajectory() {
    // m/R = 1e-3 at R = 10: the large-R regime in which the pair exists
    let (m, big_r) = (0.01, 10.0);
    let tag = SolutionClassTag::MobiusParabolic;
    let cfg = families::build_family(&FamilySpec::new(tag, FamilyShape::TwoBodyAntipodal, rad(big_r)).m(m)).unwrap();
    let traj = integrate_with(&cfg, &IntegrateOptions::new(0.2, 1e-12).with_samples(200));
    let rep = verify::check_orbit_invariance(&traj, tag).unwrap();
    let pass = traj.termination.is_completed() && rep.max_deviation < 1e-4;
    report(
        5,
        pass,
        "parabolic pair tracks z(0) − t/2",
        format!("R={big_r}, m={m}, max deviation={:.3e} over t∈[0,0.2], drift velocity={}", rep.max_deviation, rep.rate()),
    );
    assert!(pass);
}

fn random_config(rng: &mut ChaCha8Rng, n: usize, with_velocity: bool) -> Configuration {
    loop {
        let r: f64 = rng.gen_range(0.5..3.0);
        let bodies: Vec<Body> = (0..n)
            .map(|_| {
                let v = if with_velocity {
                    c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
                } else {
                    c(0.0, 0.0)
                };
                Body::new(
                    rng.gen_range(0.1..2.0),
                    c(rng.gen_range(-2.0..2.0) * r, rng.gen_range(-2.0..2.0) * r),
                    v,
                )
            })
            .collect();
        let z: Vec<Complex64> = bodies.iter().map(|b| b.z).collect();
        let p = dynamics::proximity(&z, r);
        if p.min_separation > 0.2 * r && p.min_antipodal_margin > 0.2 * r * r {
            return Configuration::new(rad(r), bodies).unwrap();
        }
    }
}

#[test]
fn ac06_gradient_finite_differences() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let cfg = random_config(&mut rng, 2 + i % 3, false);
        for k in 0..cfg.n() {
            let g = dynamics::grad_conjugate(&cfg, k);
            let u = |dz: Complex64| {
                let mut b = cfg.bodies().to_vec();
                b[k].z += dz;
                dynamics::force_function(&Configuration::new(cfg.radius(), b).unwrap())
            };
            let fd = c((u(c(h, 0.0)) - u(c(-h, 0.0))) / (2.0 * h), (u(c(0.0, h)) - u(c(0.0, -h))) / (2.0 * h)) * 0.5;
            worst = worst.max((g - fd).norm() / g.norm());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst < 1e-6 && secs < 5.0;
    report(6, pass, "gradient vs finite differences", format!("50 configs, max relative error={worst:.2e}, runtime={secs:.3}s"));
    assert!(pass);
}

// "Nonsingular" is taken as: every pair stays at least 0.1R apart along the
// whole (densely sampled) trajectory. Near-collisions are excluded and counted.
#[test]
fn ac07_energy_conservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut tested = 0;
    let mut skipped = 0;
    while tested < 10 {
        let cfg = random_config(&mut rng, 2 + tested % 3, true);
        let traj = integrate_with(&cfg, &IntegrateOptions::new(1.0, 1e-10).with_samples(1000));
        let r = cfg.radius().get();
        let closest = traj
            .samples
            .iter()
            .map(|s| dynamics::proximity(&s.z, r).min_separation / r)
            .fold(f64::INFINITY, f64::min);
        if !traj.termination.is_completed() || closest < 0.1 {
            skipped += 1;
            continue;
        }
        tested += 1;
        worst = worst.max(traj.max_energy_drift());
    }
    let pass = worst < 1e-8;
    report(
        7,
        pass,
        "energy conservation",
        format!("{tested} trajectories on t∈[0,1], tol=1e-10, max relative drift={worst:.2e} ({skipped} runs with closest approach < 0.1R excluded)"),
    );
    assert!(pass);
}

#[test]
fn ac08_equilateral_determinant() {
    let big_r = 1.0;
    let mut all = true;
    let mut parts = Vec::new();
    for r in [0.5, 1.0, 2f64.sqrt(), 2.0] {
        let s = families::scan_det_grid(families::totally_geodesic_det_3body_raw, r * big_r, big_r, 360, 0.05);
        let ok = s.at_equilateral < 1e-12 && s.min_outside > 1e-6;
        all &= ok;
        parts.push(format!(
            "r={r:.4}R: |det| at equilateral={:.2e}, min elsewhere={:.2e} [{}]",
            s.at_equilateral,
            s.min_outside,
            if ok { "ok" } else { "fails" }
        ));
    }
    report(8, all, "equilateral characterization by the 3-body determinant", parts.join("; "));
    assert!(all);
}

#[test]
fn ac09_two_body_obstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut min = f64::INFINITY;
    let mut count = 0;
    while count < 1000 {
        let big_r = rng.gen_range(0.5..3.0);
        let z1 = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let z2 = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let Ok(cfg) = Configuration::from_parts(rad(big_r), &[1.0, 1.0], &[z1, z2], None) else {
            continue;
        };
        count += 1;
        min = min.min(families::two_body_geodesic_obstruction(&cfg).unwrap());
    }
    let pass = min > 0.0 && min.is_finite();
    report(9, pass, "two-body totally geodesic obstruction", format!("1000 pairs, min value={min:.3e}"));
    assert!(pass);
}

#[test]
fn ac10_phi_consistency() {
    let (r0, big_r) = (0.5, 1.0);
    let p = PhiParams::printed_slope(r0, rad(big_r)).unwrap();
    let phi0 = conditions::phi(0.0, &p).unwrap();
    let mut q_spread: f64 = 0.0;
    let mut ode: f64 = 0.0;
    for i in 0..100 {
        let t = i as f64 / 99.0;
        let f = conditions::phi(t, &p).unwrap();
        let fd = conditions::phi_dot(t, &p).unwrap();
        q_spread = q_spread.max((fd / (big_r * big_r + f * f * r0 * r0) - p.c2).abs());
        ode = ode.max(conditions::phi_ode_residual(t, &p).unwrap().abs());
    }
    let d = conditions::phi_slope_discrepancy(r0, rad(big_r)).unwrap();
    let detected = !d.consistent && (d.printed_slope + 1.0 / r0).abs() < 1e-12;
    let pass = phi0 == 1.0 && q_spread < 1e-10 && ode < 1e-8 && detected;
    report(
        10,
        pass,
        "φ consistency",
        format!(
            "φ(0)={phi0}, quotient spread={q_spread:.2e}, ODE residual={ode:.2e}, φ̇(0)={} vs stated −1 (r0={r0})",
            d.printed_slope
        ),
    );
    assert!(pass);
}

#[test]
fn ac11_homographic_equilateral() {
    let tag = SolutionClassTag::HomographicLoxodromic;
    let big_r = 1.0;
    let spec = FamilySpec::new(tag, FamilyShape::ThreeBodyEquilateral, rad(big_r)).r(big_r).m(1.0);
    let cfg = families::build_family(&spec).unwrap();
    let res = conditions::residual(tag, &cfg).max_norm;
    let traj = integrate_with(&cfg, &IntegrateOptions::new(0.1, 1e-12).with_samples(400));
    let rep = verify::check_orbit_invariance(&traj, tag).unwrap();
    let mu = rep.rate();
    let err = (mu - c(-0.25, 0.75)).norm();
    let pass = res < 1e-10 && err < 1e-3;
    report(
        11,
        pass,
        "homographic loxodromic equilateral",
        format!("r=R, residual={res:.2e}, fitted μ={:.6}{:+.6}i (error {err:.2e}, window t≤{:.3})", mu.re, mu.im, rep.fit_window),
    );
    assert!(pass);
}

#[test]
fn ac12_geodesic_distance_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let r = rad(rng.gen_range(0.3..4.0));
        let s = r.get();
        let p = PlanePoint::new(rng.gen_range(-3.0..3.0) * s, rng.gen_range(-3.0..3.0) * s);
        let q = PlanePoint::new(rng.gen_range(-3.0..3.0) * s, rng.gen_range(-3.0..3.0) * s);
        let d = geom::geodesic_distance(p, q, r);
        let g = geom::great_circle_distance(&geom::lift_to_sphere(p, r), &geom::lift_to_sphere(q, r), r);
        worst = worst.max((d - g).abs());
    }
    let mut radial: f64 = 0.0;
    for i in 1..=50 {
        let r = rad(1.7);
        let rho = 0.1 * i as f64;
        let z = Complex64::from_polar(rho, 0.37 * i as f64);
        let d = geom::geodesic_distance(PlanePoint::new(0.0, 0.0), z.into(), r);
        radial = radial.max((d - 2.0 * 1.7 * (rho / 1.7).atan()).abs());
    }
    let pass = worst < 1e-10 && radial < 1e-10;
    report(12, pass, "geodesic distance vs sphere lift", format!("1000 pairs max error={worst:.2e}; radial max error={radial:.2e}"));
    assert!(pass);
}
