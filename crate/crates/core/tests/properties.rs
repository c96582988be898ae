use curved_nbody::conditions::{self, SolutionClassTag};
use curved_nbody::dynamics::{self, Configuration};
use curved_nbody::geom::{self, CurvatureRadius, PlanePoint};
use curved_nbody::io;
use curved_nbody::mobius::{MobiusClass, MobiusMatrix};
use curved_nbody::Complex64;
use proptest::prelude::*;

fn cplx(range: f64) -> impl Strategy<Value = Complex64> {
    (-range..range, -range..range).prop_map(|(a, b)| Complex64::new(a, b))
}

fn radius() -> impl Strategy<Value = CurvatureRadius> {
    (0.3f64..4.0).prop_map(|r| CurvatureRadius::new(r).unwrap())
}

fn sl2() -> impl Strategy<Value = MobiusMatrix> {
    (cplx(2.0), cplx(2.0), cplx(2.0), cplx(2.0))
        .prop_filter("well conditioned", |(a, b, c, d)| (a * d - b * c).norm() > 0.2)
        .prop_map(|(a, b, c, d)| MobiusMatrix::new(a, b, c, d).unwrap())
}

fn dist(z: Complex64, w: Complex64, r: CurvatureRadius) -> f64 {
    geom::geodesic_distance(z.into(), w.into(), r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn distance_is_a_metric(r in radius(), a in cplx(5.0), b in cplx(5.0), c in cplx(5.0)) {
        let (ab, ba) = (dist(a, b, r), dist(b, a, r));
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(ab >= 0.0 && ab <= std::f64::consts::PI * r.get() + 1e-12);
        prop_assert!(ab <= dist(a, c, r) + dist(c, b, r) + 1e-10);
    }

    #[test]
    fn distance_matches_sphere_lift(r in radius(), a in cplx(5.0), b in cplx(5.0)) {
        let g = geom::great_circle_distance(
            &geom::lift_to_sphere(a.into(), r),
            &geom::lift_to_sphere(b.into(), r),
            r,
        );
        prop_assert!((dist(a, b, r) - g).abs() < 1e-10);
    }

    #[test]
    fn antipode_is_at_half_circumference(r in radius(), a in cplx(5.0)) {
        prop_assume!(a.norm() > 1e-3);
        let q = geom::antipode(a.into(), r);
        let d = geom::geodesic_distance(a.into(), q, r);
        prop_assert!((d - std::f64::consts::PI * r.get()).abs() < 1e-8);
    }

    #[test]
    fn rotations_and_sphere_motions_are_isometries(
        r in radius(), a in cplx(3.0), b in cplx(3.0), p in cplx(1.0), theta in 0.0f64..std::f64::consts::TAU
    ) {
        let u = Complex64::from_polar(1.0, theta);
        prop_assert!((dist(u * a, u * b, r) - dist(a, b, r)).abs() < 1e-10);
        // w ↦ (w − p)/(1 + p̄w/R²): a rigid motion of the sphere
        let rr = r.squared();
        let m = |w: Complex64| (w - p) / (1.0 + p.conj() * w / rr);
        prop_assume!((1.0 + p.conj() * a / rr).norm() > 1e-2 && (1.0 + p.conj() * b / rr).norm() > 1e-2);
        prop_assert!((dist(m(a), m(b), r) - dist(a, b, r)).abs() < 1e-8);
    }

    #[test]
    fn class_is_conjugation_invariant(kind in 0usize..4, x in 0.1f64..3.0, y in 0.1f64..3.0, d in sl2()) {
        let (n, cls) = match kind {
            0 => (MobiusMatrix::diagonal(Complex64::from_polar(1.0, x)), MobiusClass::Elliptic),
            1 => (MobiusMatrix::diagonal(Complex64::new(1.0 + x, 0.0)), MobiusClass::Hyperbolic),
            2 => (
                MobiusMatrix::new(Complex64::new(1.0, 0.0), Complex64::new(x, y), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap(),
                MobiusClass::Parabolic,
            ),
            _ => (MobiusMatrix::diagonal(Complex64::from_polar(1.0 + x, y)), MobiusClass::Loxodromic),
        };
        prop_assert_eq!(n.classify_with(1e-10), cls);
        prop_assert_eq!((d.inverse() * n * d).classify_with(1e-10), cls);
    }

    #[test]
    fn fixed_points_are_fixed(a in sl2()) {
        prop_assume!(!a.is_identity(1e-9));
        for fp in a.fixed_points().unwrap().points() {
            let image = a.apply(fp);
            prop_assert!(image.separation(&fp) < 1e-6, "{:?} -> {:?}", fp, image);
        }
    }

    #[test]
    fn gradient_rotates_with_configuration(
        r in radius(), z1 in cplx(1.5), z2 in cplx(1.5), z3 in cplx(1.5), theta in 0.0f64..std::f64::consts::TAU
    ) {
        let s = r.get();
        let z = [z1 * s, z2 * s, z3 * s];
        let Ok(c) = Configuration::from_parts(r, &[1.0, 0.7, 1.3], &z, None) else { return Ok(()); };
        let p = dynamics::proximity(c.positions().as_slice(), s);
        prop_assume!(p.min_separation > 0.05 * s && p.min_antipodal_margin > 0.05 * s * s);
        let rot = c.rotated(theta);
        let u = Complex64::from_polar(1.0, theta);
        for k in 0..3 {
            let g = dynamics::grad_conjugate(&c, k);
            let gr = dynamics::grad_conjugate(&rot, k);
            prop_assert!((gr - u * g).norm() <= 1e-9 * (1.0 + g.norm()));
            let e = conditions::residual(SolutionClassTag::MobiusElliptic, &c).per_body[k];
            let er = conditions::residual(SolutionClassTag::MobiusElliptic, &rot).per_body[k];
            prop_assert!((er - u * e).norm() <= 1e-9 * (1.0 + e.norm()));
        }
    }

    #[test]
    fn config_json_round_trips(r in radius(), z1 in cplx(2.0), z2 in cplx(2.0), v in cplx(1.0), m in 0.01f64..5.0) {
        let Ok(c) = Configuration::from_parts(r, &[m, 1.0], &[z1, z2], Some(&[v, -v])) else { return Ok(()); };
        let back = io::config_from_str(&io::config_to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(back.radius().get(), c.radius().get());
        prop_assert_eq!(back.masses(), c.masses());
        prop_assert_eq!(back.positions(), c.positions());
        prop_assert_eq!(back.velocities(), c.velocities());
    }
}

#[test]
fn plane_point_infinity_maps_through_lift() {
    let r = CurvatureRadius::new(2.0).unwrap();
    let north = geom::lift_to_sphere(PlanePoint::Infinity, r);
    let far = geom::lift_to_sphere(PlanePoint::new(1e9, 0.0), r);
    assert!(geom::great_circle_distance(&north, &far, r) < 1e-8);
}
