use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use rigid_core::{
    abel_coeffs, eval_abel_rhs, eval_planar_field, normalize_a4, normalize_b1, rotate_frame, AbelCoeffs, RawParams,
    RotationAngle,
};

fn raw(v: [f64; 6]) -> RawParams {
    RawParams::new(v[0], v[1], v[2], v[3], v[4], v[5]).unwrap()
}

fn params() -> impl Strategy<Value = RawParams> {
    prop::array::uniform6(-3.0..3.0f64).prop_map(raw)
}

fn angle(phi: f64) -> RotationAngle {
    RotationAngle::new(phi).unwrap()
}

fn close(a: &RawParams, b: &RawParams, tol: f64) -> bool {
    a.as_array().iter().zip(b.as_array()).all(|(x, y)| (x - y).abs() <= tol)
}

proptest! {
    #[test]
    fn rotation_is_a_group_action(p in params(), f1 in -7.0..7.0f64, f2 in -7.0..7.0f64) {
        let twice = rotate_frame(&rotate_frame(&p, angle(f1)), angle(f2));
        let once = rotate_frame(&p, angle(f1 + f2));
        prop_assert!(close(&twice, &once, 1e-10));
    }

    #[test]
    fn rotation_shifts_the_angle(p in params(), phi in 0.0..TAU, theta in -4.0..4.0f64) {
        let c = abel_coeffs(&p);
        let r = abel_coeffs(&rotate_frame(&p, angle(phi)));
        prop_assert!((r.eval_b(theta) - c.eval_b(theta + phi)).abs() <= 1e-12 * (1.0 + p.max_norm()));
        prop_assert!((r.eval_a(theta) - c.eval_a(theta + phi)).abs() <= 1e-12 * (1.0 + p.max_norm()));
    }

    #[test]
    fn inverse_rotation(p in params(), phi in -7.0..7.0f64) {
        let back = rotate_frame(&rotate_frame(&p, angle(phi)), angle(-phi));
        prop_assert!(close(&back, &p, 1e-12 * (1.0 + p.max_norm())));
    }

    #[test]
    fn polar_correspondence(p in params(), theta in -4.0..4.0f64, r in 0.01..3.0f64) {
        let (s, c) = theta.sin_cos();
        let (x, y) = (r * c, r * s);
        let (xd, yd) = eval_planar_field(&p, x, y);
        let radial = (x * xd + y * yd) / r;
        let rhs = eval_abel_rhs(&abel_coeffs(&p), theta, r);
        prop_assert!((radial - rhs).abs() <= 1e-12 * (1.0 + radial.abs().max(rhs.abs())));
        let angular = (x * yd - y * xd) / (r * r);
        prop_assert!((angular - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn abel_coefficients_are_odd(p in params(), theta in -10.0..10.0f64) {
        let c = abel_coeffs(&p);
        let tol = 1e-12 * (1.0 + p.max_norm());
        prop_assert!((c.eval_a(theta + PI) + c.eval_a(theta)).abs() <= tol);
        prop_assert!((c.eval_b(theta + PI) + c.eval_b(theta)).abs() <= tol);
    }

    #[test]
    fn normalize_a4_kills_a4(p in params()) {
        let (q, phi) = normalize_a4(&p);
        let rotated = rotate_frame(&p, phi);
        prop_assert!(rotated.a4.abs() <= 1e-12 * p.max_norm().max(1.0));
        // the reported parameters are the rotated ones with a4 dropped
        prop_assert_eq!(q.to_raw(), RawParams { a4: 0.0, ..rotated });
        prop_assert!(abel_coeffs(&rotated).eval_a(FRAC_PI_2).abs() <= 1e-12 * p.max_norm().max(1.0));
    }

    #[test]
    fn normalize_b1_kills_b1(p in params()) {
        let (q, phi) = normalize_b1(&p);
        let rotated = rotate_frame(&p, phi);
        prop_assert!(rotated.b1.abs() <= 1e-12 * p.max_norm().max(1.0));
        prop_assert_eq!(q.b1, 0.0);
        prop_assert!(q.b2 >= 0.0 || p.b1 == 0.0);
        let expected = RawParams { b1: 0.0, ..rotated };
        prop_assert!(close(&expected, &q, 0.0));
    }
}

#[test]
fn rotation_examples() {
    let p = raw([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let q = rotate_frame(&p, angle(FRAC_PI_2));
    assert!(q.b1.abs() < 1e-15 && (q.b2 + 1.0).abs() < 1e-15);
    let any = raw([0.3, -1.2, 2.0, 0.4, -0.7, 1.1]);
    assert_eq!(rotate_frame(&any, RotationAngle::ZERO), any);
}

#[test]
fn normalize_pure_y_cubed() {
    let p = raw([0.4, -0.3, 0.0, 0.0, 0.0, 1.0]);
    let (q, phi) = normalize_a4(&p);
    assert!((phi.radians() - 1.5 * PI).abs() < 1e-12);
    let r = rotate_frame(&p, phi);
    assert!(r.a4.abs() < 1e-12);
    // sin^3(Θ - π/2) = -cos^3 Θ
    assert!((q.a1 + 1.0).abs() < 1e-12 && q.a2.abs() < 1e-12 && q.a3.abs() < 1e-12);
}

#[test]
fn normalize_b1_quarter_turn() {
    let (q, phi) = normalize_b1(&raw([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
    assert!((phi.radians() - 1.5 * PI).abs() < 1e-15);
    assert_eq!(q.b1, 0.0);
    assert!((q.b2.abs() - 1.0).abs() < 1e-15);
}

#[test]
fn rigid_field_at_hopf_point() {
    let p = rigid_core::build_hopf_example(-0.05, 1.0).to_raw();
    let a1 = (1.0 + 120.0 * PI + 4.1) / (74.0 * PI);
    let (xd, yd) = eval_planar_field(&p, 1.0, 0.0);
    assert!((xd - (5.0 + a1)).abs() < 1e-14);
    assert_eq!(yd, 1.0);
    let zero = AbelCoeffs::default();
    assert_eq!(eval_abel_rhs(&zero, 0.3, 2.0), 0.0);
}
