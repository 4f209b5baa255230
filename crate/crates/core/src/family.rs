//! Parameters of the rigid family and frame rotations.
//!
//! A member of the family is `x' = -y + x F(x, y)`, `y' = x + y F(x, y)` with
//! `F = b1 x + b2 y + a1 x^3 + a2 x^2 y + a3 x y^2 + a4 y^3`. Rotating the
//! coordinate frame keeps the rigid form and acts linearly on the six
//! coefficients, which lets us normalize either `a4 = 0` (the working frame of
//! every analysis in this crate) or `b1 = 0`.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Result, RigidError};
use crate::poly::cubic_real_roots;

/// The six coefficients of `F` in an arbitrary frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RawParams {
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

/// Coefficients in the normal frame `a4 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RigidParams {
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// A rotation angle reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RotationAngle(f64);

impl RotationAngle {
    pub fn new(phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(RigidError::InvalidInput(format!("rotation angle {phi}")));
        }
        let mut r = phi.rem_euclid(TAU);
        if r >= TAU {
            r = 0.0;
        }
        Ok(Self(r))
    }

    pub const ZERO: RotationAngle = RotationAngle(0.0);

    pub fn radians(self) -> f64 {
        self.0
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(RigidError::InvalidInput(format!("non-finite coefficient {v}")));
    }
    Ok(())
}

impl RawParams {
    pub fn new(b1: f64, b2: f64, a1: f64, a2: f64, a3: f64, a4: f64) -> Result<Self> {
        check_finite(&[b1, b2, a1, a2, a3, a4])?;
        Ok(Self { b1, b2, a1, a2, a3, a4 })
    }

    pub fn is_finite(&self) -> bool {
        check_finite(&self.as_array()).is_ok()
    }

    /// `[b1, b2, a1, a2, a3, a4]`
    pub fn as_array(&self) -> [f64; 6] {
        [self.b1, self.b2, self.a1, self.a2, self.a3, self.a4]
    }

    /// Max-norm of the six coefficients.
    pub fn max_norm(&self) -> f64 {
        self.as_array().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl RigidParams {
    pub fn new(b1: f64, b2: f64, a1: f64, a2: f64, a3: f64) -> Result<Self> {
        check_finite(&[b1, b2, a1, a2, a3])?;
        Ok(Self { b1, b2, a1, a2, a3 })
    }

    /// `[b1, b2, a1, a2, a3]`
    pub fn as_array(&self) -> [f64; 5] {
        [self.b1, self.b2, self.a1, self.a2, self.a3]
    }

    pub fn to_raw(self) -> RawParams {
        RawParams {
            b1: self.b1,
            b2: self.b2,
            a1: self.a1,
            a2: self.a2,
            a3: self.a3,
            a4: 0.0,
        }
    }

    /// Riccati case `a1 = a2 = a3 = 0`; the sphere analysis refuses it.
    pub fn is_degenerate(&self) -> bool {
        self.a1 == 0.0 && self.a2 == 0.0 && self.a3 == 0.0
    }

    pub fn max_norm(&self) -> f64 {
        self.as_array().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max(|a1|, |a2|, |a3|)`
    pub fn cubic_norm(&self) -> f64 {
        self.a1.abs().max(self.a2.abs()).max(self.a3.abs())
    }

    pub fn linear_norm(&self) -> f64 {
        self.b1.abs().max(self.b2.abs())
    }
}

impl From<RigidParams> for RawParams {
    fn from(p: RigidParams) -> Self {
        p.to_raw()
    }
}

impl TryFrom<RawParams> for RigidParams {
    type Error = RigidError;

    fn try_from(p: RawParams) -> Result<Self> {
        if p.a4 != 0.0 {
            return Err(RigidError::InvalidInput(format!(
                "a4 = {} is not in the normal frame; normalize first",
                p.a4
            )));
        }
        RigidParams::new(p.b1, p.b2, p.a1, p.a2, p.a3)
    }
}

/// `F(x, y)`
pub fn eval_f(p: &RawParams, x: f64, y: f64) -> f64 {
    let x2 = x * x;
    p.b1 * x
        + p.b2 * y
        + x * (p.a1 * x2 + p.a2 * x * y + p.a3 * y * y)
        + p.a4 * y * y * y
}

/// The planar field `(-y + x F, x + y F)`.
pub fn eval_planar_field(p: &RawParams, x: f64, y: f64) -> (f64, f64) {
    let f = eval_f(p, x, y);
    (-y + x * f, x + y * f)
}

// Homogeneous polynomials in (c, s), coefficients ordered c^d, c^{d-1} s, ..., s^d.
fn mul_linear(lin: [f64; 2], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; q.len() + 1];
    for (k, &qk) in q.iter().enumerate() {
        out[k] += lin[0] * qk;
        out[k + 1] += lin[1] * qk;
    }
    out
}

/// Coefficients of `F` in the frame rotated by `phi`.
///
/// The new angular variable `Θ` satisfies `θ = Θ + φ`, so the rotated Abel
/// coefficients obey `B'(Θ) = B(Θ + φ)` and `A'(Θ) = A(Θ + φ)`.
pub fn rotate_frame(p: &RawParams, phi: RotationAngle) -> RawParams {
    let (sp, cp) = phi.radians().sin_cos();
    // cos(Θ+φ) = cφ c - sφ s, sin(Θ+φ) = sφ c + cφ s
    let cos_form = [cp, -sp];
    let sin_form = [sp, cp];

    let b1 = p.b1 * cp + p.b2 * sp;
    let b2 = -p.b1 * sp + p.b2 * cp;

    let c2 = mul_linear(cos_form, &cos_form);
    let c3 = mul_linear(cos_form, &c2);
    let c2s = mul_linear(sin_form, &c2);
    let s2 = mul_linear(sin_form, &sin_form);
    let cs2 = mul_linear(cos_form, &s2);
    let s3 = mul_linear(sin_form, &s2);

    let mut a = [0.0; 4];
    for (k, slot) in a.iter_mut().enumerate() {
        *slot = p.a1 * c3[k] + p.a2 * c2s[k] + p.a3 * cs2[k] + p.a4 * s3[k];
    }
    RawParams {
        b1,
        b2,
        a1: a[0],
        a2: a[1],
        a3: a[2],
        a4: a[3],
    }
}

fn eval_a(p: &RawParams, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    c * c * (p.a1 * c + p.a2 * s) + s * s * (p.a3 * c + p.a4 * s)
}

fn eval_a_derivative(p: &RawParams, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    // d/dθ of a1 c^3 + a2 c^2 s + a3 c s^2 + a4 s^3
    -3.0 * p.a1 * c * c * s + p.a2 * (c * c * c - 2.0 * c * s * s)
        + p.a3 * (2.0 * c * c * s - s * s * s)
        + 3.0 * p.a4 * s * s * c
}

/// Rotates to the frame with `a4 = 0`.
///
/// In the rotated frame `a4' = A(π/2 + φ)`, so `ψ = π/2 + φ` must be a zero of
/// `A`. Dividing by `cos^3 ψ` leaves the cubic `a1 + a2 t + a3 t^2 + a4 t^3`
/// in `t = tan ψ`, whose leading coefficient is `a4 ≠ 0`. Among its real roots
/// the one of smallest `|t|` is used.
pub fn normalize_a4(p: &RawParams) -> (RigidParams, RotationAngle) {
    if p.a4 == 0.0 {
        return (
            RigidParams {
                b1: p.b1,
                b2: p.b2,
                a1: p.a1,
                a2: p.a2,
                a3: p.a3,
            },
            RotationAngle::ZERO,
        );
    }
    let roots = cubic_real_roots([p.a1, p.a2, p.a3, p.a4]);
    let t = roots
        .into_iter()
        .min_by(|x, y| x.abs().total_cmp(&y.abs()))
        .expect("a cubic with nonzero leading coefficient has a real root");
    let mut psi = t.atan();
    // polish the angle directly on A(ψ) = 0
    for _ in 0..3 {
        let d = eval_a_derivative(p, psi);
        if d == 0.0 {
            break;
        }
        let step = eval_a(p, psi) / d;
        if !step.is_finite() || step.abs() > 1e-3 {
            break;
        }
        psi -= step;
    }
    let phi = RotationAngle::new(psi - FRAC_PI_2).expect("finite angle");
    let r = rotate_frame(p, phi);
    (
        RigidParams {
            b1: r.b1,
            b2: r.b2,
            a1: r.a1,
            a2: r.a2,
            a3: r.a3,
        },
        phi,
    )
}

/// Rotates to the frame with `b1 = 0`, `b2 = sqrt(b1^2 + b2^2) ≥ 0`.
/// `a4` is generally nonzero afterwards.
pub fn normalize_b1(p: &RawParams) -> (RawParams, RotationAngle) {
    if p.b1 == 0.0 {
        return (*p, RotationAngle::ZERO);
    }
    let phi = RotationAngle::new((-p.b1).atan2(p.b2)).expect("finite angle");
    let mut r = rotate_frame(p, phi);
    r.b1 = 0.0;
    (r, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn raw(v: [f64; 6]) -> RawParams {
        RawParams::new(v[0], v[1], v[2], v[3], v[4], v[5]).unwrap()
    }

    #[test]
    fn f_vanishes_at_origin_and_single_terms() {
        let p = raw([1.3, -0.2, 0.7, 2.0, -1.0, 0.5]);
        assert_eq!(eval_f(&p, 0.0, 0.0), 0.0);
        assert_eq!(eval_f(&raw([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]), 2.0, 5.0), 2.0);
        assert_eq!(eval_f(&raw([0.0, 0.0, 0.0, 1.0, 0.0, 0.0]), 2.0, 3.0), 12.0);
    }

    #[test]
    fn planar_field_basics() {
        let p = raw([1.3, -0.2, 0.7, 2.0, -1.0, 0.5]);
        assert_eq!(eval_planar_field(&p, 0.0, 0.0), (0.0, 0.0));
        assert_eq!(
            eval_planar_field(&RawParams::default(), 0.3, -1.2),
            (1.2, 0.3)
        );
    }

    #[test]
    fn rejects_non_finite() {
        assert!(RawParams::new(f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(RigidParams::new(0.0, 0.0, f64::INFINITY, 0.0, 0.0).is_err());
        assert!(RotationAngle::new(f64::NAN).is_err());
    }

    #[test]
    fn angle_reduction() {
        assert_eq!(RotationAngle::new(-FRAC_PI_2).unwrap().radians(), 1.5 * PI);
        assert_eq!(RotationAngle::new(TAU).unwrap().radians(), 0.0);
        let tiny = RotationAngle::new(-1e-300).unwrap().radians();
        assert!((0.0..TAU).contains(&tiny));
    }

    #[test]
    fn identity_and_quarter_turn() {
        let p = raw([1.3, -0.2, 0.7, 2.0, -1.0, 0.5]);
        assert_eq!(rotate_frame(&p, RotationAngle::ZERO), p);
        let q = rotate_frame(
            &raw([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            RotationAngle::new(FRAC_PI_2).unwrap(),
        );
        assert!(q.b1.abs() < 1e-15);
        assert!((q.b2 + 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalize_a4_pure_y_cubed() {
        let p = raw([0.4, -0.9, 0.0, 0.0, 0.0, 1.0]);
        let (n, phi) = normalize_a4(&p);
        assert!((phi.radians() - 1.5 * PI).abs() < 1e-15);
        let full = rotate_frame(&p, phi);
        assert!(full.a4.abs() <= 1e-12);
        // sin^3(Θ - π/2) = -cos^3 Θ
        assert!((n.a1 + 1.0).abs() < 1e-12);
        assert!(n.a2.abs() < 1e-12 && n.a3.abs() < 1e-12);
    }

    #[test]
    fn normalize_a4_already_normal() {
        let p = raw([0.4, -0.9, 1.0, 2.0, 3.0, 0.0]);
        let (n, phi) = normalize_a4(&p);
        assert_eq!(phi, RotationAngle::ZERO);
        assert_eq!(n.to_raw(), p);
    }

    #[test]
    fn normalize_b1_quarter_turn() {
        let (n, phi) = normalize_b1(&raw([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        assert!((phi.radians() - 1.5 * PI).abs() < 1e-15);
        assert_eq!(n.b1, 0.0);
        assert!((n.b2.abs() - 1.0).abs() < 1e-15);
        let p = raw([0.0, 2.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(normalize_b1(&p), (p, RotationAngle::ZERO));
    }

    #[test]
    fn try_from_requires_normal_frame() {
        assert!(RigidParams::try_from(raw([0.0, 0.0, 1.0, 0.0, 0.0, 0.1])).is_err());
        assert!(RigidParams::try_from(raw([0.0, 0.0, 1.0, 0.0, 0.0, 0.0])).is_ok());
    }
}
