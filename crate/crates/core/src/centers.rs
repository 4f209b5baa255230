//! Center classification at the origin.
//!
//! The origin is a center exactly when the first two Lyapunov constants
//! vanish, which splits into the homogeneous stratum `b1 = b2 = 0` (with an
//! explicit first integral) and a reversible stratum (symmetric about the line
//! `b1 x + b2 y = 0`).
//!
//! The Lyapunov constants and the Hopf example are written over [`Scalar`] so
//! that the same formulas can be evaluated in exact arithmetic that carries
//! `π` symbolically; `f64` is the everyday instance.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Result, RigidError};
use crate::family::{normalize_b1, RawParams, RigidParams};

/// Ring operations plus the handful of constants the closed forms need.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;
    fn pi() -> Self;
    fn inv_pi() -> Self;
    /// Exact division by a nonzero integer.
    fn div_int(self, d: i64) -> Self;
}

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn pi() -> Self {
        PI
    }
    fn inv_pi() -> Self {
        1.0 / PI
    }
    fn div_int(self, d: i64) -> Self {
        self / d as f64
    }
}

/// The five normal-frame coefficients over an arbitrary [`Scalar`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients<T> {
    pub b1: T,
    pub b2: T,
    pub a1: T,
    pub a2: T,
    pub a3: T,
}

impl From<&RigidParams> for Coefficients<f64> {
    fn from(p: &RigidParams) -> Self {
        Coefficients { b1: p.b1, b2: p.b2, a1: p.a1, a2: p.a2, a3: p.a3 }
    }
}

/// `(π/2)(a2 b1 - 3 a1 b2 - a3 b2)`
pub fn lyapunov_l2_generic<T: Scalar>(p: &Coefficients<T>) -> T {
    let k = T::from_int;
    (T::pi() * (p.a2 * p.b1 - k(3) * p.a1 * p.b2 - p.a3 * p.b2)).div_int(2)
}

/// `-(π/2)(-a2 b1^3 + 3 a1 b1^2 b2 + 3 a3 b1^2 b2 - 9 a2 b1 b2^2 + 23 a1 b2^3 + 7 a3 b2^3)`
pub fn lyapunov_l3_generic<T: Scalar>(p: &Coefficients<T>) -> T {
    let k = T::from_int;
    let (b1, b2) = (p.b1, p.b2);
    let b1s = b1 * b1;
    let b2s = b2 * b2;
    let inner = -(p.a2 * b1s * b1) + k(3) * p.a1 * b1s * b2 + k(3) * p.a3 * b1s * b2
        - k(9) * p.a2 * b1 * b2s
        + k(23) * p.a1 * b2s * b2
        + k(7) * p.a3 * b2s * b2;
    -(T::pi() * inner).div_int(2)
}

/// The Hopf example with `l2 = ε`, `l3 = 1`:
/// `b1 = 5`, `b2 = 1`, `a1 = (1 + 120 a2 π - 82 ε)/(74 π)`,
/// `a3 = (-3 + 10 a2 π + 98 ε)/(74 π)`.
pub fn hopf_example_generic<T: Scalar>(eps: T, a2: T) -> Coefficients<T> {
    let k = T::from_int;
    let a1 = ((k(1) - k(82) * eps) * T::inv_pi() + k(120) * a2).div_int(74);
    let a3 = ((k(98) * eps - k(3)) * T::inv_pi() + k(10) * a2).div_int(74);
    Coefficients { b1: k(5), b2: k(1), a1, a2, a3 }
}

pub fn lyapunov_l2(p: &RigidParams) -> f64 {
    lyapunov_l2_generic(&Coefficients::from(p))
}

pub fn lyapunov_l3(p: &RigidParams) -> f64 {
    lyapunov_l3_generic(&Coefficients::from(p))
}

pub fn build_hopf_example(eps: f64, a2: f64) -> RigidParams {
    let c = hopf_example_generic(eps, a2);
    RigidParams { b1: c.b1, b2: c.b2, a1: c.a1, a2: c.a2, a3: c.a3 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum CenterClass {
    NotCenter { l2: f64, l3: f64 },
    /// `b1 = b2 = 0`
    HomogeneousCenter,
    /// Reversible with respect to the line `b1 x + b2 y = 0`; `axis` is `(b1, b2)`.
    ReversibleCenter { axis: (f64, f64) },
}

impl CenterClass {
    pub fn is_center(&self) -> bool {
        !matches!(self, CenterClass::NotCenter { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            CenterClass::NotCenter { .. } => "NotCenter",
            CenterClass::HomogeneousCenter => "HomogeneousCenter",
            CenterClass::ReversibleCenter { .. } => "ReversibleCenter",
        }
    }
}

/// Residuals of the reversible-center conditions:
/// `3 a1 b2 (b2^2 - b1^2) + b1 (a2 b1^2 + 2 a3 b1 b2 - 3 a2 b2^2)` and
/// `b2 (-3 a3 b1^2 + 2 a2 b1 b2 + a3 b2^2)`.
pub fn reversibility_residuals(p: &RigidParams) -> (f64, f64) {
    let RigidParams { b1, b2, a1, a2, a3 } = *p;
    let r1 = 3.0 * a1 * b2 * (b2 * b2 - b1 * b1) + b1 * (a2 * b1 * b1 + 2.0 * a3 * b1 * b2 - 3.0 * a2 * b2 * b2);
    let r2 = b2 * (-3.0 * a3 * b1 * b1 + 2.0 * a2 * b1 * b2 + a3 * b2 * b2);
    (r1, r2)
}

/// Both conditions are homogeneous of degree one in `a` and three in `b`,
/// so the zero test is scaled by `|p|^3 |a|`.
pub fn reversibility_tolerance(p: &RigidParams) -> f64 {
    1e-12 * p.max_norm().powi(3) * p.cubic_norm()
}

pub fn center_condition(p: &RigidParams) -> CenterClass {
    if p.b1 == 0.0 && p.b2 == 0.0 {
        return CenterClass::HomogeneousCenter;
    }
    let (r1, r2) = reversibility_residuals(p);
    let tol = reversibility_tolerance(p);
    if r1.abs() <= tol && r2.abs() <= tol {
        CenterClass::ReversibleCenter { axis: (p.b1, p.b2) }
    } else {
        CenterClass::NotCenter { l2: lyapunov_l2(p), l3: lyapunov_l3(p) }
    }
}

/// First integral of the homogeneous stratum,
/// `H = (-1 + a2 x^3 - 3 a1 x^2 y - (2 a1 + a3) y^3) / (3 (x^2 + y^2)^{3/2})`.
pub fn first_integral_planar(p: &RigidParams, x: f64, y: f64) -> Result<f64> {
    if p.b1 != 0.0 || p.b2 != 0.0 {
        return Err(RigidError::DomainError("first integral needs b1 = b2 = 0".into()));
    }
    let rho2 = x * x + y * y;
    if rho2 == 0.0 {
        return Err(RigidError::DomainError("first integral is undefined at the origin".into()));
    }
    let num = -1.0 + p.a2 * x * x * x - 3.0 * p.a1 * x * x * y - (2.0 * p.a1 + p.a3) * y * y * y;
    Ok(num / (3.0 * rho2 * rho2.sqrt()))
}

/// One-sided certificate: `true` means the planar system provably has no
/// limit cycles (`a1 a3 ≥ 0` in the frame `b1 = 0`); `false` is inconclusive.
pub fn check_no_limit_cycles(p: &RawParams) -> bool {
    let (q, _) = normalize_b1(p);
    q.a1 * q.a3 >= 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(b1: f64, b2: f64, a1: f64, a2: f64, a3: f64) -> RigidParams {
        RigidParams::new(b1, b2, a1, a2, a3).unwrap()
    }

    #[test]
    fn homogeneous_lyapunov_vanish() {
        let p = rp(0.0, 0.0, 1.3, -2.0, 0.7);
        assert_eq!(lyapunov_l2(&p), 0.0);
        assert_eq!(lyapunov_l3(&p), 0.0);
        assert_eq!(center_condition(&p), CenterClass::HomogeneousCenter);
    }

    #[test]
    fn single_term_lyapunov() {
        let p = rp(1.0, 0.0, 0.0, 1.0, 0.0);
        assert!((lyapunov_l2(&p) - PI / 2.0).abs() < 1e-15);
        assert!((lyapunov_l3(&p) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn hopf_example_coefficients() {
        let p = build_hopf_example(0.0, 0.0);
        assert_eq!((p.b1, p.b2, p.a2), (5.0, 1.0, 0.0));
        assert!((p.a1 - 1.0 / (74.0 * PI)).abs() < 1e-17);
        assert!((p.a3 + 3.0 / (74.0 * PI)).abs() < 1e-17);
        let q = build_hopf_example(-0.05, 0.0);
        assert!((lyapunov_l2(&q) + 0.05).abs() < 1e-14);
        assert!((lyapunov_l3(&q) - 1.0).abs() < 1e-13);
        match center_condition(&q) {
            CenterClass::NotCenter { l2, l3 } => {
                assert!((l2 + 0.05).abs() < 1e-14 && (l3 - 1.0).abs() < 1e-13)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn remark_reversible_about_x_axis() {
        // b2 = a2 = 0: symmetric about x = 0
        let p = rp(3.0, 0.0, 1.0, 0.0, 2.0);
        assert_eq!(center_condition(&p), CenterClass::ReversibleCenter { axis: (3.0, 0.0) });
        // b1 = a1 = a3 = 0: symmetric about y = 0
        let q = rp(0.0, 2.0, 0.0, 1.5, 0.0);
        assert!(matches!(center_condition(&q), CenterClass::ReversibleCenter { .. }));
    }

    #[test]
    fn first_integral_values_and_domain() {
        assert!((first_integral_planar(&rp(0.0, 0.0, 0.0, 0.0, 0.0), 1.0, 0.0).unwrap() + 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(first_integral_planar(&rp(0.0, 0.0, 0.0, 1.0, 0.0), 1.0, 0.0).unwrap(), 0.0);
        assert!(first_integral_planar(&rp(0.0, 0.0, 1.0, 0.0, 0.0), 0.0, 0.0).is_err());
        assert!(first_integral_planar(&rp(1.0, 0.0, 1.0, 0.0, 0.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn no_limit_cycle_certificate() {
        let yes = RawParams::new(0.0, 0.7, 1.0, -3.0, 2.0, 0.4).unwrap();
        assert!(check_no_limit_cycles(&yes));
        let no = RawParams::new(0.0, 0.7, 1.0, 0.0, -1.0, 0.0).unwrap();
        assert!(!check_no_limit_cycles(&no));
    }
}
