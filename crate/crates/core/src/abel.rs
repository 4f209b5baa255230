//! The Abel form of the family in polar coordinates.
//!
//! With `x = r cos θ`, `y = r sin θ` every member satisfies `θ' = 1` and
//! `r' = B(θ) r^2 + A(θ) r^4` where `B` and `A` are the degree-one and
//! degree-three parts of `F` evaluated on the unit circle.

use serde::{Deserialize, Serialize};

use crate::family::{RawParams, RigidParams};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AbelCoeffs {
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl AbelCoeffs {
    /// `B(θ) = b1 cos θ + b2 sin θ`
    pub fn eval_b(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.b1 * c + self.b2 * s
    }

    /// `A(θ) = a1 cos^3 θ + a2 cos^2 θ sin θ + a3 cos θ sin^2 θ + a4 sin^3 θ`
    pub fn eval_a(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        c * c * (self.a1 * c + self.a2 * s) + s * s * (self.a3 * c + self.a4 * s)
    }

    /// `(B(θ), A(θ))` sharing one `sin_cos`.
    pub fn eval_both(&self, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        (
            self.b1 * c + self.b2 * s,
            c * c * (self.a1 * c + self.a2 * s) + s * s * (self.a3 * c + self.a4 * s),
        )
    }
}

pub fn abel_coeffs(p: &RawParams) -> AbelCoeffs {
    AbelCoeffs {
        b1: p.b1,
        b2: p.b2,
        a1: p.a1,
        a2: p.a2,
        a3: p.a3,
        a4: p.a4,
    }
}

impl From<&RawParams> for AbelCoeffs {
    fn from(p: &RawParams) -> Self {
        abel_coeffs(p)
    }
}

impl From<&RigidParams> for AbelCoeffs {
    fn from(p: &RigidParams) -> Self {
        abel_coeffs(&p.to_raw())
    }
}

/// `B(θ) r^2 + A(θ) r^4`
pub fn eval_abel_rhs(c: &AbelCoeffs, theta: f64, r: f64) -> f64 {
    let (b, a) = c.eval_both(theta);
    let r2 = r * r;
    r2 * (b + a * r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn only(f: impl FnOnce(&mut AbelCoeffs)) -> AbelCoeffs {
        let mut c = AbelCoeffs::default();
        f(&mut c);
        c
    }

    #[test]
    fn zero_coefficients() {
        let c = AbelCoeffs::default();
        assert_eq!(c.eval_b(1.2), 0.0);
        assert_eq!(c.eval_a(-0.4), 0.0);
    }

    #[test]
    fn single_b2() {
        let c = only(|c| c.b2 = 1.0);
        assert_eq!(c.eval_b(FRAC_PI_2), 1.0);
        assert_eq!(c.eval_b(0.0), 0.0);
        assert_eq!(c.eval_a(0.7), 0.0);
    }

    #[test]
    fn single_a1() {
        let c = only(|c| c.a1 = 1.0);
        assert_eq!(c.eval_a(0.0), 1.0);
        assert!(c.eval_a(FRAC_PI_2).abs() < 1e-16);
        assert_eq!(c.eval_a(PI), -1.0);
    }

    #[test]
    fn rhs_values() {
        let any = AbelCoeffs { b1: 0.3, b2: -1.0, a1: 2.0, a2: 0.1, a3: 0.0, a4: 4.0 };
        assert_eq!(eval_abel_rhs(&any, 0.9, 0.0), 0.0);
        assert_eq!(eval_abel_rhs(&only(|c| c.b1 = 1.0), 0.0, 2.0), 4.0);
        let both = only(|c| {
            c.a1 = 1.0;
            c.b1 = 1.0
        });
        assert_eq!(eval_abel_rhs(&both, 0.0, 2.0), 20.0);
    }
}
