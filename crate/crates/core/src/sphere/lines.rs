//! Invariant straight lines.
//!
//! For `b2 ≠ 0` the candidate line is `-b2^3 x + (a1 + b1 b2^2) y + b2^2 = 0`.
//! It is invariant when `c1 P + c2 Q` is divisible by `c1 x + c2 y + c3`,
//! which is checked by exact-degree polynomial division in `x`.

use serde::{Deserialize, Serialize};

use crate::family::RigidParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineResult {
    pub present: bool,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Total degree of the cofactor `K`.
    pub cofactor_degree: usize,
    /// Largest coefficient of the division remainder.
    pub residual: f64,
}

impl LineResult {
    /// Chart `U2` coordinate `u = x/y` of the line's point at infinity.
    pub fn infinite_direction(&self) -> Option<f64> {
        (self.c1 != 0.0).then(|| -self.c2 / self.c1)
    }
}

/// Residuals of the two existence conditions,
/// `a2 b2^3 + 2 a1 (a1 + b1 b2^2)` and `a3 b2^6 - a1 (a1 + b1 b2^2)^2`.
pub fn invariant_line_conditions(p: &RigidParams) -> (f64, f64) {
    let RigidParams { b1, b2, a1, a2, a3 } = *p;
    let k = a1 + b1 * b2 * b2;
    let b2c = b2 * b2 * b2;
    (a2 * b2c + 2.0 * a1 * k, a3 * b2c * b2c - a1 * k * k)
}

/// Bivariate polynomial, `c[i][j]` multiplying `x^i y^j`.
type Poly = Vec<Vec<f64>>;

fn zero(nx: usize, ny: usize) -> Poly {
    vec![vec![0.0; ny]; nx]
}

/// `c1 P + c2 Q` with `P = -y + x F`, `Q = x + y F`.
fn combination(p: &RigidParams, c1: f64, c2: f64) -> Poly {
    // F = b1 x + b2 y + a1 x^3 + a2 x^2 y + a3 x y^2
    let mut f = zero(4, 4);
    f[1][0] = p.b1;
    f[0][1] = p.b2;
    f[3][0] = p.a1;
    f[2][1] = p.a2;
    f[1][2] = p.a3;
    let mut n = zero(5, 5);
    n[0][1] -= c1;
    n[1][0] += c2;
    for i in 0..4 {
        for j in 0..4 {
            n[i + 1][j] += c1 * f[i][j];
            n[i][j + 1] += c2 * f[i][j];
        }
    }
    n
}

/// Divides `n` by `c1 x + (c2 y + c3)`, returning quotient and remainder
/// (the latter a polynomial in `y`).
fn divide(n: &Poly, c1: f64, c2: f64, c3: f64) -> (Poly, Vec<f64>) {
    let nx = n.len();
    let ny = n[0].len();
    let mut rem = n.clone();
    let mut q = zero(nx - 1, ny);
    for i in (1..nx).rev() {
        for j in 0..ny {
            let coef = rem[i][j] / c1;
            if coef == 0.0 {
                continue;
            }
            q[i - 1][j] = coef;
            rem[i][j] = 0.0;
            rem[i - 1][j] -= coef * c3;
            if j + 1 < ny {
                rem[i - 1][j + 1] -= coef * c2;
            }
        }
    }
    (q, rem[0].clone())
}

fn total_degree(q: &Poly, tol: f64) -> usize {
    let mut d = 0;
    for (i, row) in q.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if c.abs() > tol {
                d = d.max(i + j);
            }
        }
    }
    d
}

pub fn invariant_line(p: &RigidParams) -> LineResult {
    let RigidParams { b1, b2, a1, .. } = *p;
    let (c1, c2, c3) = (-b2 * b2 * b2, a1 + b1 * b2 * b2, b2 * b2);
    let absent = LineResult { present: false, c1, c2, c3, cofactor_degree: 0, residual: f64::NAN };
    if b2 == 0.0 {
        return absent;
    }
    let (q, rem) = divide(&combination(p, c1, c2), c1, c2, c3);
    let residual = rem.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cnorm = c1.abs().max(c2.abs()).max(c3.abs());
    let cofactor_degree = total_degree(&q, 1e-14 * p.max_norm().max(1.0));

    // the conditions are weighted-homogeneous with weight 1 on b and 3 on a
    let m = p.linear_norm().max(p.cubic_norm().cbrt());
    let (r1, r2) = invariant_line_conditions(p);
    let conditions = r1.abs() <= 1e-12 * m.powi(6) && r2.abs() <= 1e-12 * m.powi(9);
    let divisible = residual <= 1e-10 * p.max_norm() * cnorm;
    LineResult {
        present: conditions && divisible && c3 != 0.0,
        c1,
        c2,
        c3,
        cofactor_degree,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_root_example() {
        let p = RigidParams::new(0.0, 1.0, 1.0, -2.0, 1.0).unwrap();
        let l = invariant_line(&p);
        assert!(l.present);
        assert_eq!((l.c1, l.c2, l.c3), (-1.0, 1.0, 1.0));
        assert_eq!(l.residual, 0.0);
        assert_eq!(l.cofactor_degree, 3);
        assert_eq!(l.infinite_direction(), Some(1.0));
    }

    #[test]
    fn homogeneous_has_none() {
        let p = RigidParams::new(0.0, 0.0, 1.0, 0.3, 0.2).unwrap();
        assert!(!invariant_line(&p).present);
    }

    #[test]
    fn generic_has_none() {
        let p = RigidParams::new(0.2, 1.0, 1.0, 0.0, 1.0).unwrap();
        let l = invariant_line(&p);
        assert!(!l.present);
        assert!(l.residual > 1e-3);
    }
}
