//! Real roots of low-degree polynomials.
//!
//! Coefficients are given lowest degree first: `[c0, c1, c2, c3]` is
//! `c0 + c1 t + c2 t^2 + c3 t^3`.

use std::f64::consts::PI;

/// Evaluates `c0 + c1 t + c2 t^2 + c3 t^3` by Horner's rule.
pub fn eval_cubic(c: [f64; 4], t: f64) -> f64 {
    ((c[3] * t + c[2]) * t + c[1]) * t + c[0]
}

fn eval_cubic_derivative(c: [f64; 4], t: f64) -> f64 {
    (3.0 * c[3] * t + 2.0 * c[2]) * t + c[1]
}

/// Real roots of `c0 + c1 t + c2 t^2`, ascending. Repeated roots appear once.
///
/// A vanishing leading coefficient degrades to the linear case; the zero
/// polynomial has no isolated roots and yields an empty list.
pub fn quadratic_real_roots(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    if c2 == 0.0 {
        if c1 == 0.0 {
            return Vec::new();
        }
        return vec![-c0 / c1];
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-c1 / (2.0 * c2)];
    }
    let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
    // c1 == 0 makes signum() positive, q cannot vanish since disc > 0
    let mut roots = vec![q / c2, c0 / q];
    roots.sort_by(f64::total_cmp);
    roots
}

/// Real roots of a polynomial of degree at most three, ascending, each polished
/// by Newton's method on the original coefficients. Roots closer than a few
/// ulps are merged.
pub fn cubic_real_roots(c: [f64; 4]) -> Vec<f64> {
    if c[3] == 0.0 {
        return quadratic_real_roots(c[0], c[1], c[2]);
    }
    let a = c[2] / c[3];
    let b = c[1] / c[3];
    let d = c[0] / c[3];
    // t = s - a/3 gives s^3 + p s + q
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;

    let mut roots: Vec<f64> = if p == 0.0 && q == 0.0 {
        vec![0.0]
    } else {
        let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
        if disc > 0.0 {
            let u = (-q / 2.0 - q.signum() * disc.sqrt()).cbrt();
            let s = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
            vec![s]
        } else {
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = ((3.0 * q) / (p * m)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            (0..3)
                .map(|k| m * (theta - 2.0 * PI * k as f64 / 3.0).cos())
                .collect()
        }
    }
    .into_iter()
    .map(|s| s - shift)
    .collect();

    for r in roots.iter_mut() {
        *r = newton_polish(c, *r);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0));
    roots
}

fn newton_polish(c: [f64; 4], mut t: f64) -> f64 {
    let mut best = eval_cubic(c, t).abs();
    for _ in 0..8 {
        if best <= f64::EPSILON * coefficient_scale(c, t) * 0.01 {
            break;
        }
        let df = eval_cubic_derivative(c, t);
        if df == 0.0 {
            break;
        }
        let next = t - eval_cubic(c, t) / df;
        let val = eval_cubic(c, next).abs();
        if !(val < best) {
            break;
        }
        best = val;
        t = next;
    }
    t
}

fn coefficient_scale(c: [f64; 4], t: f64) -> f64 {
    let at = t.abs();
    c[0].abs() + c[1].abs() * at + c[2].abs() * at * at + c[3].abs() * at * at * at
}
