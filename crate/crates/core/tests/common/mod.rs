#![allow(dead_code)]

pub mod exact;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigid_core::{RawParams, RigidParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    rng.gen_range(-scale..scale)
}

pub fn random_rigid(rng: &mut ChaCha8Rng, scale: f64) -> RigidParams {
    let mut v = [0.0; 5];
    v.iter_mut().for_each(|x| *x = uniform(rng, scale));
    RigidParams::new(v[0], v[1], v[2], v[3], v[4]).unwrap()
}

pub fn random_raw(rng: &mut ChaCha8Rng, scale: f64) -> RawParams {
    let mut v = [0.0; 6];
    v.iter_mut().for_each(|x| *x = uniform(rng, scale));
    RawParams::new(v[0], v[1], v[2], v[3], v[4], v[5]).unwrap()
}

pub fn homogeneous(rng: &mut ChaCha8Rng, scale: f64) -> RigidParams {
    let p = random_rigid(rng, scale);
    RigidParams { b1: 0.0, b2: 0.0, ..p }
}

/// A point of the reversible stratum: `a` spans the common kernel of the two
/// linear conditions in `a` for the given `b`.
pub fn reversible(rng: &mut ChaCha8Rng, scale: f64) -> RigidParams {
    let b1 = uniform(rng, scale);
    let b2 = uniform(rng, scale);
    let row1 = [3.0 * b2 * (b2 * b2 - b1 * b1), b1 * b1 * b1 - 3.0 * b1 * b2 * b2, 2.0 * b1 * b1 * b2];
    let row2 = [0.0, 2.0 * b1 * b2 * b2, b2 * b2 * b2 - 3.0 * b1 * b1 * b2];
    let n = [
        row1[1] * row2[2] - row1[2] * row2[1],
        row1[2] * row2[0] - row1[0] * row2[2],
        row1[0] * row2[1] - row1[1] * row2[0],
    ];
    let norm = n.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let t = uniform(rng, scale) / norm;
    RigidParams::new(b1, b2, t * n[0], t * n[1], t * n[2]).unwrap()
}

/// `b1 = 0` and `a1 a3 ≥ 0`.
pub fn no_cycle_frame(rng: &mut ChaCha8Rng, scale: f64) -> RigidParams {
    let b2 = uniform(rng, scale);
    let a1 = uniform(rng, scale);
    let a3 = uniform(rng, scale).abs() * a1.signum();
    RigidParams::new(0.0, b2, a1, uniform(rng, scale), a3).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
