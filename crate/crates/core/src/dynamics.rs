//! Return map of the Abel equation and limit-cycle detection.
//!
//! Because `θ' = 1`, periodic orbits of the planar system are exactly the
//! positive fixed points of the return map `r0 ↦ r(2π)` of
//! `r' = B(θ) r^2 + A(θ) r^4`. The quartic term makes finite-`θ` blow-up
//! common, so escape is an ordinary outcome here, not an error.
//!
//! Large radii are integrated in the variable `w = r^{-3}`, for which the
//! equation reads `w' = -3 (A + B w^{2/3})` and stays smooth through the
//! blow-up. The switch happens at step boundaries (`r > 10` going out,
//! `r < 5` coming back), so no interpolated state is ever fed back in.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abel::{abel_coeffs, AbelCoeffs};
use crate::error::{Result, RigidError};
use crate::family::RawParams;
use crate::ode::{integrate_plain, DenseStep, Flow, IntegratorSettings, StepControl};

const R_SWITCH_OUT: f64 = 10.0;
const R_SWITCH_BACK: f64 = 5.0;
/// Orbits blow up along critical directions of `A`, where the `w^{2/3}` term
/// stalls step control just short of `w = 0`. A stall beyond
/// `r = min(r_escape, R_STALL)` counts as escape.
const R_STALL: f64 = 1e4;

/// Residual `|R(r) - r|` guaranteed at reported cycles.
pub const FIXED_POINT_TOL: f64 = 1e-10;
/// Fixed points with `|R'(r*) - 1|` below this are treated as members of an annulus.
pub const NON_HYPERBOLIC_TOL: f64 = 1e-6;
const GRID_FIXED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AbelOutcome {
    /// `r(θ1)`
    Value(f64),
    /// First `θ` at which the solution exceeded the escape radius.
    Escape(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnMapResult {
    pub outcome: AbelOutcome,
    /// `dr(θ1)/dr0`, present for [`return_map`] when the solution returns.
    pub derivative: Option<f64>,
}

impl ReturnMapResult {
    pub fn value(&self) -> Option<f64> {
        match self.outcome {
            AbelOutcome::Value(r) => Some(r),
            AbelOutcome::Escape(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitCycle {
    pub r_star: f64,
    pub multiplier: f64,
}

impl LimitCycle {
    /// Multiplier below one: attracting in forward `θ`.
    pub fn is_stable(&self) -> bool {
        self.multiplier < 1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCycleSet {
    /// Isolated hyperbolic fixed points, ascending in `r_star`.
    pub cycles: Vec<LimitCycle>,
    /// Radii (grid points or bisection results) where the return map is the
    /// identity to within the non-hyperbolic threshold.
    pub non_hyperbolic: Vec<f64>,
    /// Largest grid radius whose orbit returned without escaping.
    pub r_max_searched: f64,
    /// Smallest grid radius that escaped, if any.
    pub first_escape: Option<f64>,
    pub grid_n: usize,
}

impl LimitCycleSet {
    pub fn escape_limited(&self) -> bool {
        self.first_escape.is_some()
    }
}

#[derive(Debug, Clone, Copy)]
enum Regime {
    Radial([f64; 2]),
    Inverse([f64; 2]),
}

fn radial_rhs(c: &AbelCoeffs) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
    move |theta, y| {
        let (b, a) = c.eval_both(theta);
        let r = y[0];
        let r2 = r * r;
        [r2 * (b + a * r2), (2.0 * b * r + 4.0 * a * r2 * r) * y[1]]
    }
}

fn inverse_rhs(c: &AbelCoeffs) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
    move |theta, y| {
        let (b, a) = c.eval_both(theta);
        let cr = y[0].cbrt();
        let inv = if cr == 0.0 { 0.0 } else { 1.0 / cr };
        [-3.0 * (a + b * cr * cr), -2.0 * b * inv * y[1]]
    }
}

fn to_radial(w: [f64; 2]) -> [f64; 2] {
    let r = 1.0 / w[0].cbrt();
    [r, -w[1] * r.powi(4) / 3.0]
}

fn to_inverse(y: [f64; 2]) -> [f64; 2] {
    let r = y[0];
    [1.0 / (r * r * r), -3.0 * y[1] / r.powi(4)]
}

fn check_inputs(r0: f64, theta0: f64, theta1: f64, s: &IntegratorSettings) -> Result<()> {
    s.validate()?;
    if !(r0.is_finite() && theta0.is_finite() && theta1.is_finite()) {
        return Err(RigidError::InvalidInput("non-finite Abel input".into()));
    }
    if r0 < 0.0 {
        return Err(RigidError::InvalidInput(format!("r0 = {r0} must be non-negative")));
    }
    if r0 > s.r_escape {
        return Err(RigidError::InvalidInput(format!(
            "r0 = {r0} exceeds the escape radius {}",
            s.r_escape
        )));
    }
    if !(theta0 < theta1) {
        return Err(RigidError::InvalidInput(format!(
            "theta0 = {theta0} must be below theta1 = {theta1}"
        )));
    }
    Ok(())
}

/// Core driver. `sample_at` is an ascending list of angles in `(theta0, theta1]`
/// at which `r` is recorded into `samples` (truncated at escape).
fn drive(
    c: &AbelCoeffs,
    r0: f64,
    theta0: f64,
    theta1: f64,
    s: &IntegratorSettings,
    sample_at: &[f64],
    samples: &mut Vec<(f64, f64)>,
) -> Result<(AbelOutcome, f64)> {
    let ctl = StepControl::from(s);
    let w_escape = s.r_escape.powi(-3);
    let w_stall = s.r_escape.min(R_STALL).powi(-3);
    let use_inverse = s.r_escape > R_SWITCH_OUT;
    let mut regime = Regime::Radial([r0, 1.0]);
    let mut theta = theta0;
    let mut next_sample = 0usize;

    let record = |step: &DenseStep<2>, radial: bool, upto: f64, next: &mut usize, out: &mut Vec<(f64, f64)>| {
        while *next < sample_at.len() && sample_at[*next] <= upto {
            let t = sample_at[*next];
            let y = step.eval(t);
            let r = if radial { y[0] } else { 1.0 / y[0].cbrt() };
            out.push((t, r));
            *next += 1;
        }
    };

    loop {
        match regime {
            Regime::Radial(y0) => {
                let mut escaped = None;
                let mut switch = false;
                let fin = integrate_plain(radial_rhs(c), theta, y0, theta1, &ctl, |step| {
                    if step.y1[0] > s.r_escape || !step.y1[0].is_finite() {
                        let (te, _) = step.locate(|y| y[0] - s.r_escape, 1e-12 * s.r_escape);
                        record(step, true, te, &mut next_sample, samples);
                        escaped = Some(te);
                        return Flow::Stop;
                    }
                    record(step, true, step.t1, &mut next_sample, samples);
                    if use_inverse && step.y1[0] > R_SWITCH_OUT && step.t1 < theta1 {
                        switch = true;
                        return Flow::Stop;
                    }
                    Flow::Continue
                })?;
                if let Some(te) = escaped {
                    return Ok((AbelOutcome::Escape(te), f64::NAN));
                }
                if switch {
                    theta = fin.t;
                    regime = Regime::Inverse(to_inverse(fin.y));
                    continue;
                }
                return Ok((AbelOutcome::Value(fin.y[0]), fin.y[1]));
            }
            Regime::Inverse(w0) => {
                let mut escaped = None;
                let mut switch = false;
                let mut last = (theta, w0[0]);
                let run = integrate_plain(inverse_rhs(c), theta, w0, theta1, &ctl, |step| {
                    last = (step.t1, step.y1[0]);
                    if step.y1[0] <= w_escape {
                        let (te, _) = step.locate(|y| y[0] - w_escape, 1e-12 * w_escape);
                        record(step, false, te, &mut next_sample, samples);
                        escaped = Some(te);
                        return Flow::Stop;
                    }
                    record(step, false, step.t1, &mut next_sample, samples);
                    if step.y1[0] * R_SWITCH_BACK.powi(3) > 1.0 && step.t1 < theta1 {
                        switch = true;
                        return Flow::Stop;
                    }
                    Flow::Continue
                });
                let fin = match run {
                    Err(RigidError::StepSizeUnderflow { .. }) if last.1 <= w_stall => {
                        return Ok((AbelOutcome::Escape(last.0), f64::NAN));
                    }
                    other => other?,
                };
                if let Some(te) = escaped {
                    return Ok((AbelOutcome::Escape(te), f64::NAN));
                }
                let y = to_radial(fin.y);
                if switch {
                    theta = fin.t;
                    regime = Regime::Radial(y);
                    continue;
                }
                return Ok((AbelOutcome::Value(y[0]), y[1]));
            }
        }
    }
}

/// Integrates the Abel equation over `[theta0, theta1]`.
pub fn integrate_abel(
    c: &AbelCoeffs,
    r0: f64,
    theta0: f64,
    theta1: f64,
    s: &IntegratorSettings,
) -> Result<ReturnMapResult> {
    check_inputs(r0, theta0, theta1, s)?;
    let (outcome, _) = drive(c, r0, theta0, theta1, s, &[], &mut Vec::new())?;
    Ok(ReturnMapResult { outcome, derivative: None })
}

/// Like [`integrate_abel`], also reporting `dr(theta1)/dr0` from the
/// variational equation `v' = (2 B r + 4 A r^3) v`.
pub fn integrate_abel_with_derivative(
    c: &AbelCoeffs,
    r0: f64,
    theta0: f64,
    theta1: f64,
    s: &IntegratorSettings,
) -> Result<ReturnMapResult> {
    check_inputs(r0, theta0, theta1, s)?;
    let (outcome, v) = drive(c, r0, theta0, theta1, s, &[], &mut Vec::new())?;
    let derivative = matches!(outcome, AbelOutcome::Value(_)).then_some(v);
    Ok(ReturnMapResult { outcome, derivative })
}

/// `r0 ↦ r(2π)` together with its derivative.
pub fn return_map(c: &AbelCoeffs, r0: f64, s: &IntegratorSettings) -> Result<ReturnMapResult> {
    integrate_abel_with_derivative(c, r0, 0.0, std::f64::consts::TAU, s)
}

fn bisect_fixed_point(
    c: &AbelCoeffs,
    s: &IntegratorSettings,
    mut lo: f64,
    mut hi: f64,
    mut d_lo: f64,
) -> Result<Option<f64>> {
    let mut best: Option<(f64, f64)> = None;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let Some(r) = return_map(c, mid, s)?.value() else {
            // impossible for a monotone map bracketed by returning orbits
            return Ok(None);
        };
        let d = r - mid;
        if best.map_or(true, |(_, bd)| d.abs() < bd.abs()) {
            best = Some((mid, d));
        }
        // weakly hyperbolic cycles have tiny |d| far from the root, so
        // bisect to the bracket width rather than stop on the residual
        if d == 0.0 || hi - lo <= 1e-14 * hi {
            break;
        }
        if (d > 0.0) == (d_lo > 0.0) {
            lo = mid;
            d_lo = d;
        } else {
            hi = mid;
        }
    }
    Ok(best.filter(|(_, d)| d.abs() <= FIXED_POINT_TOL).map(|(r, _)| r))
}

/// Scans `d(r) = R(r) - r` on `r_k = k r_max / grid_n`, `k = 1..=grid_n`, and
/// bisects every sign change between returning grid points.
///
/// Grid points (and bisection results) where the return map is the identity
/// with multiplier within [`NON_HYPERBOLIC_TOL`] of one are reported in
/// `non_hyperbolic` and never counted as isolated cycles.
pub fn find_limit_cycles(
    c: &AbelCoeffs,
    r_max: f64,
    grid_n: usize,
    s: &IntegratorSettings,
) -> Result<LimitCycleSet> {
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(RigidError::InvalidInput(format!("r_max = {r_max} must be positive")));
    }
    if grid_n < 8 {
        return Err(RigidError::InvalidInput(format!("grid_n = {grid_n} must be at least 8")));
    }
    s.validate()?;
    if r_max > s.r_escape {
        return Err(RigidError::InvalidInput("r_max exceeds the escape radius".into()));
    }

    let radii: Vec<f64> = (1..=grid_n).map(|k| k as f64 * r_max / grid_n as f64).collect();
    let evals: Vec<ReturnMapResult> = radii
        .par_iter()
        .map(|&r| return_map(c, r, s))
        .collect::<Result<_>>()?;

    struct GridPoint {
        r: f64,
        d: Option<f64>,
        annulus: bool,
    }
    let grid: Vec<GridPoint> = radii
        .iter()
        .zip(&evals)
        .map(|(&r, e)| {
            let d = e.value().map(|v| v - r);
            let annulus = match (d, e.derivative) {
                (Some(d), Some(m)) => d.abs() <= GRID_FIXED_TOL && (m - 1.0).abs() <= NON_HYPERBOLIC_TOL,
                _ => false,
            };
            GridPoint { r, d, annulus }
        })
        .collect();

    let first_escape = grid.iter().find(|g| g.d.is_none()).map(|g| g.r);
    let r_max_searched = grid
        .iter()
        .take_while(|g| g.d.is_some())
        .last()
        .map_or(0.0, |g| g.r);

    let mut non_hyperbolic: Vec<f64> = grid.iter().filter(|g| g.annulus).map(|g| g.r).collect();
    let mut candidates = Vec::new();
    for pair in grid.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (Some(da), Some(db)) = (a.d, b.d) else { continue };
        if a.annulus || b.annulus {
            continue;
        }
        if da == 0.0 {
            candidates.push((a.r, a.r, da));
        } else if (da > 0.0) != (db > 0.0) && db != 0.0 {
            candidates.push((a.r, b.r, da));
        }
    }
    if let Some(last) = grid.iter().rev().find(|g| g.d.is_some()) {
        if last.d == Some(0.0) && !last.annulus {
            candidates.push((last.r, last.r, 0.0));
        }
    }

    let roots: Vec<Option<f64>> = candidates
        .par_iter()
        .map(|&(lo, hi, d_lo)| {
            if lo == hi {
                Ok(Some(lo))
            } else {
                bisect_fixed_point(c, s, lo, hi, d_lo)
            }
        })
        .collect::<Result<_>>()?;

    let mut cycles = Vec::new();
    for r_star in roots.into_iter().flatten() {
        let m = return_map(c, r_star, s)?
            .derivative
            .expect("bracketed fixed point returns");
        if (m - 1.0).abs() <= NON_HYPERBOLIC_TOL {
            non_hyperbolic.push(r_star);
        } else {
            cycles.push(LimitCycle { r_star, multiplier: m });
        }
    }
    cycles.sort_by(|x, y| x.r_star.total_cmp(&y.r_star));
    cycles.dedup_by(|x, y| (x.r_star - y.r_star).abs() <= 1e-9);
    non_hyperbolic.sort_by(f64::total_cmp);

    Ok(LimitCycleSet {
        cycles,
        non_hyperbolic,
        r_max_searched,
        first_escape,
        grid_n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarTrajectory {
    pub samples: Vec<PlanarSample>,
    /// Time of escape to infinity if the orbit left before `t1`.
    pub escaped_at: Option<f64>,
}

/// Planar orbit from `(x0, y0)` over `[0, t1]`, sampled at `n_samples + 1`
/// uniformly spaced times. Uses `θ` as time, which is exact for rigid systems.
pub fn planar_orbit(
    p: &RawParams,
    x0: f64,
    y0: f64,
    t1: f64,
    n_samples: usize,
    s: &IntegratorSettings,
) -> Result<PlanarTrajectory> {
    if !(x0.is_finite() && y0.is_finite() && t1.is_finite()) || t1 < 0.0 {
        return Err(RigidError::InvalidInput("planar orbit needs finite start and t1 >= 0".into()));
    }
    let r0 = x0.hypot(y0);
    if r0 == 0.0 && t1 != 0.0 {
        return Err(RigidError::InvalidInput("planar orbit cannot start at the origin".into()));
    }
    let theta0 = y0.atan2(x0);
    let mut samples = vec![PlanarSample { t: 0.0, x: x0, y: y0 }];
    if t1 == 0.0 {
        return Ok(PlanarTrajectory { samples, escaped_at: None });
    }
    let n = n_samples.max(1);
    let at: Vec<f64> = (1..=n).map(|k| theta0 + t1 * k as f64 / n as f64).collect();
    let c = abel_coeffs(p);
    check_inputs(r0, theta0, theta0 + t1, s)?;
    let mut raw = Vec::with_capacity(n);
    let (outcome, _) = drive(&c, r0, theta0, theta0 + t1, s, &at, &mut raw)?;
    samples.extend(raw.into_iter().map(|(theta, r)| {
        let (sn, cs) = theta.sin_cos();
        PlanarSample { t: theta - theta0, x: r * cs, y: r * sn }
    }));
    let escaped_at = match outcome {
        AbelOutcome::Escape(te) => Some(te - theta0),
        AbelOutcome::Value(_) => None,
    };
    Ok(PlanarTrajectory { samples, escaped_at })
}
