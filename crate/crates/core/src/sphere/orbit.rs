//! Trajectories on the sphere and the search for symmetric periodic orbits.
//!
//! Because the field is odd, an orbit through the equator point `z0` that
//! reaches the antipode `-z0` is periodic. Orbits are parametrised by their
//! starting azimuth `α`; the unwrapped azimuth change up to the `k`-th return
//! to the equator, `Δ_k(α)`, is monotone in time (its rate is `z3^2`), and a
//! symmetric orbit corresponds to `Δ_k(α) = (2m + 1)π`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{equator_critical_angles, equator_normal_speed, sphere_rhs, SphereState};
use crate::centers::center_condition;
use crate::error::{Result, RigidError};
use crate::family::RigidParams;
use crate::ode::{integrate, DenseStep, Flow, IntegratorSettings, StepControl};

/// `|z3|` beyond which the equator detector is armed.
const ARM_TOL: f64 = 1e-9;
/// Crossings are localized to `|z3|` below this.
const LOCATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<SphereState>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquatorCrossing {
    pub t: f64,
    /// Azimuth of the crossing in `[0, 2π)`.
    pub alpha: f64,
    pub state: SphereState,
    /// Unwrapped azimuth change since the start.
    pub azimuth_travel: f64,
    pub into_north: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SphereRun {
    Trajectory(SphereTrajectory),
    Crossing(EquatorCrossing),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CrossingReturn {
    Returned(EquatorCrossing),
    /// No return to the equator before `t_max`.
    NoReturn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePeriodicOrbit {
    pub alpha_star: f64,
    pub period: f64,
    /// Equator crossings per period, the start included.
    pub crossing_count: usize,
    pub equator_crossings: Vec<f64>,
    /// `|z(T/2) + z(0)|`
    pub symmetry_residual: f64,
    /// `|z(T) - z(0)|`
    pub closure_residual: f64,
    pub samples: SphereTrajectory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum SphereOrbitOutcome {
    Found { orbits: Vec<SpherePeriodicOrbit> },
    NotFound,
    /// The crossing map broke down near these azimuths, typically because
    /// orbits there run into a saddle at infinity.
    HeteroclinicSuspected { near_alpha: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSearchOptions {
    pub t_max: f64,
    pub initial_grid: usize,
    pub max_grid: usize,
    pub psi_tol: f64,
    pub residual_tol: f64,
}

impl Default for OrbitSearchOptions {
    fn default() -> Self {
        Self {
            t_max: 2000.0,
            initial_grid: 64,
            max_grid: 1024,
            psi_tol: 1e-9,
            residual_tol: 1e-6,
        }
    }
}

fn normalize(z: [f64; 3]) -> [f64; 3] {
    let n = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt();
    [z[0] / n, z[1] / n, z[2] / n]
}

fn azimuth(z: &[f64; 3]) -> f64 {
    z[1].atan2(z[0])
}

fn wrap_pi(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(TAU) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

/// Integrates from `z0`, collecting up to `max_crossings` equator crossings.
/// `record` receives every accepted state.
fn scan(
    p: &RigidParams,
    z0: &SphereState,
    t_end: f64,
    max_crossings: usize,
    s: &IntegratorSettings,
    mut record: impl FnMut(f64, [f64; 3]),
) -> Result<(Vec<EquatorCrossing>, f64, [f64; 3])> {
    s.validate()?;
    let ctl = StepControl::from(s);
    let y0 = z0.as_array();
    let mut side = (y0[2].abs() > ARM_TOL).then_some(y0[2] > 0.0);
    let mut travel = 0.0;
    let mut found = Vec::new();
    let p = *p;
    let fin = integrate(
        move |_, z| sphere_rhs(&p, z),
        0.0,
        y0,
        t_end,
        &ctl,
        |z| {
            *z = normalize(*z);
            true
        },
        |st: &DenseStep<3>| {
            let az0 = azimuth(&st.y0);
            let z3 = st.y1[2];
            match side {
                Some(north) if max_crossings > 0 && (z3 == 0.0 || (z3 > 0.0) != north) => {
                    let (tc, zc) = st.locate(|y| y[2], LOCATE_TOL);
                    let zc = normalize(zc);
                    found.push(EquatorCrossing {
                        t: tc,
                        alpha: azimuth(&zc).rem_euclid(TAU),
                        state: SphereState::from_array(zc),
                        azimuth_travel: travel + wrap_pi(azimuth(&zc) - az0),
                        into_north: !north,
                    });
                    if found.len() >= max_crossings {
                        return Flow::Stop;
                    }
                    side = (z3.abs() > ARM_TOL).then_some(z3 > 0.0);
                }
                None if z3.abs() > ARM_TOL => side = Some(z3 > 0.0),
                _ => {}
            }
            travel += wrap_pi(azimuth(&st.y1) - az0);
            record(st.t1, normalize(st.y1));
            Flow::Continue
        },
    )?;
    Ok((found, fin.t, fin.y))
}

/// Integrates from `z0` for `t1` time units, or up to the first equator
/// crossing when `stop_at_equator` is set and one occurs.
pub fn integrate_sphere(
    p: &RigidParams,
    z0: &SphereState,
    t1: f64,
    s: &IntegratorSettings,
    stop_at_equator: bool,
) -> Result<SphereRun> {
    if !(t1.is_finite() && t1 >= 0.0) {
        return Err(RigidError::InvalidInput(format!("t1 = {t1} must be finite and nonnegative")));
    }
    let mut times = vec![0.0];
    let mut states = vec![*z0];
    let (crossings, _, _) = scan(p, z0, t1, usize::from(stop_at_equator), s, |t, z| {
        times.push(t);
        states.push(SphereState::from_array(z));
    })?;
    match crossings.first() {
        Some(c) => Ok(SphereRun::Crossing(*c)),
        None => Ok(SphereRun::Trajectory(SphereTrajectory { times, states })),
    }
}

/// The first `count` equator crossings starting from `z0`, fewer if `t_max`
/// is reached first.
pub fn equator_crossings(
    p: &RigidParams,
    z0: &SphereState,
    count: usize,
    t_max: f64,
    s: &IntegratorSettings,
) -> Result<Vec<EquatorCrossing>> {
    Ok(scan(p, z0, t_max, count, s, |_, _| {})?.0)
}

fn check_start(p: &RigidParams, alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(RigidError::InvalidInput("alpha must be finite".into()));
    }
    if equator_normal_speed(p, alpha).abs() <= 1e-12 * p.cubic_norm() {
        return Err(RigidError::CriticalStart { alpha });
    }
    Ok(())
}

/// First return to the equator from the equator point at azimuth `alpha`.
pub fn equator_crossing_map(
    p: &RigidParams,
    alpha: f64,
    s: &IntegratorSettings,
    t_max: f64,
) -> Result<CrossingReturn> {
    if p.is_degenerate() {
        return Err(RigidError::DegenerateFamily);
    }
    check_start(p, alpha)?;
    let c = equator_crossings(p, &SphereState::on_equator(alpha), 1, t_max, s)?;
    Ok(match c.first() {
        Some(c) => CrossingReturn::Returned(*c),
        None => CrossingReturn::NoReturn,
    })
}

/// `Δ_k(α)`, or `None` when fewer than `k` crossings happen before `t_max`
/// or the integration fails.
fn travel_k(p: &RigidParams, alpha: f64, k: usize, t_max: f64, s: &IntegratorSettings) -> Option<f64> {
    let c = equator_crossings(p, &SphereState::on_equator(alpha), k, t_max, s).ok()?;
    (c.len() == k).then(|| c[k - 1].azimuth_travel)
}

/// Odd multiples of `π` lying between `a` and `b`.
fn odd_targets(a: f64, b: f64) -> Vec<f64> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let m0 = ((lo / PI - 1.0) / 2.0).ceil() as i64;
    let m1 = ((hi / PI - 1.0) / 2.0).floor() as i64;
    (m0..=m1).map(|m| (2 * m + 1) as f64 * PI).collect()
}

enum Bisection {
    Root(f64),
    Broken(f64),
}

fn bisect(
    p: &RigidParams,
    k: usize,
    (mut lo, mut glo): (f64, f64),
    (mut hi, _): (f64, f64),
    target: f64,
    opts: &OrbitSearchOptions,
    s: &IntegratorSettings,
) -> Bisection {
    glo -= target;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        let Some(d) = travel_k(p, mid, k, opts.t_max, s) else {
            return Bisection::Broken(mid);
        };
        let g = d - target;
        if g.abs() <= opts.psi_tol {
            return Bisection::Root(mid);
        }
        if (g > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = g;
        } else {
            hi = mid;
        }
    }
    Bisection::Broken(0.5 * (lo + hi))
}

struct Arc {
    lo: f64,
    width: f64,
    /// `Δ_k` at `lo + j width / n` for `j = 1..n`, `n = values.len() + 1`.
    values: Vec<Option<f64>>,
}

impl Arc {
    fn n(&self) -> usize {
        self.values.len() + 1
    }

    fn alpha(&self, j: usize) -> f64 {
        self.lo + self.width * j as f64 / self.n() as f64
    }

    fn refine(&mut self, p: &RigidParams, k: usize, opts: &OrbitSearchOptions, s: &IntegratorSettings) {
        let n = self.n();
        let fresh: Vec<Option<f64>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let a = self.lo + self.width * (2 * j + 1) as f64 / (2 * n) as f64;
                travel_k(p, a, k, opts.t_max, s)
            })
            .collect();
        let mut merged = Vec::with_capacity(2 * n - 1);
        for j in 0..n {
            merged.push(fresh[j]);
            if j + 1 < n {
                merged.push(self.values[j]);
            }
        }
        self.values = merged;
    }
}

enum Candidate {
    Bracket { a: (f64, f64), b: (f64, f64), target: f64 },
    Suspect(f64),
}

/// Brackets of `Δ_k = (2m + 1)π`; straddles across non-returning cells and
/// transitions between returning and non-returning cells are suspects.
fn candidates(arc: &Arc) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (j, w) in arc.values.windows(2).enumerate() {
        if w[0].is_some() != w[1].is_some() {
            out.push(Candidate::Suspect(0.5 * (arc.alpha(j + 1) + arc.alpha(j + 2))));
        }
    }
    let mut last: Option<(usize, f64)> = None;
    for (j, v) in arc.values.iter().enumerate() {
        let Some(d) = *v else { continue };
        if let Some((i, dp)) = last {
            for target in odd_targets(dp, d) {
                if (dp - target) * (d - target) > 0.0 {
                    continue;
                }
                if j == i + 1 {
                    out.push(Candidate::Bracket {
                        a: (arc.alpha(i + 1), dp),
                        b: (arc.alpha(j + 1), d),
                        target,
                    });
                } else {
                    out.push(Candidate::Suspect(arc.alpha((i + j) / 2 + 1)));
                }
            }
        }
        last = Some((j, d));
    }
    out
}

fn validate(
    p: &RigidParams,
    alpha: f64,
    k: usize,
    opts: &OrbitSearchOptions,
    s: &IntegratorSettings,
) -> Option<SpherePeriodicOrbit> {
    let z0 = SphereState::on_equator(alpha);
    let half = equator_crossings(p, &z0, k, opts.t_max, s).ok()?;
    let t_half = half.get(k - 1)?.t;
    let full = equator_crossings(p, &z0, 2 * k, 4.0 * t_half + 1.0, s).ok()?;
    if full.len() != 2 * k {
        return None;
    }
    let mid = &full[k - 1];
    let end = &full[2 * k - 1];
    let symmetry_residual = mid.state.distance(&z0.antipode());
    let closure_residual = end.state.distance(&z0);
    if symmetry_residual > opts.residual_tol || closure_residual > opts.residual_tol {
        return None;
    }
    let period = end.t;
    let samples = match integrate_sphere(p, &z0, period, s, false).ok()? {
        SphereRun::Trajectory(t) => t,
        SphereRun::Crossing(_) => return None,
    };
    let mut equator = vec![alpha.rem_euclid(TAU)];
    equator.extend(full[..2 * k - 1].iter().map(|c| c.alpha));
    Some(SpherePeriodicOrbit {
        alpha_star: alpha.rem_euclid(TAU),
        period,
        crossing_count: 2 * k,
        equator_crossings: equator,
        symmetry_residual,
        closure_residual,
        samples,
    })
}

fn same_orbit(a: &SpherePeriodicOrbit, alpha: f64) -> bool {
    a.equator_crossings.iter().any(|&c| {
        let d = (c - alpha).rem_euclid(PI);
        d.min(PI - d) < 1e-6
    })
}

/// [`find_symmetric_periodic_orbit_with`] using default search options.
pub fn find_symmetric_periodic_orbit(p: &RigidParams, s: &IntegratorSettings) -> Result<SphereOrbitOutcome> {
    find_symmetric_periodic_orbit_with(p, s, &OrbitSearchOptions::default())
}

/// Searches the half equator for symmetric periodic orbits crossing the
/// equator twice, and failing that (with six critical directions) six times.
pub fn find_symmetric_periodic_orbit_with(
    p: &RigidParams,
    s: &IntegratorSettings,
    opts: &OrbitSearchOptions,
) -> Result<SphereOrbitOutcome> {
    s.validate()?;
    if p.is_degenerate() {
        return Err(RigidError::DegenerateFamily);
    }
    if center_condition(p).is_center() {
        return Err(RigidError::CenterFamily);
    }
    if !(opts.t_max > 0.0 && opts.initial_grid >= 2 && opts.max_grid >= opts.initial_grid && opts.psi_tol > 0.0) {
        return Err(RigidError::InvalidInput("invalid orbit search options".into()));
    }
    let crit = equator_critical_angles(p)?;
    let half: Vec<f64> = crit[..crit.len() / 2].to_vec();
    let end = half[0] + PI;

    let mut orbits: Vec<SpherePeriodicOrbit> = Vec::new();
    let mut suspects: Vec<f64> = Vec::new();
    // orbits crossing six times are only sought with six critical directions
    let modes: &[usize] = if crit.len() == 6 { &[1, 3] } else { &[1] };
    for &k in modes {
        let mut local: Vec<f64> = Vec::new();
        let mut arcs: Vec<Arc> = half
            .iter()
            .enumerate()
            .map(|(i, &lo)| {
                let hi = half.get(i + 1).copied().unwrap_or(end);
                Arc { lo, width: hi - lo, values: Vec::new() }
            })
            .collect();
        let mut n = 1;
        while n < opts.initial_grid {
            for arc in arcs.iter_mut() {
                arc.refine(p, k, opts, s);
            }
            n *= 2;
        }
        loop {
            let mut any_bracket = false;
            for arc in &arcs {
                for cand in candidates(arc) {
                    match cand {
                        Candidate::Suspect(a) => local.push(a),
                        Candidate::Bracket { a, b, target } => {
                            any_bracket = true;
                            match bisect(p, k, a, b, target, opts, s) {
                                Bisection::Broken(x) => local.push(x),
                                Bisection::Root(x) => {
                                    if orbits.iter().any(|o| same_orbit(o, x)) {
                                        continue;
                                    }
                                    match validate(p, x, k, opts, s) {
                                        Some(o) => orbits.push(o),
                                        None => local.push(x),
                                    }
                                }
                            }
                        }
                    }
                }
            }
            if any_bracket || n >= opts.max_grid {
                break;
            }
            local.clear();
            for arc in arcs.iter_mut() {
                arc.refine(p, k, opts, s);
            }
            n *= 2;
        }
        suspects.extend(local);
        if !orbits.is_empty() {
            break;
        }
    }
    if !orbits.is_empty() {
        orbits.sort_by(|a, b| a.alpha_star.total_cmp(&b.alpha_star));
        return Ok(SphereOrbitOutcome::Found { orbits });
    }
    if !suspects.is_empty() {
        suspects.sort_by(f64::total_cmp);
        suspects.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        return Ok(SphereOrbitOutcome::HeteroclinicSuspected { near_alpha: suspects });
    }
    Ok(SphereOrbitOutcome::NotFound)
}
