//! Numerical checks that a center at the origin extends to the whole sphere.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{integrate_sphere, sphere_rhs, SphereRun, SphereState};
use crate::centers::{center_condition, CenterClass};
use crate::error::{Result, RigidError};
use crate::family::RigidParams;
use crate::ode::{integrate, Flow, IntegratorSettings, StepControl};

const PASS_TOL: f64 = 1e-6;

/// `H(z) = (-z3^3 + a2 z1^3 - 3 a1 z1^2 z2 - (2 a1 + a3) z2^3) / (3 (z1^2 + z2^2)^{3/2})`
pub fn sphere_first_integral(p: &RigidParams, z: &SphereState) -> Result<f64> {
    if p.b1 != 0.0 || p.b2 != 0.0 {
        return Err(RigidError::DomainError("first integral needs b1 = b2 = 0".into()));
    }
    let rho2 = z.z1 * z.z1 + z.z2 * z.z2;
    if rho2 == 0.0 {
        return Err(RigidError::DomainError("first integral is undefined at the poles".into()));
    }
    let (z1, z2, z3) = (z.z1, z.z2, z.z3);
    let num = -z3 * z3 * z3 + p.a2 * z1 * z1 * z1 - 3.0 * p.a1 * z1 * z1 * z2 - (2.0 * p.a1 + p.a3) * z2 * z2 * z2;
    Ok(num / (3.0 * rho2 * rho2.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GlobalCenterVerdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalCenterReport {
    pub verdict: GlobalCenterVerdict,
    pub class: CenterClass,
    /// Largest first-integral drift or reversibility mismatch.
    pub max_residual: f64,
    pub orbits_checked: usize,
}

fn starts() -> [SphereState; 5] {
    [
        SphereState::from_planar(0.3, 0.0),
        SphereState::from_planar(0.0, 1.5),
        SphereState::from_planar(-2.0, 1.0),
        SphereState::from_planar(0.7, 0.7).antipode(),
        SphereState::from_planar(1.0, -4.0).antipode(),
    ]
}

/// Largest `|H(z(t)) - H(z0)|` over one turn of the azimuth.
fn drift_over_revolution(p: &RigidParams, z0: &SphereState, t_cap: f64, s: &IntegratorSettings) -> Result<f64> {
    let h0 = sphere_first_integral(p, z0)?;
    let mut travel = 0.0;
    let mut drift = 0.0f64;
    let mut bad = None;
    let q = *p;
    integrate(
        move |_, z| sphere_rhs(&q, z),
        0.0,
        z0.as_array(),
        t_cap,
        &StepControl::from(s),
        |z| {
            let n = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt();
            z.iter_mut().for_each(|c| *c /= n);
            true
        },
        |st| {
            let a0 = st.y0[1].atan2(st.y0[0]);
            let a1 = st.y1[1].atan2(st.y1[0]);
            travel += (a1 - a0 + PI).rem_euclid(TAU) - PI;
            match SphereState::normalized(st.y1[0], st.y1[1], st.y1[2]).and_then(|z| sphere_first_integral(p, &z)) {
                Ok(h) => drift = drift.max((h - h0).abs()),
                Err(e) => {
                    bad = Some(e);
                    return Flow::Stop;
                }
            }
            if travel >= TAU {
                Flow::Stop
            } else {
                Flow::Continue
            }
        },
    )?;
    match bad {
        Some(e) => Err(e),
        None => Ok(drift),
    }
}

fn end_state(p: &RigidParams, z0: &SphereState, t: f64, s: &IntegratorSettings) -> Result<SphereState> {
    match integrate_sphere(p, z0, t, s, false)? {
        SphereRun::Trajectory(tr) => Ok(*tr.states.last().expect("trajectories are nonempty")),
        SphereRun::Crossing(c) => Ok(c.state),
    }
}

/// [`global_center_check_with`] at default integrator settings.
pub fn global_center_check(p: &RigidParams) -> Result<GlobalCenterReport> {
    global_center_check_with(p, &IntegratorSettings::default())
}

/// For the homogeneous stratum, conservation of [`sphere_first_integral`]
/// along five orbits in both hemispheres; for the reversible one, the
/// identity `φ_T(R φ_T(z)) = R z` with `R` the reflection in the meridian
/// plane `b1 z1 + b2 z2 = 0`.
pub fn global_center_check_with(p: &RigidParams, s: &IntegratorSettings) -> Result<GlobalCenterReport> {
    let class = center_condition(p);
    let report = |max_residual: f64, orbits_checked| GlobalCenterReport {
        verdict: if max_residual <= PASS_TOL {
            GlobalCenterVerdict::Pass
        } else {
            GlobalCenterVerdict::Fail
        },
        class,
        max_residual,
        orbits_checked,
    };
    match class {
        CenterClass::NotCenter { .. } => Ok(GlobalCenterReport {
            verdict: GlobalCenterVerdict::NotApplicable,
            class,
            max_residual: 0.0,
            orbits_checked: 0,
        }),
        CenterClass::HomogeneousCenter => {
            let mut worst = 0.0f64;
            for z0 in starts() {
                worst = worst.max(drift_over_revolution(p, &z0, 1e3, s)?);
            }
            Ok(report(worst, 5))
        }
        CenterClass::ReversibleCenter { axis: (b1, b2) } => {
            let n2 = b1 * b1 + b2 * b2;
            let reflect = |z: &SphereState| {
                let d = 2.0 * (b1 * z.z1 + b2 * z.z2) / n2;
                SphereState { z1: z.z1 - d * b1, z2: z.z2 - d * b2, z3: z.z3 }
            };
            let mut worst = 0.0f64;
            let picks = [starts()[0], starts()[3]];
            for z0 in picks {
                let t = 3.0;
                let zt = end_state(p, &z0, t, s)?;
                let back = end_state(p, &reflect(&zt), t, s)?;
                worst = worst.max(back.distance(&reflect(&z0)));
            }
            Ok(report(worst, picks.len()))
        }
    }
}
