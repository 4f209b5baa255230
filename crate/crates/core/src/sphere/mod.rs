//! The family on the Poincaré sphere.
//!
//! The plane is projected onto the northern hemisphere through
//! `(z1, z2, z3) = (x, y, 1) / sqrt(x^2 + y^2 + 1)`; after a positive time
//! rescaling the field extends analytically to the whole sphere with a
//! non-degenerate equator. It is odd, `f(-z) = -f(z)`, so the southern
//! hemisphere is the antipodal copy of the northern one and needs no charts of
//! its own.
//!
//! Writing `G = b1 z1 z3^2 + b2 z2 z3^2 + a1 z1^3 + a2 z1^2 z2 + a3 z1 z2^2`,
//! the field is
//! `(z3 (-z2 z3 + z1 G), z3 (z1 z3 + z2 G), (z3^2 - 1) G)`,
//! which is tangent to the sphere and on the equator reduces to `(0, 0, -G)`.

mod global;
mod infinity;
mod lines;
mod orbit;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, RigidError};
use crate::family::RigidParams;

pub use global::{global_center_check, global_center_check_with, sphere_first_integral, GlobalCenterReport, GlobalCenterVerdict};
pub use infinity::{classify_infinity, infinity_summary, InfinityKind, InfinityPoint, InfinitySummary};
pub use lines::{invariant_line, invariant_line_conditions, LineResult};
pub use orbit::{
    equator_crossing_map, equator_crossings, find_symmetric_periodic_orbit, find_symmetric_periodic_orbit_with,
    integrate_sphere, CrossingReturn, EquatorCrossing, OrbitSearchOptions, SphereOrbitOutcome, SpherePeriodicOrbit,
    SphereRun, SphereTrajectory,
};

/// Tolerance on `|z|^2 - 1` accepted for a point on the sphere.
pub const SPHERE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereState {
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
}

impl SphereState {
    pub fn new(z1: f64, z2: f64, z3: f64) -> Result<Self> {
        let n2 = z1 * z1 + z2 * z2 + z3 * z3;
        if !n2.is_finite() || (n2 - 1.0).abs() > SPHERE_TOL {
            return Err(RigidError::InvalidInput(format!(
                "({z1}, {z2}, {z3}) is not on the unit sphere"
            )));
        }
        Ok(Self { z1, z2, z3 })
    }

    /// Radial projection of any nonzero vector onto the sphere.
    pub fn normalized(z1: f64, z2: f64, z3: f64) -> Result<Self> {
        let n = (z1 * z1 + z2 * z2 + z3 * z3).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(RigidError::InvalidInput("cannot normalize a zero vector".into()));
        }
        Ok(Self { z1: z1 / n, z2: z2 / n, z3: z3 / n })
    }

    /// Image of a planar point on the northern hemisphere.
    pub fn from_planar(x: f64, y: f64) -> Self {
        let d = (x * x + y * y + 1.0).sqrt();
        Self { z1: x / d, z2: y / d, z3: 1.0 / d }
    }

    /// Equator point at azimuth `alpha`.
    pub fn on_equator(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self { z1: c, z2: s, z3: 0.0 }
    }

    /// Planar coordinates of a point in the open northern hemisphere.
    pub fn to_planar(&self) -> Option<(f64, f64)> {
        (self.z3 > 0.0).then(|| (self.z1 / self.z3, self.z2 / self.z3))
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.z1, self.z2, self.z3]
    }

    pub(crate) fn from_array(z: [f64; 3]) -> Self {
        Self { z1: z[0], z2: z[1], z3: z[2] }
    }

    pub fn antipode(&self) -> Self {
        Self { z1: -self.z1, z2: -self.z2, z3: -self.z3 }
    }

    /// `atan2(z2, z1)` in `(-π, π]`.
    pub fn azimuth(&self) -> f64 {
        self.z2.atan2(self.z1)
    }

    pub fn distance(&self, other: &SphereState) -> f64 {
        let d = [self.z1 - other.z1, self.z2 - other.z2, self.z3 - other.z3];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    /// `(x, y) = (1/v, u/v)`
    U1,
    /// `(x, y) = (u/v, 1/v)`
    U2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hemisphere {
    North,
    South,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub chart: Chart,
    pub u: f64,
    pub v: f64,
    /// `South` selects the antipodal copy of the chart.
    pub hemisphere: Hemisphere,
}

impl ChartPoint {
    pub fn to_sphere(&self) -> SphereState {
        let (a, b, c) = match self.chart {
            Chart::U1 => (1.0, self.u, self.v),
            Chart::U2 => (self.u, 1.0, self.v),
        };
        let z = SphereState::normalized(a, b, c).expect("chart vectors are nonzero");
        match self.hemisphere {
            Hemisphere::North => z,
            Hemisphere::South => z.antipode(),
        }
    }

    /// Planar point for `v ≠ 0` on the northern copy.
    pub fn to_planar(&self) -> Option<(f64, f64)> {
        if self.v == 0.0 || self.hemisphere == Hemisphere::South {
            return None;
        }
        Some(match self.chart {
            Chart::U1 => (1.0 / self.v, self.u / self.v),
            Chart::U2 => (self.u / self.v, 1.0 / self.v),
        })
    }
}

fn cubic_part(p: &RigidParams, z1: f64, z2: f64) -> f64 {
    z1 * (p.a1 * z1 * z1 + p.a2 * z1 * z2 + p.a3 * z2 * z2)
}

/// Right-hand side of the compactified field at `z`.
pub fn eval_sphere_field(p: &RigidParams, z: &SphereState) -> (f64, f64, f64) {
    let f = sphere_rhs(p, &z.as_array());
    (f[0], f[1], f[2])
}

pub(crate) fn sphere_rhs(p: &RigidParams, z: &[f64; 3]) -> [f64; 3] {
    let [z1, z2, z3] = *z;
    let z3s = z3 * z3;
    let g = (p.b1 * z1 + p.b2 * z2) * z3s + cubic_part(p, z1, z2);
    [z3 * (-z2 * z3 + z1 * g), z3 * (z1 * z3 + z2 * g), (z3s - 1.0) * g]
}

/// Chart `U2` after a positive rescaling by `v^2`:
/// `u' = -v^2 (u^2 + 1)`, `v' = -a1 u^3 - b1 u v^2 - u v^3 - a2 u^2 - b2 v^2 - a3 u`.
pub fn chart_u2_field(p: &RigidParams, u: f64, v: f64) -> (f64, f64) {
    let v2 = v * v;
    (
        -v2 * (u * u + 1.0),
        -p.a1 * u * u * u - p.b1 * u * v2 - u * v2 * v - p.a2 * u * u - p.b2 * v2 - p.a3 * u,
    )
}

/// Chart `U1` after the same rescaling:
/// `u' = v^2 (u^2 + 1)`, `v' = -(a1 + a2 u + a3 u^2) - b1 v^2 - b2 u v^2 + u v^3`.
/// On `v = 0` the second component is `h(u) = -(a3 u^2 + a2 u + a1)`.
pub fn chart_u1_field(p: &RigidParams, u: f64, v: f64) -> (f64, f64) {
    let v2 = v * v;
    (
        v2 * (u * u + 1.0),
        -(p.a1 + p.a2 * u + p.a3 * u * u) - p.b1 * v2 - p.b2 * u * v2 + u * v2 * v,
    )
}

/// `D = a2^2 - 4 a1 a3`
pub fn discriminant(p: &RigidParams) -> f64 {
    p.a2 * p.a2 - 4.0 * p.a1 * p.a3
}

/// `z3'` at the equator point of azimuth `alpha`; positive means the orbit
/// enters the northern hemisphere.
pub fn equator_normal_speed(p: &RigidParams, alpha: f64) -> f64 {
    let (s, c) = alpha.sin_cos();
    -cubic_part(p, c, s)
}

/// Azimuths in `[0, 2π)`, ascending, of the critical equator points
/// (zeros of `cos α (a1 cos^2 α + a2 cos α sin α + a3 sin^2 α)`), taken from
/// [`classify_infinity`] so that both agree on multiple roots.
pub fn equator_critical_angles(p: &RigidParams) -> Result<Vec<f64>> {
    let base: Vec<f64> = classify_infinity(p)?.iter().map(|q| q.alpha).collect();
    let mut all: Vec<f64> = base.iter().copied().chain(base.iter().map(|a| a + PI)).collect();
    all.sort_by(f64::total_cmp);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(b1: f64, b2: f64, a1: f64, a2: f64, a3: f64) -> RigidParams {
        RigidParams::new(b1, b2, a1, a2, a3).unwrap()
    }

    #[test]
    fn poles_are_stationary() {
        let p = rp(0.4, -1.0, 1.0, 2.0, -0.5);
        for z3 in [1.0, -1.0] {
            let f = eval_sphere_field(&p, &SphereState::new(0.0, 0.0, z3).unwrap());
            assert_eq!(f, (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn equator_value() {
        let p = rp(0.0, 0.0, 1.0, 0.0, 0.0);
        let f = eval_sphere_field(&p, &SphereState::on_equator(0.0));
        assert_eq!(f, (0.0, 0.0, -1.0));
        assert_eq!(equator_normal_speed(&p, 0.0), -1.0);
    }

    #[test]
    fn chart_values() {
        let p = rp(0.0, 0.0, 0.0, 0.0, 1.0);
        assert_eq!(chart_u2_field(&p, 1.0, 0.0), (-0.0, -1.0));
        let q = rp(0.3, 0.1, 0.0, 1.0, 2.0);
        assert_eq!(chart_u1_field(&q, 0.0, 0.0), (0.0, 0.0));
        let r = rp(0.0, 0.0, 1.0, 0.0, 0.0);
        assert!(chart_u1_field(&r, 0.0, 0.0).1 != 0.0);
    }

    #[test]
    fn discriminant_values() {
        assert_eq!(discriminant(&rp(0.0, 0.0, 1.0, 0.0, 1.0)), -4.0);
        assert_eq!(discriminant(&rp(0.0, 0.0, 1.0, 0.0, -1.0)), 4.0);
        assert_eq!(discriminant(&rp(0.0, 1.0, 1.0, -2.0, 1.0)), 0.0);
    }

    #[test]
    fn critical_angles_two_and_six() {
        let two = equator_critical_angles(&rp(1.0, 0.0, 1.0, 0.0, 1.0)).unwrap();
        assert_eq!(two.len(), 2);
        assert!((two[0] - PI / 2.0).abs() < 1e-15);
        let six = equator_critical_angles(&rp(0.0, 1.0, 1.0, 0.0, -1.0)).unwrap();
        assert_eq!(six.len(), 6);
        for a in six {
            assert!(equator_normal_speed(&rp(0.0, 1.0, 1.0, 0.0, -1.0), a).abs() < 1e-15);
        }
        assert!(equator_critical_angles(&rp(1.0, 1.0, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn state_validation() {
        assert!(SphereState::new(1.0, 1.0, 0.0).is_err());
        assert!(SphereState::normalized(0.0, 0.0, 0.0).is_err());
        let z = SphereState::from_planar(0.5, -2.0);
        let (x, y) = z.to_planar().unwrap();
        assert!((x - 0.5).abs() < 1e-15 && (y + 2.0).abs() < 1e-15);
        let cp = ChartPoint { chart: Chart::U2, u: 0.5, v: 0.25, hemisphere: Hemisphere::North };
        let (x, y) = cp.to_planar().unwrap();
        assert_eq!((x, y), (2.0, 4.0));
        let zs = cp.to_sphere();
        let zp = SphereState::from_planar(2.0, 4.0);
        assert!(zs.distance(&zp) < 1e-15);
    }
}
