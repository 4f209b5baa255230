//! Singular points on the equator of the sphere.
//!
//! In chart `U2` they are the zeros of `g(u) = -u (a1 u^2 + a2 u + a3)` on
//! `v = 0`; the origin of `U1` is singular exactly when `a1 = 0`. Each one
//! stands for an antipodal pair. Multiplicities are read off from which
//! coefficients vanish, never from numerically clustered roots.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{discriminant, Chart};
use crate::error::{Result, RigidError};
use crate::family::RigidParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfinityKind {
    /// Simple zero of `g`.
    Cusp,
    /// Multiple zero; two hyperbolic and two parabolic sectors.
    TwoHypTwoPar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfinityPoint {
    pub chart: Chart,
    pub u: f64,
    pub multiplicity: u8,
    pub kind: InfinityKind,
    /// Azimuth in `[0, π)` of the representative of the antipodal pair.
    pub alpha: f64,
    /// Set on the `a1 = a2 = 0` origin of `U1`, whose local picture depends on
    /// strata not resolved here.
    pub ambiguous: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InfinitySummary {
    /// Counted on the sphere, i.e. twice the number of antipodal pairs.
    pub cusps: usize,
    pub two_hyp_two_par: usize,
}

fn point(chart: Chart, u: f64, multiplicity: u8, kind: InfinityKind) -> InfinityPoint {
    let alpha = match chart {
        Chart::U1 => 0.0,
        Chart::U2 => 1.0f64.atan2(u),
    };
    InfinityPoint { chart, u, multiplicity, kind, alpha, ambiguous: false }
}

fn simple(u: f64) -> InfinityPoint {
    point(Chart::U2, u, 1, InfinityKind::Cusp)
}

fn discriminant_vanishes(p: &RigidParams) -> bool {
    let scale = p.a2 * p.a2 + (4.0 * p.a1 * p.a3).abs();
    discriminant(p).abs() <= 8.0 * f64::EPSILON * scale
}

/// Singular points at infinity, one per antipodal pair, sorted by azimuth.
pub fn classify_infinity(p: &RigidParams) -> Result<Vec<InfinityPoint>> {
    if p.is_degenerate() {
        return Err(RigidError::DegenerateFamily);
    }
    let RigidParams { a1, a2, a3, .. } = *p;
    let mut pts = Vec::new();

    // u = 0 in U2: a zero of g of order 1 + [a3 = 0] + [a2 = a3 = 0]
    let m0: u8 = if a3 != 0.0 {
        1
    } else if a2 != 0.0 {
        2
    } else {
        3
    };
    let kind0 = match m0 {
        1 => InfinityKind::Cusp,
        3 if p.b2 == 0.0 => InfinityKind::Cusp,
        _ => InfinityKind::TwoHypTwoPar,
    };
    pts.push(point(Chart::U2, 0.0, m0, kind0));

    // nonzero roots of a1 u^2 + a2 u + a3
    if a1 != 0.0 {
        if a3 != 0.0 {
            if discriminant_vanishes(p) {
                pts.push(point(Chart::U2, -a2 / (2.0 * a1), 2, InfinityKind::TwoHypTwoPar));
            } else if discriminant(p) > 0.0 {
                let sq = discriminant(p).sqrt();
                let q = -0.5 * (a2 + if a2 >= 0.0 { sq } else { -sq });
                let (r1, r2) = (q / a1, a3 / q);
                pts.push(simple(r1));
                pts.push(simple(r2));
            }
        } else if a2 != 0.0 {
            pts.push(simple(-a2 / a1));
        }
    } else {
        if a2 != 0.0 && a3 != 0.0 {
            pts.push(simple(-a3 / a2));
        }
        // origin of U1, where h(u) = -(a3 u^2 + a2 u)
        let mut o = if a2 != 0.0 {
            point(Chart::U1, 0.0, 1, InfinityKind::Cusp)
        } else {
            point(Chart::U1, 0.0, 2, InfinityKind::TwoHypTwoPar)
        };
        o.ambiguous = a2 == 0.0;
        pts.push(o);
    }
    for q in pts.iter_mut() {
        q.alpha = q.alpha.rem_euclid(PI);
    }
    pts.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    Ok(pts)
}

pub fn infinity_summary(points: &[InfinityPoint]) -> InfinitySummary {
    let mut s = InfinitySummary::default();
    for q in points {
        match q.kind {
            InfinityKind::Cusp => s.cusps += 2,
            InfinityKind::TwoHypTwoPar => s.two_hyp_two_par += 2,
        }
    }
    s
}
