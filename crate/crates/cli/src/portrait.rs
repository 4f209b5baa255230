//! Sampled orbits in the plane or on the sphere, as a table or an SVG drawing.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rigid_core::sphere::{find_symmetric_periodic_orbit_with, SphereRun};
use rigid_core::{
    classify_infinity, integrate_sphere, planar_orbit, InfinityKind, RigidError, SphereOrbitOutcome, SphereState,
};

use crate::args::{Mode, PortraitArgs};
use crate::commands::{core_error, frame, search_options};
use crate::config::Resolved;
use crate::output::Table;
use crate::CliError;

/// One orbit as a list of `(t, point)`; planar points have `z3` unused.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub id: usize,
    pub points: Vec<(f64, [f64; 3])>,
    pub highlight: bool,
}

#[derive(Debug, Clone)]
pub struct Portrait {
    pub mode: Mode,
    pub orbits: Vec<Orbit>,
    /// Azimuths and kinds of the singular points at infinity, both antipodes.
    pub infinity: Vec<(f64, InfinityKind)>,
}

fn parse_start(s: &str, mode: Mode) -> Result<SphereStart, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("invalid start point {s:?}")))?;
    match (v.as_slice(), mode) {
        ([x, y], _) => Ok(SphereStart::Planar(*x, *y)),
        ([a, b, c], Mode::Sphere) => SphereState::normalized(*a, *b, *c)
            .map(SphereStart::Sphere)
            .map_err(|e| CliError::Input(e.to_string())),
        _ => Err(CliError::Input(format!("start point {s:?} needs {} coordinates", match mode {
            Mode::Plane => "2",
            Mode::Sphere => "2 or 3",
        }))),
    }
}

enum SphereStart {
    Planar(f64, f64),
    Sphere(SphereState),
}

pub fn compute(r: &Resolved, a: &PortraitArgs) -> Result<Portrait, CliError> {
    let starts: Vec<SphereStart> = a.starts.iter().map(|s| parse_start(s, a.mode)).collect::<Result<_, _>>()?;
    if a.overlay_cycle && a.mode == Mode::Plane {
        return Err(CliError::Input("--overlay-cycle needs --mode sphere".into()));
    }
    let p = frame(r);
    let infinity = match classify_infinity(&p) {
        Ok(pts) => pts.iter().flat_map(|q| [(q.alpha, q.kind), (q.alpha + PI, q.kind)]).collect(),
        Err(RigidError::DegenerateFamily) => Vec::new(),
        Err(e) => return Err(core_error(e)),
    };
    let mut orbits = Vec::new();
    match a.mode {
        Mode::Plane => {
            let t1 = a.t_span.unwrap_or(TAU);
            let mut escaped = 0;
            for (id, s) in starts.iter().enumerate() {
                let SphereStart::Planar(x, y) = *s else { unreachable!("plane starts are planar") };
                let tr = planar_orbit(&r.params, x, y, t1, a.samples.max(1), &r.settings).map_err(core_error)?;
                if tr.escaped_at.is_some() {
                    escaped += 1;
                }
                let points = tr.samples.iter().map(|q| (q.t, [q.x, q.y, 0.0])).collect();
                orbits.push(Orbit { id, points, highlight: false });
            }
            if escaped > 0 && escaped == starts.len() {
                return Err(CliError::Numerical("every orbit escapes to infinity".into()));
            }
        }
        Mode::Sphere => {
            let t1 = a.t_span.unwrap_or(50.0);
            for (id, s) in starts.iter().enumerate() {
                let z0 = match *s {
                    SphereStart::Planar(x, y) => SphereState::from_planar(x, y),
                    SphereStart::Sphere(z) => z,
                };
                let SphereRun::Trajectory(tr) = integrate_sphere(&p, &z0, t1, &r.settings, false).map_err(core_error)?
                else {
                    unreachable!("no equator event was requested")
                };
                let points = tr.times.iter().zip(&tr.states).map(|(t, z)| (*t, z.as_array())).collect();
                orbits.push(Orbit { id, points, highlight: false });
            }
            if a.overlay_cycle {
                match find_symmetric_periodic_orbit_with(&p, &r.settings, &search_options(r)) {
                    Ok(SphereOrbitOutcome::Found { orbits: found }) => {
                        for o in found {
                            let points = o.samples.times.iter().zip(&o.samples.states).map(|(t, z)| (*t, z.as_array()));
                            orbits.push(Orbit { id: orbits.len(), points: points.collect(), highlight: true });
                        }
                    }
                    Ok(_) | Err(RigidError::CenterFamily) => {}
                    Err(e) => return Err(core_error(e)),
                }
            }
        }
    }
    Ok(Portrait { mode: a.mode, orbits, infinity })
}

pub fn table(p: &Portrait) -> Table {
    let mut t = match p.mode {
        Mode::Plane => Table::new(&["orbit_id", "t", "x", "y"]),
        Mode::Sphere => Table::new(&["orbit_id", "t", "z1", "z2", "z3"]),
    };
    for o in &p.orbits {
        for (time, z) in &o.points {
            let mut row = vec![o.id.into(), (*time).into(), z[0].into(), z[1].into()];
            if p.mode == Mode::Sphere {
                row.push(z[2].into());
            }
            t.push(row);
        }
    }
    t
}

/// Stereographic projection from the south pole; the equator maps to the
/// unit circle and the northern hemisphere inside it.
fn project(mode: Mode, z: &[f64; 3]) -> (f64, f64) {
    let s = match mode {
        Mode::Plane => SphereState::from_planar(z[0], z[1]).as_array(),
        Mode::Sphere => *z,
    };
    let d = 1.0 + s[2];
    (s[0] / d, s[1] / d)
}

const SCALE: f64 = 200.0;
const CLIP: f64 = 3.0;

pub fn svg(p: &Portrait) -> String {
    let half = CLIP * SCALE;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        -half,
        -half,
        2.0 * half,
        2.0 * half
    );
    let _ = writeln!(s, r#"<circle cx="0" cy="0" r="{SCALE}" fill="none" stroke="black"/>"#);
    for o in &p.orbits {
        // break the line where the projection leaves the drawing
        let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for (_, z) in &o.points {
            let (u, v) = project(p.mode, z);
            if u.is_finite() && v.is_finite() && u.hypot(v) <= CLIP {
                runs.last_mut().expect("nonempty").push((u * SCALE, -v * SCALE));
            } else if !runs.last().expect("nonempty").is_empty() {
                runs.push(Vec::new());
            }
        }
        let stroke = if o.highlight { "red" } else { "blue" };
        for run in runs.iter().filter(|r| r.len() > 1) {
            let pts: Vec<String> = run.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{stroke}" points="{}"/>"#, pts.join(" "));
        }
    }
    for (alpha, kind) in &p.infinity {
        let (x, y) = (alpha.cos() * SCALE, -alpha.sin() * SCALE);
        let _ = match kind {
            InfinityKind::Cusp => writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="6"/>"#),
            InfinityKind::TwoHypTwoPar => {
                writeln!(s, r#"<rect x="{:.2}" y="{:.2}" width="12" height="12"/>"#, x - 6.0, y - 6.0)
            }
        };
    }
    s.push_str("</svg>\n");
    s
}
