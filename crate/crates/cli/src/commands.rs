//! The single-system subcommands.

use rigid_core::sphere::{find_symmetric_periodic_orbit_with, infinity_summary, OrbitSearchOptions};
use rigid_core::{
    center_condition, classify_infinity, discriminant, find_limit_cycles, invariant_line, lyapunov_l2, lyapunov_l3,
    normalize_a4, AbelCoeffs, CenterClass, RigidError, RigidParams, SphereOrbitOutcome,
};

use crate::config::Resolved;
use crate::output::{num, Field, Table};
use crate::CliError;

/// Human-readable text plus the machine table behind it.
#[derive(Debug, Clone)]
pub struct Report {
    pub human: String,
    pub table: Table,
    /// Set when the command completed but its result is a numerical failure.
    pub failure: Option<String>,
}

impl Report {
    fn ok(human: String, table: Table) -> Self {
        Report { human, table, failure: None }
    }
}

pub fn core_error(e: RigidError) -> CliError {
    match e {
        RigidError::InvalidInput(_)
        | RigidError::DomainError(_)
        | RigidError::DegenerateFamily
        | RigidError::CriticalStart { .. } => CliError::Input(e.to_string()),
        RigidError::CenterFamily
        | RigidError::Timeout { .. }
        | RigidError::StepSizeUnderflow { .. }
        | RigidError::TooManySteps { .. } => CliError::Numerical(e.to_string()),
    }
}

/// The analysis frame: `a4` rotated away.
pub fn frame(r: &Resolved) -> RigidParams {
    normalize_a4(&r.params).0
}

fn params_line(p: &RigidParams) -> String {
    format!("b1 = {}, b2 = {}, a1 = {}, a2 = {}, a3 = {}", num(p.b1), num(p.b2), num(p.a1), num(p.a2), num(p.a3))
}

pub fn normalize(r: &Resolved) -> Report {
    let (q, phi) = normalize_a4(&r.params);
    let mut t = Table::new(&["b1", "b2", "a1", "a2", "a3", "phi"]);
    t.push(vec![q.b1.into(), q.b2.into(), q.a1.into(), q.a2.into(), q.a3.into(), phi.radians().into()]);
    Report::ok(format!("{}\nphi = {}\n", params_line(&q), num(phi.radians())), t)
}

pub fn center(r: &Resolved) -> Report {
    let p = frame(r);
    let class = center_condition(&p);
    let (l2, l3) = (lyapunov_l2(&p), lyapunov_l3(&p));
    let human = match class {
        CenterClass::NotCenter { l2, l3 } => format!("NotCenter (l2 = {}, l3 = {})\n", num(l2), num(l3)),
        CenterClass::HomogeneousCenter => "HomogeneousCenter\n".to_string(),
        CenterClass::ReversibleCenter { axis: (b1, b2) } => {
            format!("ReversibleCenter (symmetric about {} x + {} y = 0)\n", num(b1), num(b2))
        }
    };
    let mut t = Table::new(&["class", "l2", "l3"]);
    t.push(vec![class.name().into(), l2.into(), l3.into()]);
    Report::ok(human, t)
}

pub fn lyapunov(r: &Resolved) -> Report {
    let p = frame(r);
    let (l2, l3) = (lyapunov_l2(&p), lyapunov_l3(&p));
    let mut t = Table::new(&["l2", "l3"]);
    t.push(vec![l2.into(), l3.into()]);
    Report::ok(format!("l2 = {}\nl3 = {}\n", num(l2), num(l3)), t)
}

fn counted(n: usize, one: &str, many: &str) -> String {
    format!("{} {} ({} on sphere)", n / 2, if n == 2 { one } else { many }, n)
}

pub fn infinity(r: &Resolved) -> Result<Report, CliError> {
    let p = frame(r);
    let pts = classify_infinity(&p).map_err(core_error)?;
    let d = discriminant(&p);
    let sum = infinity_summary(&pts);
    let mut parts = Vec::new();
    if sum.cusps > 0 {
        parts.push(counted(sum.cusps, "cusp", "cusps"));
    }
    if sum.two_hyp_two_par > 0 {
        parts.push(counted(sum.two_hyp_two_par, "2H+2P point", "2H+2P points"));
    }
    let mut human = format!("{}, D={}\n", parts.join(", "), num(d));
    let mut t = Table::new(&["chart", "u", "multiplicity", "kind", "alpha", "ambiguous", "discriminant"]);
    for q in &pts {
        let chart = format!("{:?}", q.chart);
        let kind = format!("{:?}", q.kind);
        human.push_str(&format!(
            "  {chart} u = {} multiplicity {} {kind} at angle {}{}\n",
            num(q.u),
            q.multiplicity,
            num(q.alpha),
            if q.ambiguous { " (ambiguous)" } else { "" }
        ));
        t.push(vec![
            chart.into(),
            q.u.into(),
            (q.multiplicity as usize).into(),
            kind.into(),
            q.alpha.into(),
            q.ambiguous.into(),
            d.into(),
        ]);
    }
    Ok(Report::ok(human, t))
}

pub fn cycles(r: &Resolved) -> Result<Report, CliError> {
    let c = AbelCoeffs::from(&r.params);
    let set = find_limit_cycles(&c, r.r_max, r.grid_n, &r.settings).map_err(core_error)?;
    let mut t = Table::new(&["r_star", "multiplier", "stability"]);
    let n = set.cycles.len();
    let mut human = format!(
        "{n} limit cycle{} ({} on sphere)\n",
        if n == 1 { "" } else { "s" },
        2 * n
    );
    for cyc in &set.cycles {
        let stability = if cyc.multiplier < 1.0 { "stable" } else { "unstable" };
        human.push_str(&format!("  r* = {}  multiplier = {}  {stability}\n", num(cyc.r_star), num(cyc.multiplier)));
        t.push(vec![cyc.r_star.into(), cyc.multiplier.into(), stability.into()]);
    }
    if !set.non_hyperbolic.is_empty() {
        human.push_str(&format!("  {} non-hyperbolic grid radii (possible annulus)\n", set.non_hyperbolic.len()));
    }
    if let Some(re) = set.first_escape {
        human.push_str(&format!("  orbits escape from r = {}; scanned up to r = {}\n", num(re), num(set.r_max_searched)));
    }
    let failure = (set.r_max_searched == 0.0).then(|| "every scanned orbit escapes to infinity".to_string());
    Ok(Report { human, table: t, failure })
}

pub fn search_options(r: &Resolved) -> OrbitSearchOptions {
    let mut o = OrbitSearchOptions::default();
    if let Some(t) = r.t_max {
        o.t_max = t;
    }
    o
}

pub fn sphere_cycle(r: &Resolved) -> Result<Report, CliError> {
    let p = frame(r);
    let mut t = Table::new(&[
        "outcome",
        "alpha_star",
        "period",
        "crossing_count",
        "symmetry_residual",
        "closure_residual",
    ]);
    let blank = |outcome: &str, alpha: Field| {
        vec![outcome.into(), alpha, Field::Empty, Field::Empty, Field::Empty, Field::Empty]
    };
    let outcome = match find_symmetric_periodic_orbit_with(&p, &r.settings, &search_options(r)) {
        Err(RigidError::CenterFamily) => {
            t.push(blank("center-annulus", Field::Empty));
            return Ok(Report::ok("center-annulus: the sphere carries a family of periodic orbits\n".into(), t));
        }
        other => other.map_err(core_error)?,
    };
    Ok(match outcome {
        SphereOrbitOutcome::Found { orbits } => {
            let mut human = format!("{} symmetric orbit{} crossing the equator\n", orbits.len(), if orbits.len() == 1 { "" } else { "s" });
            for o in &orbits {
                human.push_str(&format!(
                    "  alpha* = {}  period = {}  crossings = {}  symmetry residual = {:e}  closure residual = {:e}\n",
                    num(o.alpha_star), num(o.period), o.crossing_count, o.symmetry_residual, o.closure_residual
                ));
                t.push(vec![
                    "found".into(),
                    o.alpha_star.into(),
                    o.period.into(),
                    o.crossing_count.into(),
                    o.symmetry_residual.into(),
                    o.closure_residual.into(),
                ]);
            }
            Report::ok(human, t)
        }
        SphereOrbitOutcome::HeteroclinicSuspected { near_alpha } => {
            let mut human = "heteroclinic-suspected: the crossing map breaks down near\n".to_string();
            for a in &near_alpha {
                human.push_str(&format!("  alpha = {}\n", num(*a)));
                t.push(blank("heteroclinic-suspected", (*a).into()));
            }
            Report::ok(human, t)
        }
        SphereOrbitOutcome::NotFound => {
            t.push(blank("not-found", Field::Empty));
            Report {
                human: "not-found\n".into(),
                table: t,
                failure: Some("no symmetric orbit found within the time budget".into()),
            }
        }
    })
}

pub fn line(r: &Resolved) -> Report {
    let p = frame(r);
    let l = invariant_line(&p);
    let human = if l.present {
        format!(
            "invariant line {} x + {} y + {} = 0 (cofactor degree {}, residual {})\n",
            num(l.c1), num(l.c2), num(l.c3), l.cofactor_degree, num(l.residual)
        )
    } else {
        "no invariant line\n".to_string()
    };
    let mut t = Table::new(&["present", "c1", "c2", "c3", "cofactor_degree", "residual", "direction"]);
    let direction = l.infinite_direction().map_or(Field::Empty, Field::F);
    let residual = if l.residual.is_nan() { Field::Empty } else { l.residual.into() };
    t.push(vec![
        l.present.into(),
        l.c1.into(),
        l.c2.into(),
        l.c3.into(),
        l.cofactor_degree.into(),
        residual,
        direction,
    ]);
    Report::ok(human, t)
}
