//! Batch evaluation over many parameter sets.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rigid_core::sphere::{find_symmetric_periodic_orbit_with, infinity_summary, OrbitSearchOptions};
use rigid_core::{
    center_condition, check_no_limit_cycles, classify_infinity, discriminant, find_limit_cycles, invariant_line,
    AbelCoeffs, IntegratorSettings, RigidError, RigidParams, SphereOrbitOutcome,
};
use serde::{Serialize, Serializer};

use crate::output::{Field, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleCount {
    Count(usize),
    /// Every scanned orbit escapes, so nothing was counted.
    EscapeLimited,
    Failed,
}

impl fmt::Display for CycleCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleCount::Count(n) => write!(f, "{n}"),
            CycleCount::EscapeLimited => f.write_str("escape-limited"),
            CycleCount::Failed => f.write_str("error"),
        }
    }
}

impl Serialize for CycleCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CycleCount::Count(n) => s.serialize_u64(*n as u64),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SphereOrbitStatus {
    Found,
    NotFound,
    HeteroclinicSuspected,
    CenterAnnulus,
    Error,
}

impl SphereOrbitStatus {
    pub fn name(self) -> &'static str {
        match self {
            SphereOrbitStatus::Found => "found",
            SphereOrbitStatus::NotFound => "not-found",
            SphereOrbitStatus::HeteroclinicSuspected => "heteroclinic-suspected",
            SphereOrbitStatus::CenterAnnulus => "center-annulus",
            SphereOrbitStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub params: RigidParams,
    pub d_sign: i8,
    pub cusps: usize,
    pub two_hyp_two_par: usize,
    pub center_class: &'static str,
    pub no_cycle_certificate: bool,
    pub n_planar_cycles: CycleCount,
    /// Largest scanned radius whose orbit returned; unset for centers.
    pub r_scanned: Option<f64>,
    pub sphere_orbit: SphereOrbitStatus,
    /// Equator crossings of the first orbit found.
    pub sphere_crossings: Option<usize>,
    pub invariant_line: bool,
}

impl SweepRecord {
    pub fn failed(&self) -> bool {
        self.n_planar_cycles == CycleCount::Failed || self.sphere_orbit == SphereOrbitStatus::Error
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub settings: IntegratorSettings,
    pub r_max: f64,
    pub grid_n: usize,
    pub search: OrbitSearchOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            settings: IntegratorSettings::default(),
            r_max: 5.0,
            grid_n: 256,
            search: sweep_search_options(),
        }
    }
}

/// A lighter orbit search than the single-system default; a sample it
/// misses shows up as `not-found` rather than slowing the whole sweep.
pub fn sweep_search_options() -> OrbitSearchOptions {
    OrbitSearchOptions { t_max: 500.0, initial_grid: 32, max_grid: 256, ..Default::default() }
}

/// `n` samples uniform in `[-scale, scale]^5`, drawn in order from one stream.
pub fn random_samples(n: usize, seed: u64, scale: f64) -> Result<Vec<RigidParams>, CliError> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(CliError::Input(format!("scale must be positive, got {scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-scale..scale));
        let p = RigidParams::new(v[0], v[1], v[2], v[3], v[4]).expect("finite draws");
        if !p.is_degenerate() {
            out.push(p);
        }
    }
    Ok(out)
}

fn parse_axis(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Input(format!("invalid grid range {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![v.trim().parse().map_err(|_| bad())?]),
        [lo, hi, n] => {
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            match n {
                0 => Err(bad()),
                1 => Ok(vec![lo]),
                _ => Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()),
            }
        }
        _ => Err(bad()),
    }
}

/// Cartesian product over `key=range` items; the last key varies fastest.
pub fn grid_samples(spec: &str) -> Result<Vec<RigidParams>, CliError> {
    const KEYS: [&str; 5] = ["b1", "b2", "a1", "a2", "a3"];
    let mut axes: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0]);
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("grid item {item:?} is not key=range")))?;
        let i = KEYS
            .iter()
            .position(|key| *key == k.trim())
            .ok_or_else(|| CliError::Input(format!("unknown grid key {:?}", k.trim())))?;
        axes[i] = parse_axis(v)?;
    }
    let mut out = vec![[0.0; 5]];
    for (i, axis) in axes.iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|v| {
                axis.iter().map(move |x| {
                    let mut w = v;
                    w[i] = *x;
                    w
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|v| RigidParams::new(v[0], v[1], v[2], v[3], v[4]).map_err(|e| CliError::Input(e.to_string())))
        .collect()
}

/// Hyperbolic cycles among the radii that return, and the largest such
/// radius. Cycles cannot lie beyond the first escaping radius, since larger
/// orbits escape first, but the last grid cell before it stays unresolved.
fn planar_cycles(p: &RigidParams, o: &SweepOptions) -> (CycleCount, Option<f64>) {
    match find_limit_cycles(&AbelCoeffs::from(p), o.r_max, o.grid_n, &o.settings) {
        Ok(set) if set.r_max_searched == 0.0 => (CycleCount::EscapeLimited, Some(0.0)),
        Ok(set) => (CycleCount::Count(set.cycles.len()), Some(set.r_max_searched)),
        Err(_) => (CycleCount::Failed, None),
    }
}

pub fn analyze(p: &RigidParams, o: &SweepOptions) -> SweepRecord {
    let d = discriminant(p);
    let d_sign = if d > 0.0 {
        1
    } else if d < 0.0 {
        -1
    } else {
        0
    };
    let summary = classify_infinity(p).map(|pts| infinity_summary(&pts)).unwrap_or_default();
    let class = center_condition(p);
    let (n_planar_cycles, r_scanned, sphere_orbit, sphere_crossings) = if class.is_center() {
        (CycleCount::Count(0), None, SphereOrbitStatus::CenterAnnulus, None)
    } else {
        let (status, crossings) = match find_symmetric_periodic_orbit_with(p, &o.settings, &o.search) {
            Ok(SphereOrbitOutcome::Found { orbits }) => {
                (SphereOrbitStatus::Found, orbits.first().map(|x| x.crossing_count))
            }
            Ok(SphereOrbitOutcome::NotFound) => (SphereOrbitStatus::NotFound, None),
            Ok(SphereOrbitOutcome::HeteroclinicSuspected { .. }) => (SphereOrbitStatus::HeteroclinicSuspected, None),
            Err(RigidError::CenterFamily) => (SphereOrbitStatus::CenterAnnulus, None),
            Err(_) => (SphereOrbitStatus::Error, None),
        };
        let (n, r) = planar_cycles(p, o);
        (n, r, status, crossings)
    };
    SweepRecord {
        params: *p,
        d_sign,
        cusps: summary.cusps,
        two_hyp_two_par: summary.two_hyp_two_par,
        center_class: class.name(),
        no_cycle_certificate: check_no_limit_cycles(&p.to_raw()),
        n_planar_cycles,
        r_scanned,
        sphere_orbit,
        sphere_crossings,
        invariant_line: invariant_line(p).present,
    }
}

/// Evaluates on `jobs` threads; records come back in input order.
pub fn run_sweep(samples: &[RigidParams], o: &SweepOptions, jobs: usize) -> Result<Vec<SweepRecord>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(pool.install(|| samples.par_iter().map(|p| analyze(p, o)).collect()))
}

pub fn table(records: &[SweepRecord]) -> Table {
    let mut t = Table::new(&[
        "b1",
        "b2",
        "a1",
        "a2",
        "a3",
        "d_sign",
        "cusps",
        "two_hyp_two_par",
        "center_class",
        "no_cycle_certificate",
        "n_planar_cycles",
        "r_scanned",
        "sphere_orbit",
        "sphere_crossings",
        "invariant_line",
    ]);
    for r in records {
        let p = r.params;
        let cycles = match r.n_planar_cycles {
            CycleCount::Count(n) => n.into(),
            other => other.to_string().into(),
        };
        t.push(vec![
            p.b1.into(),
            p.b2.into(),
            p.a1.into(),
            p.a2.into(),
            p.a3.into(),
            Field::I(r.d_sign.into()),
            r.cusps.into(),
            r.two_hyp_two_par.into(),
            r.center_class.into(),
            r.no_cycle_certificate.into(),
            cycles,
            r.r_scanned.map_or(Field::Empty, Field::F),
            r.sphere_orbit.name().into(),
            r.sphere_crossings.map_or(Field::Empty, Field::from),
            r.invariant_line.into(),
        ]);
    }
    t
}

/// Counts per category, for standard error.
pub fn footer(records: &[SweepRecord]) -> String {
    let count = |f: &dyn Fn(&SweepRecord) -> bool| records.iter().filter(|r| f(r)).count();
    let mut lines = vec![format!("{} samples", records.len())];
    lines.push(format!(
        "  discriminant: negative {}, zero {}, positive {}",
        count(&|r| r.d_sign < 0),
        count(&|r| r.d_sign == 0),
        count(&|r| r.d_sign > 0)
    ));
    lines.push(format!("  centers: {}", count(&|r| r.center_class != "NotCenter")));
    let max_cycles = records
        .iter()
        .filter_map(|r| match r.n_planar_cycles {
            CycleCount::Count(n) => Some(n),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut by_count = Vec::new();
    for n in 0..=max_cycles {
        by_count.push(format!("{n}: {}", count(&|r| r.n_planar_cycles == CycleCount::Count(n))));
    }
    by_count.push(format!("escape-limited: {}", count(&|r| r.n_planar_cycles == CycleCount::EscapeLimited)));
    lines.push(format!("  planar limit cycles per sample: {}", by_count.join(", ")));
    let statuses = [
        SphereOrbitStatus::Found,
        SphereOrbitStatus::NotFound,
        SphereOrbitStatus::HeteroclinicSuspected,
        SphereOrbitStatus::CenterAnnulus,
    ];
    let parts: Vec<String> =
        statuses.iter().map(|s| format!("{} {}", s.name(), count(&|r| r.sphere_orbit == *s))).collect();
    lines.push(format!("  equator-crossing orbit: {}", parts.join(", ")));
    lines.push(format!("  invariant lines: {}", count(&|r| r.invariant_line)));
    lines.push(format!("  numerical failures: {}", count(&|r| r.failed())));
    lines.join("\n") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_a_cartesian_product() {
        let g = grid_samples("b1=0:1:3, a1=1, a3=-1:1:2").unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0].as_array(), [0.0, 0.0, 1.0, 0.0, -1.0]);
        assert_eq!(g[1].as_array(), [0.0, 0.0, 1.0, 0.0, 1.0]);
        assert_eq!(g[5].as_array(), [1.0, 0.0, 1.0, 0.0, 1.0]);
        assert!(grid_samples("b7=1").is_err());
        assert!(grid_samples("b1=1:2").is_err());
        assert!(grid_samples("b1=0:1:0").is_err());
    }

    #[test]
    fn random_samples_are_reproducible() {
        let a = random_samples(10, 7, 1.0).unwrap();
        assert_eq!(a, random_samples(10, 7, 1.0).unwrap());
        assert_ne!(a, random_samples(10, 8, 1.0).unwrap());
        assert!(a.iter().all(|p| p.max_norm() <= 1.0));
    }

    #[test]
    fn centers_have_no_isolated_cycles() {
        let p = RigidParams::new(0.0, 0.0, 1.0, -1.0, 2.0).unwrap();
        let r = analyze(&p, &SweepOptions::default());
        assert_eq!(r.n_planar_cycles, CycleCount::Count(0));
        assert_eq!(r.sphere_orbit, SphereOrbitStatus::CenterAnnulus);
    }
}
