use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "rigid", version, about = "Analysis of the rigid planar family x' = -y + xF, y' = x + yF")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Unset flags fall back to `--config`,
/// then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Coefficient of x in F.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b1: Option<f64>,
    /// Coefficient of y in F.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b2: Option<f64>,
    /// Coefficient of x³ in F.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a1: Option<f64>,
    /// Coefficient of x²y in F.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a2: Option<f64>,
    /// Coefficient of xy² in F.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a3: Option<f64>,
    /// Coefficient of y³ in F.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a4: Option<f64>,
    /// Relative tolerance of the integrator.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance of the integrator.
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Outer radius of the limit-cycle scan.
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    /// Number of radii in the limit-cycle scan.
    #[arg(long, global = true)]
    pub grid_n: Option<usize>,
    /// Time budget of a single orbit on the sphere.
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    /// Output format; `svg` applies to `portrait`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// `key = value` file with any of the flags above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for `sweep`.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for `sweep --random`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write machine output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    JsonLines,
    Svg,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Rotate the frame so that a4 = 0.
    Normalize,
    /// Classify the origin.
    Center,
    /// First two Lyapunov constants.
    Lyapunov,
    /// Singular points at infinity.
    Infinity,
    /// Limit cycles from the return map of the Abel equation.
    Cycles,
    /// Antipodally symmetric periodic orbit crossing the equator.
    SphereCycle,
    /// Invariant straight line.
    Line,
    /// Sampled orbits as CSV or SVG.
    Portrait(PortraitArgs),
    /// Tabulate the analyses over random or gridded parameters.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Mode {
    #[default]
    Plane,
    Sphere,
}

#[derive(Debug, Clone, Args)]
#[command(next_display_order = None)]
pub struct PortraitArgs {
    #[arg(long, value_enum, default_value_t = Mode::Plane)]
    pub mode: Mode,
    /// Initial point, `x,y` or on the sphere also `z1,z2,z3`; repeatable.
    #[arg(long = "start", allow_hyphen_values = true)]
    pub starts: Vec<String>,
    /// Integration time; defaults to 2π in the plane and 50 on the sphere.
    #[arg(long)]
    pub t_span: Option<f64>,
    /// Samples per planar orbit.
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    /// Add the symmetric equator-crossing orbit (sphere mode).
    #[arg(long)]
    pub overlay_cycle: bool,
}

#[derive(Debug, Clone, Args)]
#[command(next_display_order = None)]
pub struct SweepArgs {
    /// Number of uniformly random samples (uses `--seed`).
    #[arg(long, conflicts_with = "grid")]
    pub random: Option<usize>,
    /// Grid such as `b1=-1:1:3,b2=0.5,a1=1,a2=-2:2:5,a3=1`; `lo:hi:n` ranges,
    /// single values and omitted keys (zero) may be mixed.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Half-width of the random parameter box.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
}
