//! Command-line front end for `rigid-core`.
//!
//! [`run`] parses arguments, dispatches to a subcommand and returns the
//! process exit code: 0 on success, 1 for input errors, 2 for numerical
//! failures.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;
pub mod portrait;
pub mod sweep;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use commands::Report;
use output::Table;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "rigid: {e}");
            e.exit_code()
        }
    }
}

fn open_out<'a>(path: &Option<std::path::PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, CliError> {
    match path {
        Some(p) => {
            let f = std::fs::File::create(p).map_err(|e| CliError::Io(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(std::io::BufWriter::new(f)))
        }
        None => Ok(Box::new(stdout)),
    }
}

fn emit_table(t: &Table, format: Format, w: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::JsonLines => t.write_json_lines(w),
        _ => t.write_csv(w),
    }
}

fn emit(report: &Report, format: Format, w: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Human => w.write_all(report.human.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
        Format::Csv | Format::JsonLines => emit_table(&report.table, format, w),
        Format::Svg => Err(CliError::Input("svg output is only available for portrait".into())),
    }?;
    match &report.failure {
        Some(m) => Err(CliError::Numerical(m.clone())),
        None => Ok(()),
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let r = config::resolve(&cli.common)?;
    let mut out = open_out(&cli.common.out, stdout)?;
    let result = match &cli.command {
        Command::Normalize => emit(&commands::normalize(&r), r.format, &mut out),
        Command::Center => emit(&commands::center(&r), r.format, &mut out),
        Command::Lyapunov => emit(&commands::lyapunov(&r), r.format, &mut out),
        Command::Line => emit(&commands::line(&r), r.format, &mut out),
        Command::Infinity => emit(&commands::infinity(&r)?, r.format, &mut out),
        Command::Cycles => emit(&commands::cycles(&r)?, r.format, &mut out),
        Command::SphereCycle => emit(&commands::sphere_cycle(&r)?, r.format, &mut out),
        Command::Portrait(a) => {
            if r.params.a4 != 0.0 && a.mode == args::Mode::Sphere {
                let _ = writeln!(stderr, "note: sphere coordinates are those of the frame with a4 = 0");
            }
            let p = portrait::compute(&r, a)?;
            match r.format {
                Format::Svg => out.write_all(portrait::svg(&p).as_bytes()).map_err(|e| CliError::Io(e.to_string())),
                f => emit_table(&portrait::table(&p), f, &mut out),
            }
        }
        Command::Sweep(a) => {
            let samples = match (a.random, &a.grid) {
                (Some(n), None) => sweep::random_samples(n, r.seed, a.scale)?,
                (None, Some(g)) => sweep::grid_samples(g)?,
                _ => return Err(CliError::Input("sweep needs exactly one of --random N or --grid SPEC".into())),
            };
            let mut o = sweep::SweepOptions { settings: r.settings, r_max: r.r_max, grid_n: r.grid_n, ..Default::default() };
            if let Some(t) = r.t_max {
                o.search.t_max = t;
            }
            let records = sweep::run_sweep(&samples, &o, r.jobs)?;
            emit_table(&sweep::table(&records), r.format, &mut out)?;
            let _ = write!(stderr, "{}", sweep::footer(&records));
            let failed = records.iter().filter(|x| x.failed()).count();
            if 2 * failed > records.len() {
                return Err(CliError::Numerical(format!("{failed} of {} samples failed", records.len())));
            }
            Ok(())
        }
    };
    out.flush().map_err(|e| CliError::Io(e.to_string()))?;
    result
}
