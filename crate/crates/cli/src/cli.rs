use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::commands::{self, CheckParams, Overrides};
use crate::instance::InstanceFile;
use crate::report::{RunReport, Status};
use crate::reproduce;

#[derive(Debug, Parser)]
#[command(name = "vi", version, about = "Grid solver and property checker for generalized variational inequalities")]
pub struct Cli {
    /// Seed for sampled checks (overrides the instance file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Grid resolution per axis (overrides the instance file).
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Solution / check tolerance (overrides the instance file).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall time in the report (makes it run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Minimize the sampled gap over the grid; exit 2 if no grid solution.
    Solve { file: PathBuf },
    /// Run a sampled property checker; exit 2 if a violation is found.
    Check {
        file: PathBuf,
        #[arg(long)]
        property: String,
        #[command(flatten)]
        params: CheckArgs,
    },
    /// Fixed point of the instance's `F`; exit 2 if the residual exceeds tol.
    FixedPoint { file: PathBuf },
    /// Re-run a bundled example and compare with its stored expectations.
    Reproduce { id: String },
    /// Write the gap of every grid point as CSV.
    ExportGapField {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

/// Comma-separated coordinates, e.g. `0.5,-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coords(pub Vec<f64>);

impl std::str::FromStr for Coords {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}")))
            .collect::<Result<_, _>>()
            .map(Coords)
    }
}

#[derive(Debug, Default, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub t_samples: Option<usize>,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub strict_margin: Option<f64>,
    /// iS_subset_iM or iM_subset_iS (minty only).
    #[arg(long)]
    pub direction: Option<String>,
    /// Forced trial point x, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<Coords>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<Coords>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Forced hull / KKM point; repeat for each point.
    #[arg(long = "point", allow_hyphen_values = true)]
    pub points: Vec<Coords>,
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<Coords>,
    /// Minty candidate point; repeat for several.
    #[arg(long = "candidate", allow_hyphen_values = true)]
    pub candidates: Vec<Coords>,
    /// Deterministic 1-D scan over this many lattice points (ql, strict_ql).
    #[arg(long)]
    pub dense: Option<usize>,
    /// Sample-check the inclusion's hypotheses with this many trials (minty).
    #[arg(long)]
    pub hypothesis_trials: Option<usize>,
}

impl From<CheckArgs> for CheckParams {
    fn from(a: CheckArgs) -> Self {
        CheckParams {
            trials: a.trials,
            t_samples: a.t_samples,
            n_points: a.n_points,
            strict_margin: a.strict_margin,
            direction: a.direction,
            x: a.x.map(|c| c.0),
            y: a.y.map(|c| c.0),
            t: a.t,
            points: a.points.into_iter().map(|c| c.0).collect(),
            weights: a.weights.map(|c| c.0),
            candidates: a.candidates.into_iter().map(|c| c.0).collect(),
            dense: a.dense,
            hypothesis_trials: a.hypothesis_trials,
        }
    }
}

/// Executes a parsed command and returns its report.
pub fn execute(cli: Cli, echo: Vec<String>) -> Result<RunReport> {
    let ov = Overrides {
        seed: cli.seed,
        resolution: cli.resolution,
        tol: cli.tol,
    };
    let started = Instant::now();
    let (digest, (status, payload)) = match cli.command {
        Command::Solve { file } => {
            let f = InstanceFile::load(&file)?;
            (Some(f.digest()), commands::solve(&f, &ov)?)
        }
        Command::Check { file, property, params } => {
            let f = InstanceFile::load(&file)?;
            (Some(f.digest()), commands::check(&f, &property, &params.into(), &ov)?)
        }
        Command::FixedPoint { file } => {
            let f = InstanceFile::load(&file)?;
            (Some(f.digest()), commands::fixed_point(&f, &ov)?)
        }
        Command::Reproduce { id } => (None, reproduce::reproduce(&id)?),
        Command::ExportGapField { file, output } => {
            let f = InstanceFile::load(&file)?;
            (Some(f.digest()), commands::export_gap_field(&f, &output, &ov)?)
        }
    };
    let mut report = RunReport::new(echo, digest, status, payload);
    let elapsed = started.elapsed().as_secs_f64();
    if cli.timing {
        report.wall_time_s = Some(elapsed);
    } else {
        eprintln!("wall time: {elapsed:.3} s");
    }
    Ok(report)
}

fn emit(report: &RunReport, out: Option<&PathBuf>) -> Result<()> {
    let text = report.to_json();
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// Full command-line entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let out = cli.out.clone();
    match execute(cli, echo).and_then(|r| emit(&r, out.as_ref()).map(|_| r)) {
        Ok(report) => match report.exit_code {
            0 => Status::Success.code(),
            _ => Status::Negative.code(),
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
