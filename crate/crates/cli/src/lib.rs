//! Command-line driver: simulation runs from a config file, the
//! verification suite, and the plane-wave Pendellosung table.

pub mod config;
pub mod output;

use std::io::Write;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use ftt_core::closedform::{pendellosung, DiffractionParams};
use ftt_core::phasefn::PhaseExpr;
use ftt_core::solver::{PicardSolver, SolverRegistry};
use ftt_core::verify::{CheckOptions, CheckRegistry};

use config::{Overrides, RunConfig};
use output::{field_csv, fmt_f64, metrics, output_paths, sha256_hex, write_atomic, RunManifest};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<ftt_core::Error> for CliError {
    fn from(e: ftt_core::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "ftt", version, about = "Fractional Takagi-Taupin diffraction simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve on a grid and write `<name>.csv` plus a `<name>.json` manifest.
    Run(RunArgs),
    /// Run numerical checks of the closed forms and limit lemmas.
    Verify(VerifyArgs),
    /// Print the plane-wave Pendellosung solution as CSV.
    Pendellosung(PendellosungArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phase: Option<String>,
    #[arg(long)]
    pub solver: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated check names; an empty list runs nothing.
    #[arg(long)]
    pub only: Option<String>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub tol_scale: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Size of the random sweeps (at least 20).
    #[arg(long)]
    pub draws: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PendellosungArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub kappa: f64,
    #[arg(long)]
    pub t_max: f64,
    #[arg(long)]
    pub steps: usize,
}

/// Execute a parsed command, writing human-readable output to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run(a) => run(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Pendellosung(a) => pendellosung_table(a, out),
    }
}

fn run(args: RunArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(&args.config)?;
    cfg.apply(&Overrides {
        alpha: args.alpha,
        kappa: args.kappa,
        phase: args.phase,
        solver: args.solver,
        out: args.out,
    });
    let r = cfg.resolve()?;
    let mut registry = SolverRegistry::default();
    registry.register(Box::new(PicardSolver {
        max_iters: r.config.picard_max_iters,
        fix_tol: r.config.picard_tol,
    }));
    let solver = registry.get(&r.config.solver).ok_or_else(|| {
        CliError::Config(format!("unknown solver '{}', available: {}", r.config.solver, registry.names().join(", ")))
    })?;
    solver.supports(&r.params, &r.init).map_err(|e| CliError::Config(e.to_string()))?;

    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
    let clock = Instant::now();
    let field = solver.solve(&r.params, &r.init, &r.grid)?;
    let runtime_seconds = clock.elapsed().as_secs_f64();

    let csv = field_csv(&field)?;
    let metrics = metrics(&field, &r.params, &r.init)?;
    let (csv_path, manifest_path) = output_paths(&r.config);
    std::fs::create_dir_all(&r.config.out).map_err(|e| CliError::Io(format!("{}: {e}", r.config.out.display())))?;
    write_atomic(&csv_path, &csv)?;
    let manifest = RunManifest {
        tool: "ftt",
        version: env!("CARGO_PKG_VERSION"),
        csv_file: csv_path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        config: r.config,
        started_unix,
        runtime_seconds,
        grid_points: r.grid.points(),
        grid_sha256: sha256_hex(&csv),
        metrics,
    };
    let json = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    write_atomic(&manifest_path, &json)?;
    writeln!(
        out,
        "{} ({} points, {:.3} s, max |E| = {:.6e})\n{}",
        csv_path.display(),
        manifest.grid_points,
        runtime_seconds,
        manifest.metrics.max_abs,
        manifest_path.display()
    )
    .map_err(io_err)
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(args.tol_scale >= 0.0) || !args.tol_scale.is_finite() {
        return Err(CliError::Config(format!("--tol-scale must be finite and >= 0, got {}", args.tol_scale)));
    }
    let mut opts = CheckOptions {
        tol_scale: args.tol_scale,
        ..CheckOptions::default()
    };
    if let Some(s) = args.seed {
        opts.seed = s;
    }
    if let Some(d) = args.draws {
        if d < 20 {
            return Err(CliError::Config(format!("--draws must be at least 20, got {d}")));
        }
        opts.draws = d;
    }
    let registry = CheckRegistry::default();
    let selection: Vec<String> = match &args.only {
        Some(list) => list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect(),
        None => registry.names().into_iter().map(String::from).collect(),
    };
    if let Some(bad) = selection.iter().find(|n| registry.get(n).is_none()) {
        return Err(CliError::Config(format!("unknown check '{bad}', available: {}", registry.names().join(", "))));
    }
    let reports = registry.run(&selection, &opts)?;
    writeln!(out, "{:<26} {:>12} {:>12}  status", "check", "residual", "tolerance").map_err(io_err)?;
    for r in &reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{:<26} {:>12.3e} {:>12.3e}  {status}  {}", r.name, r.residual, r.tolerance, r.detail)
            .map_err(io_err)?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    writeln!(out, "{} checks, {failed} failed", reports.len()).map_err(io_err)?;
    if failed > 0 {
        return Err(CliError::Numeric(format!("{failed} of {} checks failed", reports.len())));
    }
    Ok(())
}

fn pendellosung_table(args: PendellosungArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.steps == 0 || !(args.t_max > 0.0) || !args.t_max.is_finite() {
        return Err(CliError::Config(format!("need --steps >= 1 and --t-max > 0, got {} and {}", args.steps, args.t_max)));
    }
    let params = DiffractionParams::new(args.alpha, args.kappa, PhaseExpr::zero()).map_err(|e| CliError::Config(e.to_string()))?;
    writeln!(out, "t,re_e0,im_e0,re_eh,im_eh").map_err(io_err)?;
    for k in 0..=args.steps {
        let t = args.t_max * k as f64 / args.steps as f64;
        let (a, b): (Complex64, Complex64) = pendellosung(&params, t)?;
        writeln!(out, "{},{},{},{},{}", fmt_f64(t), fmt_f64(a.re), fmt_f64(a.im), fmt_f64(b.re), fmt_f64(b.im))
            .map_err(io_err)?;
    }
    Ok(())
}
