//! Command-line surface. Exit status: 0 on success, 1 when a command or a
//! validation check fails, 2 for configuration errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hrw_core::VarianceConvention;

use crate::commands;
use crate::config::{
    config_error, parse_tolerance, Command, ConfigError, FileConfig, Overrides, Settings, OUT_DIR_ENV,
};
use crate::figures::run_figure;
use crate::validate::{self, ValidateOptions};

#[derive(Debug, Parser)]
#[command(name = "hrw", version, about = "Homotopic random walks and their diffusion")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Deformation strength γξ.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma_xi: Option<f64>,
    /// Homotopy parameter λ in [0, 1].
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Probability of a right step.
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long, global = true)]
    pub n_steps: Option<usize>,
    /// Lattice length in units of ξ.
    #[arg(long, global = true)]
    pub l: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub walkers: Option<usize>,
    /// Time in units of T = ξ²/Γ.
    #[arg(long = "t-over-T", global = true)]
    pub t_over_t: Option<f64>,
    /// heat-kernel (σ² = 2Γt) or paper-literal (σ² = Γt).
    #[arg(long, global = true)]
    pub convention: Option<VarianceConvention>,
    /// Output directory.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out: Option<PathBuf>,
    /// Tolerance override, NAME=VALUE; repeatable.
    #[arg(long = "tol", global = true, value_parser = parse_tolerance)]
    pub tol: Vec<(String, f64)>,
    /// TOML experiment file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Length unit ξ.
    #[arg(long, global = true)]
    pub xi: Option<f64>,
    /// Emit lengths in raw units instead of units of ξ.
    #[arg(long, global = true)]
    pub raw_units: bool,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// One seeded trajectory: step,x,u.
    Walk,
    /// Final positions of many walkers.
    Ensemble,
    /// Analytic density snapshots.
    Density,
    /// Mean, variance and entropy over time.
    Msd,
    /// Entropy and its Boltzmann–Gibbs and medium parts.
    Entropy,
    /// Stationary entropic density ratio over x.
    Sed,
    /// Data for one of the standard plots.
    Figures {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=6))]
        number: u8,
    },
    /// Runs the invariant suite and writes validate.json.
    Validate,
}

impl Sub {
    fn command(&self) -> Option<Command> {
        match self {
            Sub::Walk => Some(Command::Walk),
            Sub::Ensemble => Some(Command::Ensemble),
            Sub::Density => Some(Command::Density),
            Sub::Msd => Some(Command::Msd),
            Sub::Entropy => Some(Command::Entropy),
            Sub::Sed => Some(Command::Sed),
            Sub::Figures { .. } | Sub::Validate => None,
        }
    }
}

fn settings(cli: &Cli) -> anyhow::Result<Settings> {
    let g = &cli.global;
    let file = match &g.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let overrides = Overrides {
        gamma_xi: g.gamma_xi,
        lambda: g.lambda,
        p: g.p,
        n_steps: g.n_steps,
        l: g.l,
        seed: g.seed,
        walkers: g.walkers,
        t_over_t: g.t_over_t,
        convention: g.convention,
        out: g.out.clone(),
        tolerances: g.tol.clone(),
        xi: g.xi,
        raw_units: g.raw_units,
    };
    // the env var is already folded into --out by clap
    Settings::resolve(&file, cli.command.command(), &overrides, None)
}

fn check_tolerance_names(s: &Settings) -> anyhow::Result<()> {
    for name in s.tolerances.keys() {
        if name != "density_mass" && !validate::is_known_check(name) {
            return Err(config_error(format!("unknown tolerance `{name}`")));
        }
    }
    Ok(())
}

/// Runs a parsed command line; the error carries the exit status.
pub fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let s = settings(cli)?;
    check_tolerance_names(&s)?;
    let out = s.out_dir.clone();
    let files = match &cli.command {
        Sub::Walk => commands::run_walk(&s, &out.join("walk.csv"))?,
        Sub::Ensemble => commands::run_ensemble_command(&s, &out.join("ensemble.csv"))?,
        Sub::Density => commands::run_density(&s, &out)?,
        Sub::Msd => commands::run_msd(&s, &out.join("msd.csv"))?,
        Sub::Entropy => commands::run_entropy(&s, &out.join("entropy.csv"))?,
        Sub::Sed => commands::run_sed(&s, &out.join("sed.csv"))?,
        Sub::Figures { number } => run_figure(*number, &s, &out)?,
        Sub::Validate => {
            let opts = ValidateOptions {
                tolerances: s.tolerances.clone(),
                seed: s.seed,
                ..ValidateOptions::default()
            };
            let report = validate::run(&opts);
            let json = serde_json::to_string_pretty(&report)?;
            crate::output::write_atomic(&out.join("validate.json"), json.as_bytes())?;
            println!("{json}");
            for c in report.failures() {
                eprintln!("FAILED {}: measured {} against {}", c.name, c.measured, c.tolerance);
            }
            return Ok(report.passed);
        }
    };
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    Ok(true)
}

/// Parses `args`, runs, and maps the outcome to an exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) if e.downcast_ref::<ConfigError>().is_some() => {
            eprintln!("{e:#}");
            2
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
