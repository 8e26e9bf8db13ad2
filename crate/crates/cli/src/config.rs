//! Experiment configuration: an optional TOML file with one table per
//! command, overridden key by key by command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use hrw_core::{DiffusionParams, HomotopyParams, VarianceConvention};
use serde::Deserialize;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "HRW_OUT_DIR";

/// A configuration problem; the CLI exits with status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    pub gamma_xi: Option<f64>,
    pub lambda: Option<f64>,
    pub p: Option<f64>,
    pub n_steps: Option<usize>,
    pub l: Option<f64>,
    pub seed: Option<u64>,
    pub walkers: Option<usize>,
    pub t_over_t: Option<f64>,
    pub times: Option<Vec<f64>>,
    pub t_max: Option<f64>,
    pub n_times: Option<usize>,
    pub convention: Option<VarianceConvention>,
    pub n_nodes: Option<usize>,
    pub n_sigma: Option<f64>,
    pub ln_k: Option<f64>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub n_points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub xi: Option<f64>,
    pub raw_units: Option<bool>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub walk: PhysicsSection,
    #[serde(default)]
    pub ensemble: PhysicsSection,
    #[serde(default)]
    pub density: PhysicsSection,
    #[serde(default)]
    pub msd: PhysicsSection,
    #[serde(default)]
    pub entropy: PhysicsSection,
    #[serde(default)]
    pub sed: PhysicsSection,
}

impl FileConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        toml::from_str(text).map_err(|e| config_error(e.to_string()))
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn section(&self, command: Command) -> &PhysicsSection {
        match command {
            Command::Walk => &self.walk,
            Command::Ensemble => &self.ensemble,
            Command::Density => &self.density,
            Command::Msd => &self.msd,
            Command::Entropy => &self.entropy,
            Command::Sed => &self.sed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Walk,
    Ensemble,
    Density,
    Msd,
    Entropy,
    Sed,
}

/// Values given on the command line; `None` falls back to the file, then to
/// the built-in default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub gamma_xi: Option<f64>,
    pub lambda: Option<f64>,
    pub p: Option<f64>,
    pub n_steps: Option<usize>,
    pub l: Option<f64>,
    pub seed: Option<u64>,
    pub walkers: Option<usize>,
    pub t_over_t: Option<f64>,
    pub convention: Option<VarianceConvention>,
    pub out: Option<PathBuf>,
    pub tolerances: Vec<(String, f64)>,
    pub xi: Option<f64>,
    pub raw_units: bool,
}

/// Parses `NAME=VALUE`.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("tolerance `{name}`: {e}"))?;
    if !(value >= 0.0) {
        return Err(format!("tolerance `{name}` must be non-negative"));
    }
    Ok((name.trim().to_string(), value))
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub gamma_xi: f64,
    pub lambda: f64,
    pub xi: f64,
    pub p: f64,
    pub n_steps: usize,
    pub l: f64,
    pub seed: u64,
    pub walkers: usize,
    pub times: Vec<f64>,
    pub convention: VarianceConvention,
    pub n_nodes: usize,
    pub n_sigma: f64,
    pub ln_k: f64,
    pub x_range: (f64, f64),
    pub n_points: usize,
    pub out_dir: PathBuf,
    pub raw_units: bool,
    pub tolerances: BTreeMap<String, f64>,
}

impl Settings {
    pub fn resolve(
        file: &FileConfig,
        command: Option<Command>,
        cli: &Overrides,
        env_out: Option<PathBuf>,
    ) -> anyhow::Result<Self> {
        let empty = PhysicsSection::default();
        let s = command.map_or(&empty, |c| file.section(c));
        let times = match (cli.t_over_t, &s.times, s.t_over_t) {
            (Some(t), _, _) => vec![t],
            (None, Some(ts), _) => ts.clone(),
            (None, None, Some(t)) => vec![t],
            (None, None, None) => match command {
                Some(Command::Density) => vec![0.5, 2.0],
                Some(Command::Msd) | Some(Command::Entropy) => {
                    let t_max = s.t_max.unwrap_or(5.0);
                    let n = s.n_times.unwrap_or(51);
                    if n < 2 || !(t_max > 0.0) {
                        return Err(config_error("need n_times ≥ 2 and t_max > 0"));
                    }
                    (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
                }
                _ => vec![0.5],
            },
        };
        let mut tolerances = file.tolerances.clone();
        tolerances.extend(cli.tolerances.iter().cloned());
        let settings = Self {
            gamma_xi: cli.gamma_xi.or(s.gamma_xi).unwrap_or(0.5),
            lambda: cli.lambda.or(s.lambda).unwrap_or(0.5),
            xi: cli.xi.or(file.xi).unwrap_or(1.0),
            p: cli.p.or(s.p).unwrap_or(0.5),
            n_steps: cli.n_steps.or(s.n_steps).unwrap_or(100),
            l: cli.l.or(s.l).unwrap_or(1.0),
            seed: cli.seed.or(s.seed).or(file.seed).unwrap_or(0),
            walkers: cli.walkers.or(s.walkers).unwrap_or(10_000),
            times,
            convention: cli.convention.or(s.convention).unwrap_or_default(),
            n_nodes: s.n_nodes.unwrap_or(8001),
            n_sigma: s.n_sigma.unwrap_or(6.0),
            ln_k: s.ln_k.unwrap_or(hrw_core::observables::DEFAULT_LN_K),
            x_range: (s.x_min.unwrap_or(-10.0), s.x_max.unwrap_or(10.0)),
            n_points: s.n_points.unwrap_or(401),
            out_dir: cli
                .out
                .clone()
                .or_else(|| file.out_dir.clone())
                .or(env_out)
                .unwrap_or_else(|| PathBuf::from("out")),
            raw_units: cli.raw_units || file.raw_units.unwrap_or(false),
            tolerances,
        };
        settings.check()?;
        Ok(settings)
    }

    fn check(&self) -> anyhow::Result<()> {
        if self.n_nodes < 3 {
            return Err(config_error("n_nodes must be at least 3"));
        }
        if self.n_points < 2 {
            return Err(config_error("n_points must be at least 2"));
        }
        if !(self.x_range.0 < self.x_range.1) {
            return Err(config_error("x_min must be below x_max"));
        }
        if !(self.n_sigma > 0.0) {
            return Err(config_error("n_sigma must be positive"));
        }
        if self.times.iter().any(|t| !(*t >= 0.0)) {
            return Err(config_error("times must be non-negative"));
        }
        Ok(())
    }

    pub fn params(&self) -> anyhow::Result<HomotopyParams> {
        HomotopyParams::from_gamma_xi(self.gamma_xi, self.lambda, self.xi).map_err(|e| config_error(e.to_string()))
    }

    /// Γ = ξ²/T with T = 1.
    pub fn diffusion(&self) -> anyhow::Result<DiffusionParams> {
        DiffusionParams::normalized(self.xi, self.convention).map_err(|e| config_error(e.to_string()))
    }

    /// Lattice length in raw units.
    pub fn lattice_length(&self) -> f64 {
        self.l * self.xi
    }

    /// Scale dividing emitted lengths.
    pub fn length_unit(&self) -> f64 {
        if self.raw_units {
            1.0
        } else {
            self.xi
        }
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}
