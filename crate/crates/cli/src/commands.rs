//! One function per subcommand. Each writes its CSV files under the output
//! directory and returns their paths.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use hrw_core::diffusion::{density_standard, Grid1D};
use hrw_core::observables::{entropy, stationary_entropic_density, MomentSeries};
use hrw_core::{metric_factor, run_ensemble, simulate, DiffusionParams, HomotopyParams, WalkConfig};

use crate::config::{config_error, Settings};
use crate::output::{read_column, Table};

/// Default tolerance on the trapezoidal mass of an emitted density file.
pub const DENSITY_MASS_TOLERANCE: f64 = 1e-6;

/// The four homotopy classes plotted side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Standard,
    Kaniadakis,
    Mixed,
    Tsallis,
}

impl Class {
    pub const ALL: [Class; 4] = [Class::Standard, Class::Kaniadakis, Class::Mixed, Class::Tsallis];

    pub fn name(self) -> &'static str {
        match self {
            Class::Standard => "standard",
            Class::Kaniadakis => "kaniadakis",
            Class::Mixed => "mixed",
            Class::Tsallis => "tsallis",
        }
    }

    /// (γξ, λ) for a class at deformation strength `gamma_xi`.
    pub fn coordinates(self, gamma_xi: f64) -> (f64, f64) {
        match self {
            Class::Standard => (0.0, 0.0),
            Class::Kaniadakis => (gamma_xi, 0.0),
            Class::Mixed => (gamma_xi, 0.5),
            Class::Tsallis => (gamma_xi, 1.0),
        }
    }

    pub fn apply(self, settings: &Settings, gamma_xi: f64) -> Settings {
        let (g, l) = self.coordinates(gamma_xi);
        Settings {
            gamma_xi: g,
            lambda: l,
            ..settings.clone()
        }
    }
}

fn invalid(e: hrw_core::Error) -> anyhow::Error {
    match e {
        hrw_core::Error::InvalidParameter { .. } => config_error(e.to_string()),
        other => other.into(),
    }
}

pub fn warn_if_unphysical(params: &HomotopyParams) {
    if params.exceeds_physical_bound() {
        eprintln!(
            "warning: |gamma*xi| = {} is not below 1; results are computed but lie outside the physical range",
            params.gamma_xi().abs()
        );
    }
}

fn walk_config(s: &Settings) -> anyhow::Result<WalkConfig> {
    let params = s.params()?;
    warn_if_unphysical(&params);
    Ok(WalkConfig::new(s.n_steps, s.p, s.lattice_length(), params)
        .map_err(invalid)?
        .with_seed(s.seed))
}

/// `step,x,u` for one seeded trajectory.
pub fn walk_table(s: &Settings) -> anyhow::Result<Table> {
    let traj = simulate(&walk_config(s)?).map_err(invalid)?;
    let unit = s.length_unit();
    let mut t = Table::new(&["step", "x", "u"]);
    for p in &traj.points {
        t.push(vec![p.index.into(), (p.x / unit).into(), (p.u / unit).into()]);
    }
    Ok(t)
}

pub fn run_walk(s: &Settings, path: &Path) -> anyhow::Result<Vec<PathBuf>> {
    Ok(vec![walk_table(s)?.write(path)?])
}

/// `walker,x,u` final positions, with summary statistics on stdout.
pub fn run_ensemble_command(s: &Settings, path: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let cfg = walk_config(s)?;
    let result = run_ensemble(&cfg, s.walkers).map_err(invalid)?;
    let unit = s.length_unit();
    let mut t = Table::new(&["walker", "x", "u"]);
    for (i, (x, u)) in result.final_x.iter().zip(&result.final_u).enumerate() {
        t.push(vec![i.into(), (x / unit).into(), (u / unit).into()]);
    }
    let stats = result.stats_x();
    println!(
        "walkers={} mean_x={} var_x={} std_error={}",
        stats.count,
        stats.mean / unit,
        stats.variance / (unit * unit),
        stats.std_error / unit
    );
    Ok(vec![t.write(path)?])
}

fn positive_times(s: &Settings) -> anyhow::Result<Vec<f64>> {
    if s.times.iter().any(|t| *t <= 0.0) {
        return Err(config_error("density snapshots need t/T > 0"));
    }
    Ok(s.times.clone())
}

/// Density snapshot on nodes uniform in the deformed coordinate.
pub fn density_table(s: &Settings, t_over_t: f64) -> anyhow::Result<Table> {
    let params = s.params()?;
    let dp = s.diffusion()?;
    let t = t_over_t * dp.t_unit();
    let grid = Grid1D::deformed_uniform(t, s.n_sigma, s.n_nodes, &dp, &params).map_err(invalid)?;
    let unit = s.length_unit();
    let mut table = Table::new(&["x", "p", "t", "gamma_xi", "lambda", "convention"]);
    for &x in grid.nodes() {
        let p = density_standard(x, t, &dp, &params)?;
        table.push(vec![
            (x / unit).into(),
            (p * unit).into(),
            t_over_t.into(),
            s.gamma_xi.into(),
            s.lambda.into(),
            dp.convention().as_str().into(),
        ]);
    }
    Ok(table)
}

/// Trapezoidal integral of the `p` column over `x`.
pub fn csv_mass(text: &str) -> anyhow::Result<f64> {
    let x = read_column(text, "x")?;
    let p = read_column(text, "p")?;
    Ok(x.windows(2)
        .zip(p.windows(2))
        .map(|(x, p)| 0.5 * (x[1] - x[0]) * (p[0] + p[1]))
        .sum())
}

/// Writes a density file and checks its trapezoidal mass.
pub fn write_density(s: &Settings, t_over_t: f64, path: &Path) -> anyhow::Result<PathBuf> {
    let table = density_table(s, t_over_t)?;
    let text = table.render();
    let mass = csv_mass(&text)?;
    let tol = s.tolerance("density_mass", DENSITY_MASS_TOLERANCE);
    if (mass - 1.0).abs() > tol {
        bail!("density at t/T = {t_over_t} integrates to {mass}, outside 1 ± {tol}");
    }
    crate::output::write_atomic(path, text.as_bytes())?;
    Ok(path.to_path_buf())
}

pub fn run_density(s: &Settings, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    positive_times(s)?
        .into_iter()
        .map(|t| write_density(s, t, &dir.join(format!("density_t{t}.csv"))))
        .collect()
}

/// `t,mean,variance,variance_closed_form,entropy`.
pub fn msd_table(s: &Settings) -> anyhow::Result<Table> {
    let params = s.params()?;
    let dp = s.diffusion()?;
    let times: Vec<f64> = s.times.iter().map(|t| t * dp.t_unit()).collect();
    let series = MomentSeries::compute(&times, &dp, &params)?;
    let unit = s.length_unit();
    let mut table = Table::new(&["t", "mean", "variance", "variance_closed_form", "entropy"]);
    for i in 0..series.len() {
        table.push(vec![
            s.times[i].into(),
            (series.mean[i] / unit).into(),
            (series.variance[i] / (unit * unit)).into(),
            (series.variance_closed_form[i] / (unit * unit)).into(),
            series.entropy[i].into(),
        ]);
    }
    Ok(table)
}

pub fn run_msd(s: &Settings, path: &Path) -> anyhow::Result<Vec<PathBuf>> {
    Ok(vec![msd_table(s)?.write(path)?])
}

/// `t,entropy,s_bg,s_medium` for every t > 0.
pub fn entropy_table(s: &Settings) -> anyhow::Result<Table> {
    let params = s.params()?;
    let dp: DiffusionParams = s.diffusion()?;
    let mut table = Table::new(&["t", "entropy", "s_bg", "s_medium"]);
    for &t in s.times.iter().filter(|t| **t > 0.0) {
        let r = entropy(t * dp.t_unit(), &dp, &params).with_context(|| format!("entropy at t/T = {t}"))?;
        table.push(vec![
            t.into(),
            r.total.into(),
            r.boltzmann_gibbs.into(),
            r.medium.into(),
        ]);
    }
    Ok(table)
}

pub fn run_entropy(s: &Settings, path: &Path) -> anyhow::Result<Vec<PathBuf>> {
    Ok(vec![entropy_table(s)?.write(path)?])
}

/// `x,ratio,gamma_xi,lambda` over the configured range, skipping positions
/// outside the domain.
pub fn sed_table(s: &Settings) -> anyhow::Result<Table> {
    let params = s.params()?;
    let (lo, hi) = s.x_range;
    let mut table = Table::new(&["x", "ratio", "gamma_xi", "lambda"]);
    for i in 0..s.n_points {
        let x = lo + (hi - lo) * i as f64 / (s.n_points - 1) as f64;
        let x_raw = x * s.xi;
        if !matches!(metric_factor(x_raw, &params), Ok(g) if g > 0.0)
            || params
                .localization_point()
                .is_some_and(|x0| (x_raw - x0) * params.gamma() <= 0.0)
        {
            continue;
        }
        let sed = stationary_entropic_density(x_raw, s.ln_k, &params).map_err(invalid)?;
        table.push(vec![
            (x_raw / s.length_unit()).into(),
            sed.ratio.into(),
            s.gamma_xi.into(),
            s.lambda.into(),
        ]);
    }
    Ok(table)
}

pub fn run_sed(s: &Settings, path: &Path) -> anyhow::Result<Vec<PathBuf>> {
    Ok(vec![sed_table(s)?.write(path)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Command, FileConfig, Overrides};

    fn settings(command: Command) -> Settings {
        Settings::resolve(&FileConfig::default(), Some(command), &Overrides::default(), None).unwrap()
    }

    #[test]
    fn density_files_integrate_to_one_in_every_class() {
        let base = settings(Command::Density);
        for class in Class::ALL {
            for gx in [0.5, -0.5] {
                let s = class.apply(&base, gx);
                for t in [0.5, 2.0] {
                    let mass = csv_mass(&density_table(&s, t).unwrap().render()).unwrap();
                    assert!(
                        (mass - 1.0).abs() < DENSITY_MASS_TOLERANCE,
                        "{class:?} {gx} {t}: {mass}"
                    );
                }
            }
        }
    }

    #[test]
    fn standard_msd_is_normal_diffusion() {
        let s = Class::Standard.apply(&settings(Command::Msd), 0.5);
        let text = msd_table(&s).unwrap().render();
        let t = read_column(&text, "t").unwrap();
        let v = read_column(&text, "variance").unwrap();
        assert_eq!((t[0], v[0]), (0.0, 0.0));
        for (t, v) in t.iter().zip(&v) {
            assert!((v - 2.0 * t).abs() <= 1e-10);
        }
    }

    #[test]
    fn sed_skips_points_beyond_localization() {
        let s = Class::Tsallis.apply(&settings(Command::Sed), 0.5);
        let text = sed_table(&s).unwrap().render();
        let x = read_column(&text, "x").unwrap();
        assert!(x.iter().all(|x| *x > -2.0));
        assert!(x.len() < 401);
    }

    #[test]
    fn walk_rejects_oversized_step() {
        let mut s = settings(Command::Walk);
        s.l = 3.0;
        let err = walk_table(&s).unwrap_err();
        assert!(err.downcast_ref::<crate::config::ConfigError>().is_some());
    }
}
