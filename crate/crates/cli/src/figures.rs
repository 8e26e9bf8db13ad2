//! Presets regenerating the data behind the six standard plots: walker paths,
//! density snapshots for both signs of γ, moment series and the stationary
//! entropic density ratio.

use std::path::{Path, PathBuf};

use anyhow::bail;

use crate::commands::{msd_table, run_walk, sed_table, write_density, Class};
use crate::config::Settings;

/// |γξ| used by every deformed preset.
pub const PRESET_GAMMA_XI: f64 = 0.5;

/// Times t/T of the density snapshots.
pub const SNAPSHOT_TIMES: [f64; 2] = [0.5, 2.0];

pub fn run_figure(number: u8, base: &Settings, out: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let dir = out.join(format!("fig{number}"));
    match number {
        1 => {
            let s = Settings {
                p: 0.5,
                n_steps: 100,
                l: 1.0,
                ..Class::Standard.apply(base, 0.0)
            };
            run_walk(&s, &dir.join("walk_standard.csv"))
        }
        2 => {
            let mut files = Vec::new();
            for class in Class::ALL {
                let s = Settings {
                    p: 0.5,
                    l: 1.0,
                    ..class.apply(base, PRESET_GAMMA_XI)
                };
                files.extend(run_walk(&s, &dir.join(format!("walk_{}.csv", class.name())))?);
            }
            Ok(files)
        }
        3 | 4 => {
            let gx = if number == 3 { PRESET_GAMMA_XI } else { -PRESET_GAMMA_XI };
            let mut files = Vec::new();
            for class in Class::ALL {
                let s = class.apply(base, gx);
                for t in SNAPSHOT_TIMES {
                    let path = dir.join(format!("density_{}_t{t}.csv", class.name()));
                    files.push(write_density(&s, t, &path)?);
                }
            }
            Ok(files)
        }
        5 => {
            let times: Vec<f64> = (0..=50).map(|i| 0.1 * i as f64).collect();
            let mut files = Vec::new();
            for class in Class::ALL {
                let s = Settings {
                    times: times.clone(),
                    ..class.apply(base, PRESET_GAMMA_XI)
                };
                files.push(msd_table(&s)?.write(&dir.join(format!("msd_{}.csv", class.name())))?);
            }
            Ok(files)
        }
        6 => {
            let mut files = Vec::new();
            for class in [Class::Kaniadakis, Class::Mixed, Class::Tsallis] {
                for (sign, gx) in [("pos", PRESET_GAMMA_XI), ("neg", -PRESET_GAMMA_XI)] {
                    let s = Settings {
                        x_range: (-10.0, 10.0),
                        ln_k: hrw_core::observables::DEFAULT_LN_K,
                        ..class.apply(base, gx)
                    };
                    let path = dir.join(format!("sed_{}_{sign}.csv", class.name()));
                    files.push(sed_table(&s)?.write(&path)?);
                }
            }
            Ok(files)
        }
        other => bail!(crate::config::ConfigError(format!("no figure {other}; choose 1 to 6"))),
    }
}
