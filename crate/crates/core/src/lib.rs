//! Homotopic random walks and their inhomogeneous diffusion.
//!
//! * [`algebra`]: the deformation map, its inverse, the homotopic sum and the
//!   deformed derivative and integral.
//! * [`walk`]: seeded walker simulation, exact finite-n distribution, the
//!   characteristic time and long-time regimes.
//! * [`ensemble`]: many independent walkers, run in parallel with the
//!   `parallel` feature.
//! * [`diffusion`]: analytic densities in both frames, a conservative
//!   Crank–Nicolson integrator and the van Kampen profiles.
//! * [`observables`]: moments, entropy and the stationary entropic density.

// `!(a < b)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod diffusion;
pub mod ensemble;
pub mod error;
pub mod observables;
pub mod par;
pub mod quadrature;
pub mod walk;

pub use algebra::{
    deform, deformed_derivative, deformed_integral, homotopic_sum, inverse_deform, metric_factor, pdm_mass_ratio,
    DeformedCoordinate, HomotopyParams,
};
pub use diffusion::{
    continuum_limit_check, density_deformed, density_standard, fd_integrate, van_kampen_profiles, DensityField,
    DiffusionParams, FdOptions, Grid1D, TimeScheme, VarianceConvention,
};
pub use ensemble::{run_ensemble, EnsembleResult, EnsembleStats};
pub use error::{Error, Result};
pub use observables::{
    entropy, moments_closed_form, moments_quadrature, stationary_entropic_density, EntropyReport, MomentSeries, Moments,
};
pub use walk::{
    asymptotic_position, characteristic_time, classify_regime, exact_walk_distribution, expected_deformed_step,
    simulate, step_lengths, RegimeClassification, RegimeKind, Trajectory, WalkConfig,
};
