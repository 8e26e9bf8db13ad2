//! Diffusion of the homotopic walk.
//!
//! In the deformed coordinate the density obeys the plain heat equation and
//! the free solution is a centred Gaussian. In standard space the same
//! density reads `P(x,t) = 𝒫(u(x),t) / g(x)` and solves
//!
//! ```text
//! ∂P/∂t = Γ ∂x[ g ∂x( g P ) ]
//! ```
//!
//! which is van Kampen's equation with zero drift and mobility and
//! temperature profiles both proportional to `g`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{deform, inverse_deform, metric_factor, DeformedCoordinate, HomotopyParams};
use crate::error::{Error, Result};
use crate::walk::step_lengths;

/// Width of the excluded sliver next to the Tsallis localization point, in
/// units of ξ.
pub const DEFAULT_BOUNDARY_GUARD: f64 = 1e-3;

/// Warm-start time t₀/T standing in for a delta initial condition.
pub const DEFAULT_WARM_START: f64 = 0.05;

/// Which variance the free Gaussian in the deformed coordinate carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceConvention {
    /// σ² = 2Γt, the solution of ∂𝒫/∂t = Γ ∂²𝒫/∂u².
    #[default]
    HeatKernel,
    /// σ² = Γt, the Gaussian as printed alongside the equation.
    PaperLiteral,
}

impl VarianceConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            VarianceConvention::HeatKernel => "heat-kernel",
            VarianceConvention::PaperLiteral => "paper-literal",
        }
    }

    fn factor(self) -> f64 {
        match self {
            VarianceConvention::HeatKernel => 2.0,
            VarianceConvention::PaperLiteral => 1.0,
        }
    }
}

impl std::str::FromStr for VarianceConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heat-kernel" => Ok(Self::HeatKernel),
            "paper-literal" => Ok(Self::PaperLiteral),
            other => Err(Error::param(
                "convention",
                format!("expected heat-kernel or paper-literal, got {other}"),
            )),
        }
    }
}

/// Diffusion coefficient Γ, reference time T and variance convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionParams {
    diffusivity: f64,
    t_unit: f64,
    convention: VarianceConvention,
}

impl DiffusionParams {
    pub fn new(diffusivity: f64, t_unit: f64, convention: VarianceConvention) -> Result<Self> {
        if !(diffusivity > 0.0 && diffusivity.is_finite()) {
            return Err(Error::param("Gamma", format!("must be positive, got {diffusivity}")));
        }
        if !(t_unit > 0.0 && t_unit.is_finite()) {
            return Err(Error::param("T", format!("must be positive, got {t_unit}")));
        }
        Ok(Self {
            diffusivity,
            t_unit,
            convention,
        })
    }

    /// ΓT/ξ² = 1 with T = 1.
    pub fn normalized(xi: f64, convention: VarianceConvention) -> Result<Self> {
        Self::new(xi * xi, 1.0, convention)
    }

    /// Γ = l²/(2Δt) of a walk with lattice length `l` and time step `dt`.
    pub fn from_lattice(l: f64, dt: f64, convention: VarianceConvention) -> Result<Self> {
        Self::new(l * l / (2.0 * dt), dt, convention)
    }

    pub fn with_convention(self, convention: VarianceConvention) -> Self {
        Self { convention, ..self }
    }

    pub fn diffusivity(&self) -> f64 {
        self.diffusivity
    }

    pub fn t_unit(&self) -> f64 {
        self.t_unit
    }

    pub fn convention(&self) -> VarianceConvention {
        self.convention
    }

    /// Variance of the deformed-space Gaussian at time `t`.
    pub fn deformed_variance(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveTime(t));
        }
        Ok(self.convention.factor() * self.diffusivity * t)
    }

    /// d(σ²)/dt.
    pub fn variance_rate(&self) -> f64 {
        self.convention.factor() * self.diffusivity
    }
}

/// Density per unit deformed length: a centred Gaussian in u.
pub fn density_deformed(u: DeformedCoordinate, t: f64, dp: &DiffusionParams) -> Result<f64> {
    let var = dp.deformed_variance(t)?;
    Ok((-0.5 * u.0 * u.0 / var).exp() / (2.0 * PI * var).sqrt())
}

/// Density per unit standard length, 𝒫(u(x), t) / g(x).
///
/// At the Tsallis localization point the value is the limit 0. Beyond it the
/// position is outside the support and a domain error is returned.
pub fn density_standard(x: f64, t: f64, dp: &DiffusionParams, params: &HomotopyParams) -> Result<f64> {
    let var = dp.deformed_variance(t)?;
    let g = metric_factor(x, params)?;
    if g == 0.0 {
        return Ok(0.0);
    }
    let u = deform(x, params)?;
    let gaussian = (-0.5 * u.0 * u.0 / var).exp();
    if gaussian == 0.0 {
        return Ok(0.0);
    }
    Ok(gaussian / ((2.0 * PI * var).sqrt() * g))
}

/// ∂P/∂t of the analytic standard-space density.
pub fn density_standard_time_derivative(x: f64, t: f64, dp: &DiffusionParams, params: &HomotopyParams) -> Result<f64> {
    let var = dp.deformed_variance(t)?;
    let p = density_standard(x, t, dp, params)?;
    let u = deform(x, params)?.0;
    Ok(p * (u * u - var) / (2.0 * var * var) * dp.variance_rate())
}

/// Ordered 1-D grid. Uniform grids are required by [`fd_integrate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    nodes: Vec<f64>,
}

impl Grid1D {
    pub fn uniform(x_min: f64, x_max: f64, n_nodes: usize) -> Result<Self> {
        if n_nodes < 3 {
            return Err(Error::Grid(format!("need at least 3 nodes, got {n_nodes}")));
        }
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Grid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        let h = (x_max - x_min) / (n_nodes - 1) as f64;
        let mut nodes: Vec<f64> = (0..n_nodes).map(|i| x_min + i as f64 * h).collect();
        nodes[n_nodes - 1] = x_max;
        Ok(Self { nodes })
    }

    /// Arbitrary strictly increasing nodes.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::Grid(format!("need at least 3 nodes, got {}", nodes.len())));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::Grid("nodes must be finite and strictly increasing".into()));
        }
        Ok(Self { nodes })
    }

    /// Support of the deformed Gaussian out to `n_sigma` standard deviations
    /// at time `t`, mapped to standard space. For the Tsallis class the edge
    /// at the localization point is pulled in by `guard`·ξ.
    pub fn support_bounds(
        t: f64,
        n_sigma: f64,
        guard: f64,
        dp: &DiffusionParams,
        params: &HomotopyParams,
    ) -> Result<(f64, f64)> {
        let span = n_sigma * dp.deformed_variance(t)?.sqrt();
        let mut lo = inverse_deform(DeformedCoordinate(-span), params);
        let mut hi = inverse_deform(DeformedCoordinate(span), params);
        if let Some(x0) = params.localization_point() {
            let delta = guard * params.xi();
            if params.gamma() > 0.0 {
                lo = lo.max(x0 + delta);
            } else {
                hi = hi.min(x0 - delta);
            }
        }
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Overflow("support bounds"));
        }
        Ok((lo, hi))
    }

    /// Uniform grid over [`Grid1D::support_bounds`].
    pub fn covering(
        t: f64,
        n_sigma: f64,
        n_nodes: usize,
        dp: &DiffusionParams,
        params: &HomotopyParams,
    ) -> Result<Self> {
        let (lo, hi) = Self::support_bounds(t, n_sigma, DEFAULT_BOUNDARY_GUARD, dp, params)?;
        Self::uniform(lo, hi, n_nodes)
    }

    /// Nodes uniformly spaced in the deformed coordinate over ±`n_sigma`
    /// standard deviations at time `t`.
    pub fn deformed_uniform(
        t: f64,
        n_sigma: f64,
        n_nodes: usize,
        dp: &DiffusionParams,
        params: &HomotopyParams,
    ) -> Result<Self> {
        let span = n_sigma * dp.deformed_variance(t)?.sqrt();
        let du = 2.0 * span / (n_nodes - 1) as f64;
        let mut nodes: Vec<f64> = (0..n_nodes)
            .map(|i| inverse_deform(DeformedCoordinate(-span + i as f64 * du), params))
            .collect();
        nodes.dedup();
        Self::from_nodes(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn x_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn x_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Spacing of a uniform grid, `None` when the nodes are not equispaced.
    pub fn spacing(&self) -> Option<f64> {
        let h = (self.x_max() - self.x_min()) / (self.len() - 1) as f64;
        let uniform = self.nodes.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
        uniform.then_some(h)
    }

    /// Trapezoidal ∫ f over the grid given nodal values.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        self.nodes
            .windows(2)
            .zip(values.windows(2))
            .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
            .sum()
    }
}

/// Density values on a grid at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityField {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub time: f64,
}

impl DensityField {
    pub fn new(grid: Grid1D, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!("{} values for {} nodes", values.len(), grid.len())));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::Grid(format!(
                "density must be non-negative, got {v} at x = {}",
                grid.nodes()[i]
            )));
        }
        Ok(Self { grid, values, time })
    }

    /// Samples the analytic standard-space density.
    pub fn analytic(grid: Grid1D, t: f64, dp: &DiffusionParams, params: &HomotopyParams) -> Result<Self> {
        let values = grid
            .nodes()
            .iter()
            .map(|&x| density_standard(x, t, dp, params))
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, values, t)
    }

    pub fn mass(&self) -> f64 {
        self.grid.trapezoid(&self.values)
    }

    /// Checks the trapezoidal mass lies within 1 ± `epsilon`.
    pub fn check_mass(&self, epsilon: f64) -> Result<()> {
        let m = self.mass();
        if (m - 1.0).abs() <= epsilon {
            Ok(())
        } else {
            Err(Error::Grid(format!("mass {m} outside 1 ± {epsilon}")))
        }
    }

    /// Trapezoidal L1 distance to another field on the same grid.
    pub fn l1_distance(&self, other: &DensityField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Grid("fields live on different grids".into()));
        }
        let diff: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .collect();
        Ok(self.grid.trapezoid(&diff))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeScheme {
    CrankNicolson,
    ExplicitEuler,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdOptions {
    pub scheme: TimeScheme,
    /// Time step; `None` picks h²/(2Γ) for Crank–Nicolson and the stability
    /// limit for explicit Euler.
    pub dt: Option<f64>,
    /// Relative (to the maximum) negativity tolerated before aborting.
    pub negativity_tolerance: f64,
    /// Backward-Euler half steps taken first to damp stiff modes.
    pub smoothing_steps: usize,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            scheme: TimeScheme::CrankNicolson,
            dt: None,
            negativity_tolerance: 1e-8,
            smoothing_steps: 4,
        }
    }
}

/// Tridiagonal operator of the van Kampen flux form with zero drift,
/// ∂x[μ(x) ∂x(T(x) P)], on a uniform grid with zero-flux ends. Rows are the
/// flux differences F_{i+1/2} − F_{i−1/2}, not yet divided by cell widths.
#[derive(Debug, Clone)]
pub struct FluxOperator {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    widths: Vec<f64>,
}

impl FluxOperator {
    pub fn assemble<M, T>(grid: &Grid1D, mobility: M, temperature: T) -> Result<Self>
    where
        M: Fn(f64) -> Result<f64>,
        T: Fn(f64) -> Result<f64>,
    {
        let h = grid
            .spacing()
            .ok_or_else(|| Error::Grid("flux operator needs a uniform grid".into()))?;
        let x = grid.nodes();
        let n = x.len();
        let temps = x.iter().map(|&xi| temperature(xi)).collect::<Result<Vec<_>>>()?;
        let faces = x
            .windows(2)
            .map(|w| mobility(0.5 * (w[0] + w[1])).map(|m| m / h))
            .collect::<Result<Vec<_>>>()?;
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for (f, &c) in faces.iter().enumerate() {
            // flux through face f between nodes f and f+1: c·(T_{f+1}P_{f+1} − T_f P_f)
            diag[f] -= c * temps[f];
            upper[f] += c * temps[f + 1];
            lower[f + 1] += c * temps[f];
            diag[f + 1] -= c * temps[f + 1];
        }
        let mut widths = vec![h; n];
        widths[0] = 0.5 * h;
        widths[n - 1] = 0.5 * h;
        Ok(Self {
            lower,
            diag,
            upper,
            widths,
        })
    }

    /// HFPE operator Γ ∂x[g ∂x(g P)].
    pub fn hfpe(grid: &Grid1D, diffusivity: f64, params: &HomotopyParams) -> Result<Self> {
        Self::assemble(
            grid,
            |x| metric_factor(x, params).map(|g| diffusivity * g),
            |x| metric_factor(x, params),
        )
    }

    /// (L P)_i, the net flux into cell i.
    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        let n = p.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * p[i];
                if i > 0 {
                    v += self.lower[i] * p[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * p[i + 1];
                }
                v
            })
            .collect()
    }

    /// Rate dP/dt = W⁻¹ L P.
    pub fn rate(&self, p: &[f64]) -> Vec<f64> {
        self.apply(p)
            .into_iter()
            .zip(&self.widths)
            .map(|(v, w)| v / w)
            .collect()
    }

    /// Largest explicit-Euler step that keeps the update monotone.
    pub fn explicit_step_limit(&self) -> f64 {
        self.diag
            .iter()
            .zip(&self.widths)
            .map(|(d, w)| w / d.abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Solves (W − θ·dt·L) P_new = (W + (1 − θ)·dt·L) P_old.
    fn theta_step(&self, p: &[f64], dt: f64, theta: f64) -> Vec<f64> {
        let n = p.len();
        let lp = self.apply(p);
        let rhs: Vec<f64> = (0..n)
            .map(|i| self.widths[i] * p[i] + (1.0 - theta) * dt * lp[i])
            .collect();
        let a: Vec<f64> = self.lower.iter().map(|l| -theta * dt * l).collect();
        let b: Vec<f64> = (0..n).map(|i| self.widths[i] - theta * dt * self.diag[i]).collect();
        let c: Vec<f64> = self.upper.iter().map(|u| -theta * dt * u).collect();
        solve_tridiagonal(&a, &b, &c, &rhs)
    }
}

/// Thomas algorithm for a tridiagonal system; `a[0]` and `c[n−1]` are unused.
pub fn solve_tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for i in 1..n {
        let m = b[i] - a[i] * cp[i - 1];
        cp[i] = if i + 1 < n { c[i] / m } else { 0.0 };
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    x
}

/// Integrates the standard-space HFPE from `initial` to `t_end` with the
/// default options.
pub fn fd_integrate(
    initial: &DensityField,
    t_end: f64,
    dp: &DiffusionParams,
    params: &HomotopyParams,
) -> Result<DensityField> {
    fd_integrate_with(initial, t_end, dp, params, &FdOptions::default())
}

/// Integrates the conservative flux form F = Γ g ∂x(gP) with zero-flux ends.
/// The trapezoidal mass of the field is conserved to rounding.
pub fn fd_integrate_with(
    initial: &DensityField,
    t_end: f64,
    dp: &DiffusionParams,
    params: &HomotopyParams,
    options: &FdOptions,
) -> Result<DensityField> {
    let duration = t_end - initial.time;
    if !(duration >= 0.0) {
        return Err(Error::param(
            "t_end",
            format!("must not precede the initial time {}", initial.time),
        ));
    }
    let grid = &initial.grid;
    let h = grid
        .spacing()
        .ok_or_else(|| Error::Grid("finite differences need a uniform grid".into()))?;
    if grid
        .nodes()
        .iter()
        .any(|&x| metric_factor(x, params).map_or(true, |g| g <= 0.0))
    {
        return Err(Error::Grid("grid touches the localization point".into()));
    }
    let op = FluxOperator::hfpe(grid, dp.diffusivity(), params)?;
    let limit = op.explicit_step_limit();
    let dt_target = match (options.dt, options.scheme) {
        (Some(dt), TimeScheme::ExplicitEuler) if dt > limit => {
            return Err(Error::param(
                "dt",
                format!("explicit step {dt} exceeds the stability limit {limit}"),
            ))
        }
        (Some(dt), _) if dt > 0.0 => dt,
        (Some(dt), _) => return Err(Error::param("dt", format!("must be positive, got {dt}"))),
        (None, TimeScheme::CrankNicolson) => h * h / (2.0 * dp.diffusivity()),
        (None, TimeScheme::ExplicitEuler) => 0.9 * limit,
    };
    let mut values = initial.values.clone();
    if duration == 0.0 {
        return DensityField::new(grid.clone(), values, t_end);
    }
    let n_steps = (duration / dt_target).ceil().max(1.0) as usize;
    let dt = duration / n_steps as f64;
    let mut time = initial.time;
    let smoothing = match options.scheme {
        TimeScheme::CrankNicolson => options.smoothing_steps.min(n_steps),
        TimeScheme::ExplicitEuler => 0,
    };
    for step in 0..n_steps {
        values = if step < smoothing {
            let half = op.theta_step(&values, 0.5 * dt, 1.0);
            op.theta_step(&half, 0.5 * dt, 1.0)
        } else {
            match options.scheme {
                TimeScheme::CrankNicolson => op.theta_step(&values, dt, 0.5),
                TimeScheme::ExplicitEuler => op.theta_step(&values, dt, 0.0),
            }
        };
        time = initial.time + (step + 1) as f64 * dt;
        check_negativity(&values, grid, time, options.negativity_tolerance)?;
    }
    // rounding may leave tiny negative tails; the tolerance check above bounds them
    let values = values.into_iter().map(|v| v.max(0.0)).collect();
    DensityField::new(grid.clone(), values, time)
}

fn check_negativity(values: &[f64], grid: &Grid1D, time: f64, tolerance: f64) -> Result<()> {
    let max = values.iter().cloned().fold(0.0, f64::max);
    let (i, min) = values
        .iter()
        .cloned()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    if !min.is_finite() || !max.is_finite() || min < -tolerance * max {
        return Err(Error::Unstable {
            time,
            min,
            x: grid.nodes()[i],
        });
    }
    Ok(())
}

/// Mobility and temperature ratios μ/μ₀ and T/T₀ of the equivalent van Kampen
/// equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanKampenProfile {
    pub mobility_ratio: f64,
    pub temperature_ratio: f64,
}

pub fn van_kampen_profiles(x: f64, params: &HomotopyParams) -> Result<VanKampenProfile> {
    let g = metric_factor(x, params)?;
    Ok(VanKampenProfile {
        mobility_ratio: g,
        temperature_ratio: g,
    })
}

/// Γ = μ₀T₀.
pub fn van_kampen_diffusivity(mobility0: f64, temperature0: f64) -> f64 {
    mobility0 * temperature0
}

/// Maximum over `points` of |∂P/∂t − Γ·L_h P| for the analytic density, with
/// L_h the second-order flux stencil of spacing `h` centred at each point.
pub fn hfpe_residual(points: &[f64], t: f64, h: f64, dp: &DiffusionParams, params: &HomotopyParams) -> Result<f64> {
    let gp = |x: f64| -> Result<f64> { Ok(metric_factor(x, params)? * density_standard(x, t, dp, params)?) };
    let mut worst: f64 = 0.0;
    for &x in points {
        let right = metric_factor(x + 0.5 * h, params)? * (gp(x + h)? - gp(x)?);
        let left = metric_factor(x - 0.5 * h, params)? * (gp(x)? - gp(x - h)?);
        let stencil = dp.diffusivity() * (right - left) / (h * h);
        let exact = density_standard_time_derivative(x, t, dp, params)?;
        worst = worst.max((exact - stencil).abs());
    }
    Ok(worst)
}

/// Observed convergence orders log2(e_k / e_{k+1}) for successive halvings.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Discrepancy between one exact master-equation step and one explicit step
/// of the continuum equation, both per unit time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuumLimitReport {
    pub l: f64,
    pub dt: f64,
    pub diffusivity: f64,
    /// Mean deformed displacement per unit time, E(u step)/Δt.
    pub drift_velocity: f64,
    /// Against the drift-free equation ∂P/∂t = Γ ∂x[g ∂x(gP)].
    pub residual_hfpe: f64,
    /// Against the same equation plus the walk's drift, −v ∂x(gP).
    pub residual_with_drift: f64,
}

/// Width of the Gaussian test density used by [`continuum_limit_check`], in ξ.
pub const CONTINUUM_TEST_WIDTH: f64 = 0.5;

/// Applies one master-equation step of the equilibrated walk with lattice
/// length `l` and time step `dt` to a smooth Gaussian test density, and one
/// explicit finite-difference step of the continuum equation with
/// Γ = l²/(2Δt) and spacing l. Residuals are the maximum difference per unit
/// time over x ∈ [−ξ, ξ].
pub fn continuum_limit_check(l: f64, dt: f64, params: &HomotopyParams) -> Result<ContinuumLimitReport> {
    if !(dt > 0.0) {
        return Err(Error::param("dt", format!("must be positive, got {dt}")));
    }
    let p = 0.5;
    let diffusivity = l * l / (2.0 * dt);
    let (plus, minus) = step_lengths(l, params)?;
    let width = CONTINUUM_TEST_WIDTH * params.xi();
    let density = |x: f64| (-0.5 * x * x / (width * width)).exp() / (2.0 * PI * width * width).sqrt();
    let g = |x: f64| metric_factor(x, params);
    // deformed-frame density 𝒫(v) = g(x) P(x) at x = x(v)
    let deformed = |v: f64| -> Result<f64> {
        let x = inverse_deform(DeformedCoordinate(v), params);
        Ok(g(x)? * density(x))
    };
    let gp = |x: f64| -> Result<f64> { Ok(g(x)? * density(x)) };
    let drift_velocity = (p * plus + (1.0 - p) * minus) / dt;

    let n_points = 41;
    let xi = params.xi();
    let mut residual_hfpe: f64 = 0.0;
    let mut residual_with_drift: f64 = 0.0;
    for j in 0..n_points {
        let x = -xi + 2.0 * xi * j as f64 / (n_points - 1) as f64;
        let u = deform(x, params)?.0;
        let master = (p * deformed(u - plus)? + (1.0 - p) * deformed(u - minus)?) / g(x)?;
        let right = g(x + 0.5 * l)? * (gp(x + l)? - gp(x)?);
        let left = g(x - 0.5 * l)? * (gp(x)? - gp(x - l)?);
        let hfpe_rate = diffusivity * (right - left) / (l * l);
        let drift_rate = -drift_velocity * (gp(x + l)? - gp(x - l)?) / (2.0 * l);
        let master_rate = (master - density(x)) / dt;
        residual_hfpe = residual_hfpe.max((master_rate - hfpe_rate).abs());
        residual_with_drift = residual_with_drift.max((master_rate - hfpe_rate - drift_rate).abs());
    }
    Ok(ContinuumLimitReport {
        l,
        dt,
        diffusivity,
        drift_velocity,
        residual_hfpe,
        residual_with_drift,
    })
}

/// [`continuum_limit_check`] over a sequence of lattice lengths at fixed Γ.
pub fn continuum_limit_sweep(
    lattice_lengths: &[f64],
    diffusivity: f64,
    params: &HomotopyParams,
) -> Result<Vec<ContinuumLimitReport>> {
    lattice_lengths
        .iter()
        .map(|&l| continuum_limit_check(l, l * l / (2.0 * diffusivity), params))
        .collect()
}
