//! Homotopic deformed calculus.
//!
//! The position-dependent mass
//!
//! ```text
//! m(x)/m0 = 1 / (1 + 2 γ λ x + γ² x²),   λ ∈ [0, 1]
//! ```
//!
//! interpolates between the Kaniadakis (λ = 0) and Tsallis (λ = 1) mass
//! profiles. It induces the metric factor `g(x) = sqrt(1 + 2γλx + γ²x²)`, the
//! deformed coordinate `u = ∫ dx / g(x)` and a group law `x ⊕ y` that is
//! ordinary addition in `u`.
//!
//! All maps are evaluated in forms that avoid cancellation: the radicand is
//! written as the completed square `(λ + γx)² + (1 − λ²)` and the logarithm in
//! the forward map is taken with `ln_1p` on a rearranged argument.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, GaussKronrod};

/// Below this `|γ x|` the forward and inverse maps use a cubic series in γ.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// Default absolute tolerance for [`deformed_integral`].
pub const DEFAULT_INTEGRAL_TOLERANCE: f64 = 1e-10;

/// Deformation γ (1/length), homotopic parameter λ and characteristic length ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct HomotopyParams {
    gamma: f64,
    lambda: f64,
    xi: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    gamma: f64,
    lambda: f64,
    #[serde(default = "one")]
    xi: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawParams> for HomotopyParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        HomotopyParams::new(raw.gamma, raw.lambda, raw.xi)
    }
}

impl From<HomotopyParams> for RawParams {
    fn from(p: HomotopyParams) -> Self {
        RawParams {
            gamma: p.gamma,
            lambda: p.lambda,
            xi: p.xi,
        }
    }
}

impl HomotopyParams {
    pub fn new(gamma: f64, lambda: f64, xi: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::param("gamma", format!("must be finite, got {gamma}")));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::param("lambda", format!("must lie in [0, 1], got {lambda}")));
        }
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::param("xi", format!("must be positive and finite, got {xi}")));
        }
        Ok(Self { gamma, lambda, xi })
    }

    /// Parameters from the dimensionless product γξ.
    pub fn from_gamma_xi(gamma_xi: f64, lambda: f64, xi: f64) -> Result<Self> {
        Self::new(gamma_xi / xi, lambda, xi)
    }

    /// The undeformed walk (γ = 0).
    pub fn standard() -> Self {
        Self {
            gamma: 0.0,
            lambda: 0.0,
            xi: 1.0,
        }
    }

    /// Tsallis class: λ = 1 with γ = (1 − q)/ξ.
    pub fn from_tsallis(q: f64, xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::param("xi", format!("must be positive and finite, got {xi}")));
        }
        Self::new((1.0 - q) / xi, 1.0, xi)
    }

    /// Kaniadakis class: λ = 0 with γ = κ. The characteristic length is 1;
    /// use [`HomotopyParams::with_xi`] to change it.
    pub fn from_kaniadakis(kappa: f64) -> Result<Self> {
        Self::new(kappa, 0.0, 1.0)
    }

    pub fn with_xi(self, xi: f64) -> Result<Self> {
        Self::new(self.gamma, self.lambda, xi)
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::new(gamma, self.lambda, self.xi)
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::new(self.gamma, lambda, self.xi)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn gamma_xi(&self) -> f64 {
        self.gamma * self.xi
    }

    /// Same parameters with the sign of γ flipped.
    pub fn mirrored(&self) -> Self {
        Self {
            gamma: -self.gamma,
            ..*self
        }
    }

    /// True when |γξ| ≥ 1. Reported as a warning only; the walk enforces |γl| < 1.
    pub fn exceeds_physical_bound(&self) -> bool {
        self.gamma_xi().abs() >= 1.0
    }

    /// Position of the mass divergence, present only for λ = 1 and γ ≠ 0.
    pub fn localization_point(&self) -> Option<f64> {
        (self.lambda == 1.0 && self.gamma != 0.0).then(|| -1.0 / self.gamma)
    }

    /// 1 + 2γλx + γ²x², expanded near the origin and as the completed
    /// square (λ + γx)² + (1 − λ²) elsewhere, so that it is exactly 1 at
    /// x = 0 and free of cancellation near the localization point.
    pub fn radicand(&self, x: f64) -> f64 {
        let z = self.gamma * x;
        if z.abs() < 0.25 {
            return 1.0 + z * (2.0 * self.lambda + z);
        }
        let s = self.lambda + z;
        s * s + (1.0 - self.lambda) * (1.0 + self.lambda)
    }
}

/// A position in the homotopic deformed space.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DeformedCoordinate(pub f64);

impl DeformedCoordinate {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Mass ratio m(x)/m0 = 1/(1 + 2γλx + γ²x²).
pub fn pdm_mass_ratio(x: f64, params: &HomotopyParams) -> Result<f64> {
    let r = params.radicand(x);
    if r <= 0.0 {
        return Err(Error::Domain {
            x,
            reason: "mass diverges at the localization point x = -1/gamma",
        });
    }
    Ok(1.0 / r)
}

/// Metric factor g(x) = sqrt(1 + 2γλx + γ²x²) = 1/sqrt(m(x)/m0).
pub fn metric_factor(x: f64, params: &HomotopyParams) -> Result<f64> {
    let r = params.radicand(x);
    if r < 0.0 || r.is_nan() {
        return Err(Error::Domain {
            x,
            reason: "negative radicand in the metric factor",
        });
    }
    Ok(r.sqrt())
}

fn deform_series(x: f64, gamma: f64, lambda: f64) -> f64 {
    let z = gamma * x;
    let l2 = lambda * lambda;
    x * (1.0 - 0.5 * lambda * z + (3.0 * l2 - 1.0) / 6.0 * z * z + (3.0 - 5.0 * l2) * lambda / 8.0 * z * z * z)
}

fn inverse_series(u: f64, gamma: f64, lambda: f64) -> f64 {
    let z = gamma * u;
    u * (1.0 + 0.5 * lambda * z + z * z / 6.0 + lambda * z * z * z / 24.0)
}

/// Forward map x ↦ x_{γ,λ} = (1/γ) ln[(λ + γx + g(x)) / (λ + 1)].
pub fn deform(x: f64, params: &HomotopyParams) -> Result<DeformedCoordinate> {
    let (gamma, lambda) = (params.gamma, params.lambda);
    if !x.is_finite() {
        return Err(Error::Domain {
            x,
            reason: "position must be finite",
        });
    }
    if gamma == 0.0 {
        return Ok(DeformedCoordinate(x));
    }
    // the Kaniadakis map is odd; evaluate on |x| so the symmetry is exact
    if lambda == 0.0 && x < 0.0 {
        return deform(-x, params).map(|u| DeformedCoordinate(-u.0));
    }
    let z = gamma * x;
    if z.abs() < SERIES_THRESHOLD {
        return Ok(DeformedCoordinate(deform_series(x, gamma, lambda)));
    }
    let s = lambda + z;
    let g = (s * s + (1.0 - lambda) * (1.0 + lambda)).sqrt();
    // A and A − 1 in cancellation-free forms, using (s + g)(g − s) = 1 − λ²
    let (a, a_minus_one) = if s >= 0.0 {
        (
            (s + g) / (1.0 + lambda),
            z * (1.0 + (2.0 * lambda + z) / (1.0 + g)) / (1.0 + lambda),
        )
    } else {
        let d = g - s;
        ((1.0 - lambda) / d, z * ((1.0 - lambda) + d) / ((1.0 + g) * d))
    };
    if !(a > 0.0) {
        return Err(Error::Domain {
            x,
            reason: "Tsallis class requires x > -1/gamma",
        });
    }
    let log_a = if a < 0.5 { a.ln() } else { a_minus_one.ln_1p() };
    Ok(DeformedCoordinate(log_a / gamma))
}

/// Inverse map u ↦ [λ(cosh γu − 1) + sinh γu]/γ, defined on the whole line.
/// Overflows to ±∞ once |γu| exceeds the exponent range.
pub fn inverse_deform(u: DeformedCoordinate, params: &HomotopyParams) -> f64 {
    let (gamma, lambda) = (params.gamma, params.lambda);
    let u = u.0;
    if gamma == 0.0 {
        return u;
    }
    let z = gamma * u;
    if z.abs() < SERIES_THRESHOLD {
        return inverse_series(u, gamma, lambda);
    }
    // [((1+λ)/2)(e^z − 1) − ((1−λ)/2)(e^{−z} − 1)]/γ: both terms share a sign
    // for either sign of z, and the Tsallis limit e^z − 1 is kept exact
    let forward = 0.5 * (1.0 + lambda) * z.exp_m1();
    if lambda == 1.0 {
        return forward / gamma;
    }
    (forward - 0.5 * (1.0 - lambda) * (-z).exp_m1()) / gamma
}

/// Homotopic sum x ⊕ y = inverse_deform(deform(x) + deform(y)).
pub fn homotopic_sum(x: f64, y: f64, params: &HomotopyParams) -> Result<f64> {
    let u = deform(x, params)?.0 + deform(y, params)?.0;
    Ok(inverse_deform(DeformedCoordinate(u), params))
}

/// Default central-difference step for [`deformed_derivative`].
pub fn default_derivative_step(x: f64, params: &HomotopyParams) -> f64 {
    1e-5 * params.xi.max(x.abs())
}

/// D_{γ,λ} f(x) = g(x) f'(x), with f' by central difference.
pub fn deformed_derivative<F>(f: F, x: f64, params: &HomotopyParams) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    deformed_derivative_with_step(f, x, params, default_derivative_step(x, params))
}

pub fn deformed_derivative_with_step<F>(f: F, x: f64, params: &HomotopyParams, step: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(step > 0.0) {
        return Err(Error::param("step", format!("must be positive, got {step}")));
    }
    let g = metric_factor(x, params)?;
    Ok(g * (f(x + step) - f(x - step)) / (2.0 * step))
}

/// ∫_a^b f(x) dx / g(x) by adaptive Gauss–Kronrod quadrature.
pub fn deformed_integral<F>(f: F, a: f64, b: f64, params: &HomotopyParams) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    deformed_integral_with_tolerance(f, a, b, params, DEFAULT_INTEGRAL_TOLERANCE)
}

pub fn deformed_integral_with_tolerance<F>(f: F, a: f64, b: f64, params: &HomotopyParams, tolerance: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) {
        return Err(Error::param("interval", format!("need a < b, got [{a}, {b}]")));
    }
    let integrand = |x: f64| match metric_factor(x, params) {
        Ok(g) if g > 0.0 => f(x) / g,
        _ => f64::NAN,
    };
    let q = GaussKronrod::new(tolerance).integrate(integrand, a, b);
    quadrature::accept(q, tolerance)
}
