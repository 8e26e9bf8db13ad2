//! Moments, entropy and the stationary entropic density of the free
//! solution.
//!
//! Expectations are taken in the deformed coordinate, where the weight is an
//! exact Gaussian. Standard-space integrals are only used as independent
//! cross-checks.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::algebra::{inverse_deform, metric_factor, DeformedCoordinate, HomotopyParams};
use crate::diffusion::{density_standard, DiffusionParams};
use crate::error::{Error, Result};
use crate::quadrature::{gaussian_expectation_checked, GaussHermite, GaussKronrod};

/// Default Gauss–Hermite node count; the acceptance check doubles it.
pub const DEFAULT_HERMITE_NODES: usize = 64;

/// Relative agreement required between the two Gauss–Hermite rules.
pub const NODE_DOUBLING_TOLERANCE: f64 = 1e-10;

/// Maximum miss allowed in S_BG + S_medium = 𝒮.
pub const ENTROPY_DECOMPOSITION_TOLERANCE: f64 = 1e-8;

/// Default ln K of the stationary entropic density.
pub const DEFAULT_LN_K: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

fn hermite_pair() -> (GaussHermite, GaussHermite) {
    (
        GaussHermite::new(DEFAULT_HERMITE_NODES),
        GaussHermite::new(2 * DEFAULT_HERMITE_NODES),
    )
}

/// ⟨x⟩ and ⟨(x − ⟨x⟩)²⟩ as Gaussian expectations of the inverse map.
pub fn moments_quadrature(t: f64, dp: &DiffusionParams, params: &HomotopyParams) -> Result<Moments> {
    let sigma = dp.deformed_variance(t)?.sqrt();
    let (coarse, fine) = hermite_pair();
    let x = |u: f64| inverse_deform(DeformedCoordinate(u), params);
    let mean = gaussian_expectation_checked(&coarse, &fine, sigma, NODE_DOUBLING_TOLERANCE, "mean", x)?;
    let variance = gaussian_expectation_checked(&coarse, &fine, sigma, NODE_DOUBLING_TOLERANCE, "variance", |u| {
        let d = x(u) - mean;
        d * d
    })?;
    Ok(Moments { mean, variance })
}

/// Lognormal closed form. With B = exp(γ²σ²):
/// mean = λ(√B − 1)/γ, variance = [λ²(B − 1)² + B² − 1]/(2γ²).
pub fn moments_closed_form(t: f64, dp: &DiffusionParams, params: &HomotopyParams) -> Result<Moments> {
    let var_u = dp.deformed_variance(t)?;
    let gamma = params.gamma();
    let lambda = params.lambda();
    if gamma == 0.0 {
        return Ok(Moments {
            mean: 0.0,
            variance: var_u,
        });
    }
    let a = gamma * gamma * var_u;
    // B² must stay finite
    if 2.0 * a > f64::MAX.ln() {
        return Err(Error::Overflow("moments_closed_form"));
    }
    let b_minus_1 = a.exp_m1();
    let mean = lambda * (0.5 * a).exp_m1() / gamma;
    // B² − 1 = (B − 1)(B + 1)
    let variance = b_minus_1 * (lambda * lambda * b_minus_1 + b_minus_1 + 2.0) / (2.0 * gamma * gamma);
    if !(mean.is_finite() && variance.is_finite()) {
        return Err(Error::Overflow("moments_closed_form"));
    }
    Ok(Moments { mean, variance })
}

/// ln g(x(u)) = ln[cosh γu + λ sinh γu], evaluated without forming x.
pub fn log_metric_at_deformed(u: f64, params: &HomotopyParams) -> f64 {
    let z = params.gamma() * u;
    let lambda = params.lambda();
    let (big, small) = if z >= 0.0 {
        (0.5 * (1.0 + lambda), 0.5 * (1.0 - lambda))
    } else {
        (0.5 * (1.0 - lambda), 0.5 * (1.0 + lambda))
    };
    // g = e^{|z|}·(big + small·e^{−2|z|})
    let az = z.abs();
    if big == 0.0 {
        return small.ln() - az;
    }
    az + (big + small * (-2.0 * az).exp()).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// 𝒮 = ½ ln(2πeσ²) in the deformed frame.
    pub total: f64,
    /// −∫ P ln P dx in standard space.
    pub boltzmann_gibbs: f64,
    /// −⟨ln g⟩.
    pub medium: f64,
}

impl EntropyReport {
    pub fn decomposition_error(&self) -> f64 {
        (self.boltzmann_gibbs + self.medium - self.total).abs()
    }
}

/// Entropy of the free solution at time `t` with its standard-space
/// decomposition. Fails if the two independent quadratures disagree with the
/// closed form by more than [`ENTROPY_DECOMPOSITION_TOLERANCE`].
pub fn entropy(t: f64, dp: &DiffusionParams, params: &HomotopyParams) -> Result<EntropyReport> {
    let var_u = dp.deformed_variance(t)?;
    let sigma = var_u.sqrt();
    let total = 0.5 * (2.0 * PI * E * var_u).ln();

    let medium = -medium_log_metric(sigma, params)?;

    let boltzmann_gibbs = standard_space_entropy(t, dp, params)?;
    let report = EntropyReport {
        total,
        boltzmann_gibbs,
        medium,
    };
    if report.decomposition_error() > ENTROPY_DECOMPOSITION_TOLERANCE {
        return Err(Error::QuadratureNonConvergence {
            quantity: "entropy decomposition",
            coarse: total,
            fine: boltzmann_gibbs + medium,
        });
    }
    Ok(report)
}

/// ⟨ln g⟩ under the deformed Gaussian. ln g behaves like |γu| with a smooth
/// corner at u = 0, which Hermite rules resolve poorly, so each half-line is
/// integrated adaptively out to 12σ.
fn medium_log_metric(sigma: f64, params: &HomotopyParams) -> Result<f64> {
    let norm = 1.0 / (2.0 * PI * sigma * sigma).sqrt();
    let integrand = |u: f64| norm * (-0.5 * u * u / (sigma * sigma)).exp() * log_metric_at_deformed(u, params);
    let tol = 1e-12;
    let span = 12.0 * sigma;
    let r = GaussKronrod::new(tol).integrate_pieces(integrand, &[-span, 0.0, span]);
    crate::quadrature::accept(r, 10.0 * tol)
}

/// Positions mapped from u = kσ, k = −n..=n, used as quadrature breakpoints.
pub fn sigma_breakpoints(sigma: f64, n: i32, params: &HomotopyParams) -> Vec<f64> {
    let mut pts: Vec<f64> = (-n..=n)
        .map(|k| inverse_deform(DeformedCoordinate(k as f64 * sigma), params))
        .collect();
    pts.dedup();
    pts
}

/// −∫ P ln P dx by adaptive Gauss–Kronrod in standard space.
pub fn standard_space_entropy(t: f64, dp: &DiffusionParams, params: &HomotopyParams) -> Result<f64> {
    let sigma = dp.deformed_variance(t)?.sqrt();
    let breaks = sigma_breakpoints(sigma, 12, params);
    let integrand = |x: f64| match density_standard(x, t, dp, params) {
        Ok(p) if p > 0.0 => -p * p.ln(),
        Ok(_) => 0.0,
        Err(_) => f64::NAN,
    };
    let tol = 1e-11;
    let r = GaussKronrod::new(tol).integrate_pieces(integrand, &breaks);
    crate::quadrature::accept(r, 10.0 * tol)
}

/// ∫ P dx by adaptive Gauss–Kronrod in standard space.
pub fn standard_space_mass(t: f64, dp: &DiffusionParams, params: &HomotopyParams) -> Result<f64> {
    let sigma = dp.deformed_variance(t)?.sqrt();
    let breaks = sigma_breakpoints(sigma, 12, params);
    let integrand = |x: f64| density_standard(x, t, dp, params).unwrap_or(f64::NAN);
    let tol = 1e-12;
    let r = GaussKronrod::new(tol).integrate_pieces(integrand, &breaks);
    crate::quadrature::accept(r, 10.0 * tol)
}

/// Stationary entropic density s and its ratio to the flat-medium value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sed {
    pub s: f64,
    pub s_bg: f64,
    pub ratio: f64,
}

/// s = −K ln K − K ln g(x), s_BG = −K ln K, ratio = 1 + ln g / ln K.
pub fn stationary_entropic_density(x: f64, ln_k: f64, params: &HomotopyParams) -> Result<Sed> {
    if !(ln_k.is_finite() && ln_k != 0.0) {
        return Err(Error::param("ln_K", format!("must be finite and nonzero, got {ln_k}")));
    }
    let g = metric_factor(x, params)?;
    if g <= 0.0 {
        return Err(Error::Domain {
            x,
            reason: "stationary entropic density diverges at the localization point",
        });
    }
    let k = ln_k.exp();
    let ln_g = g.ln();
    Ok(Sed {
        s: -k * ln_k - k * ln_g,
        s_bg: -k * ln_k,
        ratio: 1.0 + ln_g / ln_k,
    })
}

/// Time series of mean, variance (quadrature and closed form) and entropy.
/// A t = 0 row is recorded as all zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSeries {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub variance_closed_form: Vec<f64>,
    pub entropy: Vec<f64>,
}

impl MomentSeries {
    pub fn compute(times: &[f64], dp: &DiffusionParams, params: &HomotopyParams) -> Result<Self> {
        let mut series = Self {
            times: Vec::with_capacity(times.len()),
            mean: Vec::with_capacity(times.len()),
            variance: Vec::with_capacity(times.len()),
            variance_closed_form: Vec::with_capacity(times.len()),
            entropy: Vec::with_capacity(times.len()),
        };
        let rows = crate::par::map_slice(times, |&t| -> Result<[f64; 4]> {
            if t == 0.0 {
                return Ok([0.0; 4]);
            }
            let q = moments_quadrature(t, dp, params)?;
            let c = moments_closed_form(t, dp, params)?;
            let s = entropy(t, dp, params)?;
            Ok([q.mean, q.variance, c.variance, s.total])
        });
        for (&t, row) in times.iter().zip(rows) {
            let [m, v, vc, s] = row?;
            series.times.push(t);
            series.mean.push(m);
            series.variance.push(v);
            series.variance_closed_form.push(vc);
            series.entropy.push(s);
        }
        Ok(series)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// True when the entropy strictly increases over the t > 0 rows.
    pub fn entropy_increasing(&self) -> bool {
        let positive: Vec<f64> = self
            .times
            .iter()
            .zip(&self.entropy)
            .filter(|(t, _)| **t > 0.0)
            .map(|(_, s)| *s)
            .collect();
        positive.windows(2).all(|w| w[1] > w[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::VarianceConvention;
    use approx::assert_relative_eq;

    fn params(gamma_xi: f64, lambda: f64) -> HomotopyParams {
        HomotopyParams::from_gamma_xi(gamma_xi, lambda, 1.0).unwrap()
    }

    fn heat() -> DiffusionParams {
        DiffusionParams::normalized(1.0, VarianceConvention::HeatKernel).unwrap()
    }

    #[test]
    fn standard_moments() {
        let s = HomotopyParams::standard();
        let q = moments_quadrature(1.5, &heat(), &s).unwrap();
        assert!(q.mean.abs() < 1e-14);
        assert_relative_eq!(q.variance, 3.0, max_relative = 1e-12);
        let c = moments_closed_form(1.5, &heat(), &s).unwrap();
        assert_eq!((c.mean, c.variance), (0.0, 3.0));
    }

    #[test]
    fn kaniadakis_mean_vanishes() {
        let q = moments_quadrature(2.0, &heat(), &params(0.5, 0.0)).unwrap();
        assert!(q.mean.abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        // frozen: λ = 1, γξ = 0.5, t/T = 1 from independent Gauss–Hermite (128 nodes)
        let c = moments_closed_form(1.0, &heat(), &params(0.5, 1.0)).unwrap();
        assert_relative_eq!(c.mean, 2.0 * (0.25f64.exp() - 1.0), max_relative = 1e-14);
        let q = moments_quadrature(1.0, &heat(), &params(0.5, 1.0)).unwrap();
        assert_relative_eq!(q.mean, c.mean, max_relative = 1e-8);
        assert_relative_eq!(q.variance, c.variance, max_relative = 1e-8);
        for &lambda in &[0.0, 0.3, 0.75] {
            for &gx in &[-0.5, 0.1] {
                let p = params(gx, lambda);
                let q = moments_quadrature(2.0, &heat(), &p).unwrap();
                let c = moments_closed_form(2.0, &heat(), &p).unwrap();
                assert_relative_eq!(q.variance, c.variance, max_relative = 1e-8);
                assert!(
                    (q.mean - c.mean).abs() <= 1e-8 * c.mean.abs().max(1e-4 * c.variance.sqrt()),
                    "{q:?} {c:?}"
                );
            }
        }
    }

    #[test]
    fn kaniadakis_lognormal_variance() {
        let p = params(0.5, 0.0);
        let s2: f64 = 2.0 * 0.8;
        let c = moments_closed_form(0.8, &heat(), &p).unwrap();
        let expect = ((2.0 * 0.25 * s2).exp() - 1.0) / (2.0 * 0.25);
        assert_relative_eq!(c.variance, expect, max_relative = 1e-14);
    }

    #[test]
    fn closed_form_small_gamma_limit() {
        let c = moments_closed_form(1.0, &heat(), &params(1e-9, 0.5)).unwrap();
        assert_relative_eq!(c.variance, 2.0, max_relative = 1e-8);
    }

    #[test]
    fn closed_form_overflow_guard() {
        let r = moments_closed_form(1e4, &heat(), &params(0.9, 0.5));
        assert!(matches!(r, Err(Error::Overflow(_))));
    }

    #[test]
    fn log_metric_matches_direct_evaluation() {
        for &lambda in &[0.0, 0.4, 1.0] {
            let p = params(0.5, lambda);
            for &u in &[-3.0, -0.2, 0.0, 1.5, 6.0] {
                let x = inverse_deform(DeformedCoordinate(u), &p);
                let direct = metric_factor(x, &p).unwrap().ln();
                assert!((log_metric_at_deformed(u, &p) - direct).abs() < 1e-12, "{lambda} {u}");
            }
        }
        assert_eq!(log_metric_at_deformed(-2000.0, &params(0.5, 1.0)), -1000.0);
    }

    #[test]
    fn entropy_examples() {
        let r = entropy(1.0, &heat(), &HomotopyParams::standard()).unwrap();
        assert_relative_eq!(r.total, 0.5 * (4.0 * PI * E).ln(), max_relative = 1e-15);
        assert_eq!(r.medium, 0.0);
        let r = entropy(1.0, &heat(), &params(0.5, 0.5)).unwrap();
        assert!(r.decomposition_error() <= 1e-8);
        assert!(r.medium < 0.0);
        // Tsallis: ln g = γu has zero mean
        let r = entropy(1.0, &heat(), &params(0.5, 1.0)).unwrap();
        assert!(r.medium.abs() < 1e-12);
    }

    #[test]
    fn entropy_increases() {
        let p = params(-0.5, 0.25);
        let s: Vec<f64> = [0.5, 1.0, 2.0, 5.0]
            .iter()
            .map(|&t| entropy(t, &heat(), &p).unwrap().total)
            .collect();
        assert!(s.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn standard_space_mass_is_one() {
        for &lambda in &[0.0, 0.5, 1.0] {
            for &gx in &[0.5, -0.5] {
                let m = standard_space_mass(2.0, &heat(), &params(gx, lambda)).unwrap();
                assert!((m - 1.0).abs() < 1e-10, "{gx} {lambda}: {m}");
            }
        }
    }

    #[test]
    fn sed_examples() {
        let p = params(0.5, 0.0);
        assert_eq!(stationary_entropic_density(0.0, 1.0, &p).unwrap().ratio, 1.0);
        for &x in &[0.3, 4.0, 9.5] {
            assert_eq!(
                stationary_entropic_density(x, 1.0, &p).unwrap().ratio,
                stationary_entropic_density(-x, 1.0, &p).unwrap().ratio
            );
        }
        let s = stationary_entropic_density(2.0, 1.0, &params(0.5, 1.0)).unwrap();
        assert_relative_eq!(s.ratio, 1.0 + 2f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(s.s, -E - E * 2f64.ln(), max_relative = 1e-15);
        assert_eq!(s.s_bg, -E);
        assert!(stationary_entropic_density(-2.0, 1.0, &params(0.5, 1.0)).is_err());
        assert!(stationary_entropic_density(0.0, 0.0, &p).is_err());
    }

    #[test]
    fn moment_series_zero_row_and_monotone_entropy() {
        let s = MomentSeries::compute(&[0.0, 0.5, 1.0, 2.0], &heat(), &params(0.5, 0.5)).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!((s.mean[0], s.variance[0], s.entropy[0]), (0.0, 0.0, 0.0));
        assert!(s.entropy_increasing());
        assert!(s.variance.iter().all(|v| *v >= 0.0));
    }
}
