//! Homotopic random walk: deformed unit steps, seeded simulation, the exact
//! finite-n distribution and the large-n trajectory theory.
//!
//! A walker makes i.i.d. Bernoulli(p) choices between the deformed steps
//! `l₊ = deform(+l)` and `l₋ = deform(−l)`. Positions add in the deformed
//! coordinate and are mapped back to standard space with the inverse map, so
//! the standard-space position after n steps is the homotopic sum of the n
//! individual displacements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{deform, inverse_deform, DeformedCoordinate, HomotopyParams};
use crate::error::{Error, Result};

/// Largest step count accepted by [`exact_walk_distribution`].
pub const MAX_EXACT_STEPS: usize = 1_000_000;

/// One HRW experiment: step count, right-step probability, lattice length,
/// seed and deformation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    n_steps: usize,
    p: f64,
    l: f64,
    seed: u64,
    params: HomotopyParams,
}

impl WalkConfig {
    pub fn new(n_steps: usize, p: f64, l: f64, params: HomotopyParams) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::param("n_steps", "must be at least 1"));
        }
        check_probability(p)?;
        check_step(l, &params)?;
        Ok(Self {
            n_steps,
            p,
            l,
            seed: 0,
            params,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_n_steps(self, n_steps: usize) -> Result<Self> {
        Self::new(n_steps, self.p, self.l, self.params).map(|c| c.with_seed(self.seed))
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn params(&self) -> &HomotopyParams {
        &self.params
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param("p", format!("must lie in [0, 1], got {p}")))
    }
}

fn check_step(l: f64, params: &HomotopyParams) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::param("l", format!("must be positive and finite, got {l}")));
    }
    if (params.gamma() * l).abs() >= 1.0 {
        return Err(Error::param(
            "gamma*l",
            format!("|gamma*l| must be < 1, got {}", params.gamma() * l),
        ));
    }
    Ok(())
}

/// Independent random stream for walker `index` of an ensemble seeded with
/// `seed`. Stream 0 is the one used by [`simulate`].
pub fn walker_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Deformed unit steps (l₊, l₋) = (deform(+l), deform(−l)).
pub fn step_lengths(l: f64, params: &HomotopyParams) -> Result<(f64, f64)> {
    check_step(l, params)?;
    Ok((deform(l, params)?.0, deform(-l, params)?.0))
}

/// E(u step) = p·l₊ + (1 − p)·l₋.
pub fn expected_deformed_step(p: f64, l: f64, params: &HomotopyParams) -> Result<f64> {
    check_probability(p)?;
    let (plus, minus) = step_lengths(l, params)?;
    Ok(p * plus + (1.0 - p) * minus)
}

/// τ = −γ·E(u step).
pub fn characteristic_time(p: f64, l: f64, params: &HomotopyParams) -> Result<f64> {
    Ok(-params.gamma() * expected_deformed_step(p, l, params)?)
}

/// τ from the explicit logarithm of the product of the two step factors,
/// −ln[A₊^p · A₋^(1−p)] with A± = (λ ± γl + sqrt(1 ± 2λγl + γ²l²))/(λ + 1).
pub fn characteristic_time_log_product(p: f64, l: f64, params: &HomotopyParams) -> Result<f64> {
    check_probability(p)?;
    check_step(l, params)?;
    let (g, lam) = (params.gamma(), params.lambda());
    let factor = |s: f64| (lam + s * g * l + (1.0 + 2.0 * s * lam * g * l + g * g * l * l).sqrt()) / (lam + 1.0);
    let (plus, minus) = (factor(1.0), factor(-1.0));
    let mut tau = 0.0;
    if p > 0.0 {
        tau -= p * plus.ln();
    }
    if p < 1.0 {
        tau -= (1.0 - p) * minus.ln();
    }
    Ok(tau)
}

/// One point of a trajectory: step index, standard and deformed position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub index: usize,
    pub x: f64,
    pub u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub config: WalkConfig,
}

impl Trajectory {
    pub fn last(&self) -> TrajectoryPoint {
        *self.points.last().expect("trajectory starts at the origin")
    }
}

/// Simulates one walker, accumulating positions in the deformed coordinate.
pub fn simulate(config: &WalkConfig) -> Result<Trajectory> {
    let (plus, minus) = step_lengths(config.l, &config.params)?;
    let mut rng = walker_rng(config.seed, 0);
    let mut points = Vec::with_capacity(config.n_steps + 1);
    points.push(TrajectoryPoint {
        index: 0,
        x: 0.0,
        u: 0.0,
    });
    let mut u = 0.0;
    for index in 1..=config.n_steps {
        u += if rng.random_bool(config.p) { plus } else { minus };
        let x = inverse_deform(DeformedCoordinate(u), &config.params);
        points.push(TrajectoryPoint { index, x, u });
    }
    Ok(Trajectory {
        points,
        config: *config,
    })
}

/// Number of right steps taken by walker `index` of an ensemble.
pub fn right_steps(config: &WalkConfig, index: u64) -> usize {
    let mut rng = walker_rng(config.seed, index);
    (0..config.n_steps).filter(|_| rng.random_bool(config.p)).count()
}

/// Final (x, u) of ensemble walker `index`. The deformed position is
/// `k·l₊ + (n − k)·l₋`, the same atom [`exact_walk_distribution`] assigns.
pub fn final_position(config: &WalkConfig, steps: (f64, f64), index: u64) -> (f64, f64) {
    let k = right_steps(config, index);
    let u = k as f64 * steps.0 + (config.n_steps - k) as f64 * steps.1;
    (inverse_deform(DeformedCoordinate(u), &config.params), u)
}

/// Result of [`asymptotic_position`]. `saturated` marks an overflowing
/// exponential, in which case `position` is a signed infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Asymptote {
    pub position: f64,
    pub saturated: bool,
}

/// Large-n position s_n = [((λ+1)/2)e^{−nτ} + ((λ−1)/2)e^{nτ} − λ]/γ,
/// evaluated as inverse_deform(n·E(u step)). For γ = 0 this is n(2p − 1)l.
pub fn asymptotic_position(n: usize, p: f64, l: f64, params: &HomotopyParams) -> Result<Asymptote> {
    let u = n as f64 * expected_deformed_step(p, l, params)?;
    let position = inverse_deform(DeformedCoordinate(u), params);
    if position.is_finite() {
        return Ok(Asymptote {
            position,
            saturated: false,
        });
    }
    // the e^{|γu|} term wins; its coefficient is (λ+1)/2 for γu > 0 and (λ−1)/2 otherwise
    let (gamma, lambda) = (params.gamma(), params.lambda());
    let coefficient = if gamma * u > 0.0 { lambda + 1.0 } else { lambda - 1.0 };
    let sign = (coefficient / gamma).signum();
    Ok(Asymptote {
        position: sign * f64::INFINITY,
        saturated: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RegimeKind {
    ConvergesTo(f64),
    RandomBounded,
    Diverges,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeClassification {
    pub kind: RegimeKind,
    pub tau: f64,
    /// True when p ≠ 1/2: the regime then follows from the sign of τ in the
    /// asymptotic formula rather than from the equilibrated-walk results.
    pub extrapolated: bool,
}

/// Long-time regime of the trajectory.
pub fn classify_regime(p: f64, l: f64, params: &HomotopyParams) -> Result<RegimeClassification> {
    let tau = characteristic_time(p, l, params)?;
    let (gamma, lambda) = (params.gamma(), params.lambda());
    let extrapolated = p != 0.5;
    let kind = if !extrapolated {
        if gamma == 0.0 || lambda == 0.0 {
            RegimeKind::RandomBounded
        } else if lambda == 1.0 {
            RegimeKind::ConvergesTo(-1.0 / gamma)
        } else {
            RegimeKind::Diverges
        }
    } else if gamma == 0.0 {
        // plain drift n(2p − 1)l
        RegimeKind::Diverges
    } else if tau > 0.0 && lambda == 1.0 {
        RegimeKind::ConvergesTo(-1.0 / gamma)
    } else if tau == 0.0 {
        RegimeKind::RandomBounded
    } else {
        RegimeKind::Diverges
    };
    Ok(RegimeClassification {
        kind,
        tau,
        extrapolated,
    })
}

/// One atom of the exact n-step distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub right_steps: usize,
    pub u: f64,
    pub x: f64,
    pub probability: f64,
}

/// Exact distribution after `n` steps: atoms at
/// inverse_deform(k·l₊ + (n − k)·l₋) with binomial weights, k = 0..=n.
///
/// Weights are built outward from the mode by the ratio recurrence and then
/// normalized, which stays accurate for large n.
pub fn exact_walk_distribution(n: usize, p: f64, l: f64, params: &HomotopyParams) -> Result<Vec<Atom>> {
    if n > MAX_EXACT_STEPS {
        return Err(Error::SizeGuard {
            what: "n",
            value: n,
            limit: MAX_EXACT_STEPS,
        });
    }
    check_probability(p)?;
    let (plus, minus) = step_lengths(l, params)?;
    let weights = binomial_weights(n, p);
    Ok(weights
        .into_iter()
        .enumerate()
        .map(|(k, probability)| {
            let u = k as f64 * plus + (n - k) as f64 * minus;
            Atom {
                right_steps: k,
                u,
                x: inverse_deform(DeformedCoordinate(u), params),
                probability,
            }
        })
        .collect())
}

fn binomial_weights(n: usize, p: f64) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    if p == 0.0 {
        w[0] = 1.0;
        return w;
    }
    if p == 1.0 {
        w[n] = 1.0;
        return w;
    }
    let odds = p / (1.0 - p);
    let mode = (((n + 1) as f64) * p).floor().min(n as f64) as usize;
    w[mode] = 1.0;
    for k in mode..n {
        w[k + 1] = w[k] * (n - k) as f64 / (k + 1) as f64 * odds;
    }
    for k in (1..=mode).rev() {
        w[k - 1] = w[k] * k as f64 / (n - k + 1) as f64 / odds;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(gamma: f64, lambda: f64) -> HomotopyParams {
        HomotopyParams::new(gamma, lambda, 1.0).unwrap()
    }

    #[test]
    fn config_validation() {
        let p = params(0.5, 1.0);
        assert!(WalkConfig::new(0, 0.5, 1.0, p).is_err());
        assert!(WalkConfig::new(10, 1.5, 1.0, p).is_err());
        assert!(WalkConfig::new(10, 0.5, -1.0, p).is_err());
        assert!(WalkConfig::new(10, 0.5, 2.0, p).is_err());
        assert!(WalkConfig::new(10, 0.5, 1.0, p).is_ok());
    }

    #[test]
    fn step_length_examples() {
        let (a, b) = step_lengths(1.0, &HomotopyParams::standard()).unwrap();
        assert_eq!((a, b), (1.0, -1.0));
        let (a, b) = step_lengths(1.0, &params(0.5, 0.0)).unwrap();
        assert_eq!(a, -b);
        let (a, b) = step_lengths(1.0, &params(0.5, 1.0)).unwrap();
        assert_relative_eq!(a, 2.0 * 1.5f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(b, 2.0 * 0.5f64.ln(), max_relative = 1e-14);
        let (a, b) = step_lengths(1.0, &params(0.5, 0.5)).unwrap();
        assert!(a > 0.0 && b < 0.0 && a.abs() != b.abs());
    }

    #[test]
    fn expected_step_examples() {
        assert_eq!(expected_deformed_step(0.5, 1.0, &params(0.5, 0.0)).unwrap(), 0.0);
        let p = params(0.5, 0.3);
        assert_eq!(
            expected_deformed_step(1.0, 1.0, &p).unwrap(),
            step_lengths(1.0, &p).unwrap().0
        );
        let e = expected_deformed_step(0.5, 1.0, &params(0.5, 1.0)).unwrap();
        assert_relative_eq!(e, 1.5f64.ln() + 0.5f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn characteristic_time_examples() {
        let tau = characteristic_time(0.5, 1.0, &params(0.5, 1.0)).unwrap();
        assert!((tau - 0.143_841_036_225_890_2).abs() < 1e-12);
        let tau = characteristic_time(0.5, 1.0, &params(0.5, 0.0)).unwrap();
        assert!(tau.abs() <= 1e-15);
        // small γl: τ ≈ (1 − 2p)γl
        for &p in &[0.2, 0.7] {
            let gl = 1e-6;
            let tau = characteristic_time(p, 1.0, &params(gl, 0.4)).unwrap();
            assert_relative_eq!(tau, (1.0 - 2.0 * p) * gl, max_relative = 1e-5);
        }
    }

    #[test]
    fn log_product_matches_expectation_route() {
        for &lambda in &[0.0, 0.25, 0.5, 1.0] {
            for &gl in &[-0.9, -0.5, 0.1, 0.5, 0.9] {
                for &p in &[0.0, 0.3, 0.5, 1.0] {
                    let pr = params(gl, lambda);
                    let a = characteristic_time(p, 1.0, &pr).unwrap();
                    let b = characteristic_time_log_product(p, 1.0, &pr).unwrap();
                    assert!((a - b).abs() <= 1e-12, "λ={lambda} γl={gl} p={p}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn simulation_starts_at_origin_and_steps_are_deformed_units() {
        let cfg = WalkConfig::new(200, 0.5, 1.0, params(0.5, 0.5)).unwrap().with_seed(7);
        let traj = simulate(&cfg).unwrap();
        assert_eq!(traj.points.len(), 201);
        assert_eq!(
            traj.points[0],
            TrajectoryPoint {
                index: 0,
                x: 0.0,
                u: 0.0
            }
        );
        let (plus, minus) = step_lengths(1.0, cfg.params()).unwrap();
        for w in traj.points.windows(2) {
            let du = w[1].u - w[0].u;
            let tol = 1e-12 * w[1].u.abs().max(1.0);
            assert!((du - plus).abs() <= tol || (du - minus).abs() <= tol);
            assert_eq!(w[1].x, inverse_deform(DeformedCoordinate(w[1].u), cfg.params()));
        }
    }

    #[test]
    fn simulation_is_seed_deterministic() {
        let cfg = WalkConfig::new(500, 0.4, 1.0, params(-0.3, 0.7)).unwrap().with_seed(42);
        assert_eq!(simulate(&cfg).unwrap(), simulate(&cfg).unwrap());
        let other = simulate(&cfg.with_seed(43)).unwrap();
        assert_ne!(simulate(&cfg).unwrap().points, other.points);
    }

    #[test]
    fn ensemble_walker_zero_follows_simulate() {
        let cfg = WalkConfig::new(300, 0.5, 1.0, params(0.5, 0.25)).unwrap().with_seed(11);
        let traj = simulate(&cfg).unwrap();
        let steps = step_lengths(1.0, cfg.params()).unwrap();
        let (x, u) = final_position(&cfg, steps, 0);
        assert_relative_eq!(u, traj.last().u, epsilon = 1e-10);
        assert_relative_eq!(x, traj.last().x, max_relative = 1e-9);
    }

    #[test]
    fn extreme_probabilities() {
        let cfg = WalkConfig::new(50, 1.0, 1.0, params(0.5, 0.5)).unwrap();
        assert_eq!(right_steps(&cfg, 3), 50);
        let cfg = WalkConfig::new(50, 0.0, 1.0, params(0.5, 0.5)).unwrap();
        assert_eq!(right_steps(&cfg, 3), 0);
    }

    #[test]
    fn asymptote_examples() {
        let t = params(0.5, 1.0);
        let s = asymptotic_position(10_000, 0.5, 1.0, &t).unwrap();
        assert!(!s.saturated);
        assert_relative_eq!(s.position, -2.0, max_relative = 1e-12);
        let k = params(0.5, 0.0);
        assert!(asymptotic_position(1000, 0.5, 1.0, &k).unwrap().position.abs() < 1e-12);
        let s = asymptotic_position(40, 0.3, 0.5, &HomotopyParams::standard()).unwrap();
        assert_relative_eq!(s.position, 40.0 * (2.0 * 0.3 - 1.0) * 0.5, max_relative = 1e-14);
    }

    #[test]
    fn asymptote_matches_printed_formula() {
        for &lambda in &[0.0, 0.3, 0.5, 1.0] {
            for &gl in &[-0.5, 0.2, 0.5] {
                for &p in &[0.3, 0.5, 0.8] {
                    let pr = params(gl, lambda);
                    let tau = characteristic_time(p, 1.0, &pr).unwrap();
                    for &n in &[1usize, 10, 100] {
                        let nt = n as f64 * tau;
                        let printed =
                            (0.5 * (lambda + 1.0) * (-nt).exp() + 0.5 * (lambda - 1.0) * nt.exp() - lambda) / gl;
                        let s = asymptotic_position(n, p, 1.0, &pr).unwrap().position;
                        assert!(
                            (s - printed).abs() <= 1e-10 * printed.abs().max(1.0),
                            "λ={lambda} γl={gl} p={p} n={n}: {s} vs {printed}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn asymptote_saturates_with_sign() {
        let mix = params(0.5, 0.5);
        let s = asymptotic_position(1_000_000, 0.5, 1.0, &mix).unwrap();
        assert!(s.saturated);
        assert_eq!(s.position, f64::NEG_INFINITY);
        let s = asymptotic_position(1_000_000, 0.9, 1.0, &mix).unwrap();
        assert!(s.saturated);
        assert_eq!(s.position, f64::INFINITY);
    }

    #[test]
    fn regime_examples() {
        let r = classify_regime(0.5, 1.0, &params(0.5, 1.0)).unwrap();
        assert_eq!(r.kind, RegimeKind::ConvergesTo(-2.0));
        assert!(!r.extrapolated);
        let r = classify_regime(0.5, 1.0, &params(0.5, 0.0)).unwrap();
        assert_eq!(r.kind, RegimeKind::RandomBounded);
        let r = classify_regime(0.5, 1.0, &params(0.5, 0.5)).unwrap();
        assert_eq!(r.kind, RegimeKind::Diverges);
        assert!(r.tau != 0.0);
        let r = classify_regime(0.7, 1.0, &params(0.5, 0.0)).unwrap();
        assert!(r.extrapolated);
        assert_eq!(r.kind, RegimeKind::Diverges);
    }

    #[test]
    fn exact_distribution_small_cases() {
        let pr = params(0.5, 0.3);
        let atoms = exact_walk_distribution(1, 0.3, 1.0, &pr).unwrap();
        assert_eq!(atoms.len(), 2);
        assert_relative_eq!(atoms[0].x, -1.0, max_relative = 1e-14);
        assert_relative_eq!(atoms[1].x, 1.0, max_relative = 1e-14);
        assert_relative_eq!(atoms[0].probability, 0.7, max_relative = 1e-14);
        assert_relative_eq!(atoms[1].probability, 0.3, max_relative = 1e-14);

        let atoms = exact_walk_distribution(2, 0.5, 1.0, &params(0.5, 0.0)).unwrap();
        assert_eq!(atoms[1].x, 0.0);
        assert_relative_eq!(atoms[1].probability, 0.5, max_relative = 1e-15);
        assert_eq!(atoms[0].x, -atoms[2].x);
        assert_eq!(atoms[0].probability, atoms[2].probability);
    }

    #[test]
    fn binomial_weights_against_direct_evaluation() {
        fn choose(n: u64, k: u64) -> f64 {
            (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
        }
        for &(n, p) in &[(20usize, 0.5), (31, 0.2), (7, 0.9)] {
            let w = binomial_weights(n, p);
            for (k, &v) in w.iter().enumerate() {
                let direct = choose(n as u64, k as u64) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
                assert_relative_eq!(v, direct, max_relative = 1e-12);
            }
        }
        let w = binomial_weights(1_000_000, 0.37);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_distribution_guard() {
        assert!(matches!(
            exact_walk_distribution(MAX_EXACT_STEPS + 1, 0.5, 1.0, &params(0.1, 0.5)),
            Err(Error::SizeGuard { .. })
        ));
    }
}
