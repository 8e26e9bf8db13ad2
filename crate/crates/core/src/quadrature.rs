//! Numerical quadrature: globally adaptive Gauss–Kronrod (7/15) on finite
//! intervals and Gauss–Hermite rules for Gaussian expectations.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

// Kronrod nodes and weights as tabulated, beyond f64 precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// 7-point Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Value and error estimate of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

/// Turns a result into a value, or a tolerance error carrying the estimate.
pub fn accept(result: QuadratureResult, tolerance: f64) -> Result<f64> {
    if result.value.is_finite() && result.error_estimate <= tolerance {
        Ok(result.value)
    } else {
        Err(Error::ToleranceNotReached {
            tolerance,
            estimate: result.error_estimate,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod 7/15 integrator.
#[derive(Debug, Clone, Copy)]
pub struct GaussKronrod {
    pub abs_tolerance: f64,
    /// Relative floor below which rounding dominates and refinement stops.
    pub rel_tolerance: f64,
    pub max_intervals: usize,
}

impl GaussKronrod {
    pub fn new(abs_tolerance: f64) -> Self {
        Self {
            abs_tolerance,
            rel_tolerance: 1e-14,
            max_intervals: 4000,
        }
    }

    fn segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = f(c);
        let mut kronrod = WGK[7] * fc;
        let mut gauss = WG[3] * fc;
        for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
            let pair = f(c - h * x) + f(c + h * x);
            kronrod += w * pair;
            if j % 2 == 1 {
                gauss += WG[j / 2] * pair;
            }
        }
        Segment {
            a,
            b,
            value: kronrod * h,
            error: ((kronrod - gauss) * h).abs(),
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> QuadratureResult {
        let first = Self::segment(&f, a, b);
        let mut heap = BinaryHeap::new();
        let (mut value, mut error) = (first.value, first.error);
        heap.push(first);
        while error > self.abs_tolerance.max(self.rel_tolerance * value.abs())
            && heap.len() < self.max_intervals
            && error.is_finite()
        {
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                heap.push(worst);
                break;
            }
            let left = Self::segment(&f, worst.a, mid);
            let right = Self::segment(&f, mid, worst.b);
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
        }
        // re-sum to shed the drift of the running updates
        let value = heap.iter().map(|s| s.value).sum();
        let error = heap.iter().map(|s| s.error).sum();
        QuadratureResult {
            value,
            error_estimate: error,
            intervals: heap.len(),
        }
    }

    /// Integrates across consecutive breakpoints, each piece adaptively.
    pub fn integrate_pieces<F: Fn(f64) -> f64>(&self, f: F, breakpoints: &[f64]) -> QuadratureResult {
        let pieces = breakpoints.len().saturating_sub(1).max(1) as f64;
        let per_piece = Self {
            abs_tolerance: self.abs_tolerance / pieces,
            ..*self
        };
        breakpoints.windows(2).fold(
            QuadratureResult {
                value: 0.0,
                error_estimate: 0.0,
                intervals: 0,
            },
            |acc, w| {
                let r = per_piece.integrate(&f, w[0], w[1]);
                QuadratureResult {
                    value: acc.value + r.value,
                    error_estimate: acc.error_estimate + r.error_estimate,
                    intervals: acc.intervals + r.intervals,
                }
            },
        )
    }
}

/// Gauss–Hermite rule for ∫ e^{−z²} f(z) dz.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds an `n`-node rule by Newton iteration on orthonormal Hermite
    /// polynomials.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
        let pim4 = PI.powf(-0.25);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        let mut z = 0.0f64;
        for i in 0..n.div_ceil(2) {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (pim4, 0.0);
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }

    /// E[f(U)] for U ~ N(0, σ²).
    pub fn gaussian_expectation<F: Fn(f64) -> f64>(&self, sigma: f64, f: F) -> f64 {
        let scale = std::f64::consts::SQRT_2 * sigma;
        self.integrate(|z| f(scale * z)) / PI.sqrt()
    }
}

/// Evaluates a Gaussian expectation with `coarse` and `2·coarse` nodes and
/// returns the fine value if both agree to `rel_tol` (absolute below 1).
pub fn gaussian_expectation_checked<F: Fn(f64) -> f64>(
    coarse: &GaussHermite,
    fine: &GaussHermite,
    sigma: f64,
    rel_tol: f64,
    quantity: &'static str,
    f: F,
) -> Result<f64> {
    let c = coarse.gaussian_expectation(sigma, &f);
    let v = fine.gaussian_expectation(sigma, &f);
    if (c - v).abs() <= rel_tol * v.abs().max(1.0) && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::QuadratureNonConvergence {
            quantity,
            coarse: c,
            fine: v,
        })
    }
}
