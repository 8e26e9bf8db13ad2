use hrw_core::algebra::{
    deform, homotopic_sum, inverse_deform, metric_factor, pdm_mass_ratio, DeformedCoordinate, HomotopyParams,
};
use hrw_core::walk::{characteristic_time, characteristic_time_log_product};
use proptest::prelude::*;

const LAMBDAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const GAMMA_XI: [f64; 6] = [-0.9, -0.5, -0.1, 0.1, 0.5, 0.9];

fn in_domain(x: f64, p: &HomotopyParams) -> bool {
    p.lambda() < 1.0 || 1.0 + p.gamma() * x > 1e-9
}

fn sweep_params() -> impl Strategy<Value = HomotopyParams> {
    (0..GAMMA_XI.len(), 0..LAMBDAS.len(), 0.5f64..3.0)
        .prop_map(|(g, l, xi)| HomotopyParams::from_gamma_xi(GAMMA_XI[g], LAMBDAS[l], xi).unwrap())
}

fn continuous_params() -> impl Strategy<Value = HomotopyParams> {
    (-0.95f64..0.95, 0.0f64..=1.0).prop_map(|(g, l)| HomotopyParams::new(g, l, 1.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn round_trip(p in sweep_params(), s in -10.0f64..10.0) {
        let x = s * p.xi();
        prop_assume!(in_domain(x, &p));
        let back = inverse_deform(deform(x, &p).unwrap(), &p);
        prop_assert!((back - x).abs() <= 1e-12 * s.abs().max(1.0) * p.xi(), "{x} -> {back}");
    }

    #[test]
    fn round_trip_continuous_parameters(p in continuous_params(), x in -10.0f64..10.0) {
        prop_assume!(in_domain(x, &p));
        let back = inverse_deform(deform(x, &p).unwrap(), &p);
        prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0));
    }

    #[test]
    fn kaniadakis_limit(gamma in -2.0f64..2.0, x in -20.0f64..20.0) {
        prop_assume!(gamma.abs() > 1e-3);
        let p = HomotopyParams::new(gamma, 0.0, 1.0).unwrap();
        let oracle = (gamma * x).asinh() / gamma;
        let u = deform(x, &p).unwrap().0;
        prop_assert!((u - oracle).abs() <= 1e-12 * oracle.abs().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn tsallis_limit(gamma in -2.0f64..2.0, s in -0.999f64..20.0) {
        prop_assume!(gamma.abs() > 1e-3);
        let x = s / gamma.abs() * gamma.signum();
        let p = HomotopyParams::new(gamma, 1.0, 1.0).unwrap();
        let oracle = (gamma * x).ln_1p() / gamma;
        let u = deform(x, &p).unwrap().0;
        prop_assert!((u - oracle).abs() <= 1e-12 * oracle.abs().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn sum_is_commutative(p in sweep_params(), a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let (x, y) = (a * p.xi(), b * p.xi());
        prop_assume!(in_domain(x, &p) && in_domain(y, &p));
        let xy = homotopic_sum(x, y, &p).unwrap();
        let yx = homotopic_sum(y, x, &p).unwrap();
        prop_assert!((xy - yx).abs() <= 1e-12 * xy.abs().max(1.0));
    }

    #[test]
    fn sum_is_associative(p in sweep_params(), a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0) {
        let (x, y, z) = (a * p.xi(), b * p.xi(), c * p.xi());
        prop_assume!(in_domain(x, &p) && in_domain(y, &p) && in_domain(z, &p));
        let left = homotopic_sum(homotopic_sum(x, y, &p).unwrap(), z, &p);
        let right = homotopic_sum(x, homotopic_sum(y, z, &p).unwrap(), &p);
        // both orders must agree on whether the partial sums stay in the domain
        if let (Ok(l), Ok(r)) = (left, right) {
            prop_assert!((l - r).abs() <= 1e-9 * l.abs().max(p.xi()), "{l} vs {r}");
        }
    }

    #[test]
    fn zero_is_identity(p in sweep_params(), a in -10.0f64..10.0) {
        let x = a * p.xi();
        prop_assume!(in_domain(x, &p));
        let s = homotopic_sum(x, 0.0, &p).unwrap();
        prop_assert!((s - x).abs() <= 1e-12 * x.abs().max(1.0));
    }

    #[test]
    fn metric_times_mass_is_one(p in continuous_params(), x in -10.0f64..10.0) {
        if !(in_domain(x, &p) && 1.0 + p.gamma() * x > 1e-3) {
            return Ok(());
        }
        let g = metric_factor(x, &p).unwrap();
        let m = pdm_mass_ratio(x, &p).unwrap();
        prop_assert!((g * g * m - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn deform_is_increasing(p in continuous_params(), x in -10.0f64..10.0, dx in 1e-6f64..1.0) {
        prop_assume!(in_domain(x, &p));
        let a = deform(x, &p).unwrap().0;
        let b = deform(x + dx, &p).unwrap().0;
        prop_assert!(b > a);
    }

    #[test]
    fn tau_sign_symmetry(gl in 0.01f64..0.95, lambda in 0.0f64..=1.0) {
        let p = HomotopyParams::new(gl, lambda, 1.0).unwrap();
        let a = characteristic_time(0.5, 1.0, &p).unwrap();
        let b = characteristic_time(0.5, 1.0, &p.mirrored()).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-3));
    }

    #[test]
    fn tau_routes_agree(gl in -0.95f64..0.95, lambda in 0.0f64..=1.0, prob in 0.0f64..=1.0) {
        let p = HomotopyParams::new(gl, lambda, 1.0).unwrap();
        let a = characteristic_time(prob, 1.0, &p).unwrap();
        let b = characteristic_time_log_product(prob, 1.0, &p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}

#[test]
fn monotone_on_fine_grid() {
    for &g in &GAMMA_XI {
        for &l in &LAMBDAS {
            let p = HomotopyParams::from_gamma_xi(g, l, 1.0).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=20_000 {
                let x = -10.0 + i as f64 * 1e-3;
                if !in_domain(x, &p) {
                    continue;
                }
                let u = deform(x, &p).unwrap().0;
                assert!(u > prev, "γξ={g} λ={l} x={x}");
                prev = u;
            }
        }
    }
}

#[test]
fn zero_gamma_approach_is_first_order() {
    // |deform(x) − x| ≈ C·|γ|·x² with a single C
    for &lambda in &[0.25, 0.5, 1.0] {
        let x = 2.0;
        let ratios: Vec<f64> = [1e-2, 1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&g| {
                let p = HomotopyParams::new(g, lambda, 1.0).unwrap();
                (deform(x, &p).unwrap().0 - x).abs() / (g * x * x)
            })
            .collect();
        let c = ratios[ratios.len() - 1];
        assert!((c - 0.5 * lambda).abs() < 1e-4, "{ratios:?}");
        for r in &ratios {
            assert!((r / c - 1.0).abs() < 0.05, "{ratios:?}");
        }
    }
}

#[test]
fn gamma_sign_flip_negates_deformation() {
    for &lambda in &LAMBDAS {
        let p = HomotopyParams::new(0.5, lambda, 1.0).unwrap();
        for &x in &[-1.5, -0.3, 0.0, 0.7, 6.0] {
            let a = deform(x, &p).unwrap().0;
            let b = deform(-x, &p.mirrored()).unwrap().0;
            assert!((a + b).abs() <= 1e-15 * a.abs().max(1.0));
        }
    }
}

#[test]
fn inverse_is_finite_deep_in_the_tsallis_tail() {
    let p = HomotopyParams::new(0.5, 1.0, 1.0).unwrap();
    let x = inverse_deform(DeformedCoordinate(-400.0), &p);
    assert!(x > -2.0 - 1e-15 && x < -2.0 + 1e-15);
}
