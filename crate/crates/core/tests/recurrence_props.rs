mod common;

use common::{random_roots, random_stable, vertex_brute_force};
use num_complex::Complex64;
use peakeq_core::equal_roots::{lagrange_basis, EqualRootSpec};
use peakeq_core::recurrence::{
    coefficients_from_roots, peak, simulate, spectral_radius, worst_case_peak, HorizonPolicy,
};
use peakeq_core::InitialCondition;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn recurrence_residual_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let eq = random_stable(&mut rng, n, 0.95);
        let init: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let t = simulate(&eq, &InitialCondition::new(init).unwrap(), 400).unwrap();
        assert!(t.max_residual(&eq, None) <= 1e-12, "{:?}", eq);
    }
}

#[test]
fn worst_case_equals_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let n = rng.gen_range(1..=6);
        let eq = random_stable(&mut rng, n, 0.9);
        let (init, report) = worst_case_peak(&eq, &HorizonPolicy::default()).unwrap();
        assert!(report.certified);
        let brute = vertex_brute_force(&eq, report.horizon_used);
        assert!((report.peak_value - brute).abs() <= 1e-12 * brute.max(1.0), "{eq:?}");
        let attained = peak(&eq, &init).unwrap();
        assert!((attained.peak_value - report.peak_value).abs() <= 1e-12 * brute.max(1.0));
    }
}

#[test]
fn worst_case_dominates_random_inits() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let n = rng.gen_range(1..=7);
        let eq = random_stable(&mut rng, n, 0.9);
        let (_, wc) = worst_case_peak(&eq, &HorizonPolicy::default()).unwrap();
        for _ in 0..100 {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let p = peak(&eq, &InitialCondition::new(v).unwrap()).unwrap();
            assert!(p.peak_value <= wc.peak_value * (1.0 + 1e-12));
        }
    }
}

#[test]
fn geometric_init_identity() {
    for n in 1..=8 {
        for rho in [0.2, 0.5, 0.75, 0.95] {
            let spec = EqualRootSpec::new(n, rho).unwrap();
            let t = simulate(&spec.equation(), &InitialCondition::geometric(n, rho), 300).unwrap();
            for (k, x) in t.samples().iter().enumerate() {
                let expect = rho.powi(k as i32);
                // Rounding excites the k^j rho^k modes, so the error is measured
                // against the sensitivity of x_k to the initial values.
                let scale: f64 = (0..n)
                    .map(|i| lagrange_basis(n, i, k as i64).abs())
                    .sum::<f64>()
                    * expect;
                assert!((x - expect).abs() <= 1e-10 * scale, "n={n} rho={rho} k={k}");
                if n <= 2 {
                    assert!((x - expect).abs() <= 1e-10 * expect, "n={n} rho={rho} k={k}");
                }
            }
        }
    }
}

#[test]
fn fig1_dashed_curve_shape() {
    let spec = EqualRootSpec::new(4, 0.75).unwrap();
    let t = simulate(&spec.equation(), &InitialCondition::impulse(4), 40).unwrap();
    let x = t.samples();
    // Rises above 1, peaks at k = 11, 12, then decays.
    assert!(x[4] > 1.0);
    for k in 4..11 {
        assert!(x[k + 1] > x[k]);
    }
    for k in 12..40 {
        assert!(x[k + 1] < x[k]);
    }
    assert!((x[12] - 16.519).abs() < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sign_symmetry(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eq = random_stable(&mut rng, n, 0.9);
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let init = InitialCondition::new(v).unwrap();
        let p = peak(&eq, &init).unwrap();
        let q = peak(&eq, &init.negated()).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn roots_round_trip(seed in any::<u64>(), n in 1usize..=10) {
        // Separated roots: rejection-sample until pairwise gaps exceed 0.05.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let roots = loop {
            let r = random_roots(&mut rng, n, 0.98);
            let ok = r.iter().enumerate().all(|(i, a)| {
                r.iter().skip(i + 1).all(|b| (a - b).norm() > 0.05 || (*a - b.conj()).norm() < 1e-15 && a.im != 0.0)
            });
            if ok { break r; }
        };
        let eq = coefficients_from_roots(&roots).unwrap();
        let expect = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let got = spectral_radius(&eq).unwrap();
        prop_assert!((got - expect).abs() <= 1e-8, "got {} expect {}", got, expect);
    }

    #[test]
    fn equal_root_spectral_radius(n in 1usize..=8, rho in 0.05f64..0.99) {
        let eq = coefficients_from_roots(&vec![Complex64::new(rho, 0.0); n]).unwrap();
        prop_assert!((spectral_radius(&eq).unwrap() - rho).abs() <= 1e-9);
    }
}
