mod common;

use common::{binom, random_stable};
use peakeq_core::equal_roots::{alpha, alpha_max, EqualRootSpec};
use peakeq_core::noise::{
    box_lp_max, box_lp_max_range, geometric_tail_bound, noise_convolution_bound, simulate_noisy,
    steady_state, NoiseBand, NoiseSequence,
};
use peakeq_core::recurrence::{simulate, worst_case_peak, HorizonPolicy};
use peakeq_core::special::markov_equation;
use peakeq_core::InitialCondition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn band(eps: f64) -> NoiseBand {
    NoiseBand::new(eps).unwrap()
}

#[test]
fn superposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let eq = random_stable(&mut rng, n, 0.95);
        let h = 150;
        let init = InitialCondition::new((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()).unwrap();
        let v = NoiseSequence::new((n..=h).map(|_| rng.gen_range(-0.5..=0.5)).collect()).unwrap();
        let full = simulate_noisy(&eq, &init, &v, h).unwrap();
        let free = simulate(&eq, &init, h).unwrap();
        let forced = simulate_noisy(&eq, &InitialCondition::new(vec![0.0; n]).unwrap(), &v, h).unwrap();
        for k in 0..=h {
            let sum = free.samples()[k] + forced.samples()[k];
            assert!((full.samples()[k] - sum).abs() <= 1e-10 * (1.0 + sum.abs()), "k={k}");
        }
        assert!(full.max_residual(&eq, Some(v.values())) <= 1e-12);
    }
}

#[test]
fn zero_noise_matches_simulate() {
    let eq = EqualRootSpec::new(3, 0.8).unwrap().equation();
    let init = InitialCondition::alternating(3);
    let a = simulate(&eq, &init, 60).unwrap();
    let b = simulate_noisy(&eq, &init, &NoiseSequence::zeros(58), 60).unwrap();
    assert_eq!(a, b);
}

#[test]
fn impulse_noise_is_binomial() {
    for n in 1..=5 {
        let rho = 0.8;
        let eq = EqualRootSpec::new(n, rho).unwrap().equation();
        let mut v = vec![0.0; 80 - n + 1];
        v[0] = 1.0;
        let t = simulate_noisy(&eq, &InitialCondition::new(vec![0.0; n]).unwrap(), &NoiseSequence::new(v).unwrap(), 80).unwrap();
        for tt in n..=80 {
            let d = tt - n;
            let expect = binom((d + n - 1) as u64, (n - 1) as u64) * rho.powi(d as i32);
            // Recursion on an n-fold root loses digits past n = 3.
            let tol = if n <= 3 { 1e-10 } else { 1e-7 };
            assert!((t.samples()[tt] - expect).abs() <= tol * expect, "n={n} t={tt}");
        }
    }
}

#[test]
fn equal_root_optimum_is_attained() {
    for n in 1..=5 {
        for rho in [0.3, 0.75, 0.9] {
            for eps in [0.0, 0.2, 1.0] {
                let eq = EqualRootSpec::new(n, rho).unwrap().equation();
                let sols = box_lp_max_range(&eq, &band(eps), n..=120).unwrap();
                let t = simulate_noisy(&eq, &InitialCondition::alternating(n), &NoiseSequence::constant(eps, 121 - n), 120).unwrap();
                for s in &sols {
                    assert_eq!(s.argmax_init, InitialCondition::alternating(n));
                    assert!(s.argmax_noise.values().iter().all(|&v| v == eps));
                    let x = t.samples()[s.t];
                    assert!((s.value - x).abs() <= 1e-9 * s.value, "n={n} rho={rho} eps={eps} t={}", s.t);
                }
            }
        }
    }
}

#[test]
fn box_lp_vertex_brute_force() {
    // Enumerate every sign vertex of the joint box for small t.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let eq = random_stable(&mut rng, n, 0.9);
        let eps = rng.gen_range(0.0..1.0);
        let t = n + 5;
        let dims = n + (t - n + 1);
        let mut best = f64::NEG_INFINITY;
        for mask in 0u32..(1 << dims) {
            let s = |j: usize| if mask >> j & 1 == 1 { 1.0 } else { -1.0 };
            let init = InitialCondition::new((0..n).map(s).collect()).unwrap();
            let v = NoiseSequence::new((n..dims).map(|j| eps * s(j)).collect()).unwrap();
            best = best.max(simulate_noisy(&eq, &init, &v, t).unwrap().samples()[t]);
        }
        let sol = box_lp_max(&eq, &band(eps), t).unwrap();
        assert!((sol.value - best).abs() <= 1e-12 * best.max(1.0));
        let x = simulate_noisy(&eq, &sol.argmax_init, &sol.argmax_noise, t).unwrap().samples()[t];
        assert!((x - sol.value).abs() <= 1e-12 * best.max(1.0));
    }
}

#[test]
fn zero_noise_is_worst_case() {
    for n in 1..=5 {
        let spec = EqualRootSpec::new(n, 0.7).unwrap();
        let eq = spec.equation();
        let sols = box_lp_max_range(&eq, &band(0.0), n..=60).unwrap();
        for s in &sols {
            assert!((s.value - alpha(s.t, &spec)).abs() <= 1e-10 * s.value);
        }
        let (_, wc) = worst_case_peak(&eq, &HorizonPolicy::default()).unwrap();
        let lp_max = sols.iter().map(|s| s.value).fold(0.0, f64::max);
        assert!((lp_max - wc.peak_value).abs() <= 1e-10 * lp_max);
    }
}

#[test]
fn monotone_in_epsilon() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..30 {
        let n = rng.gen_range(1..=6);
        let eq = random_stable(&mut rng, n, 0.95);
        let t = rng.gen_range(n..n + 100);
        let mut prev = f64::NEG_INFINITY;
        for j in 0..=20 {
            let v = box_lp_max(&eq, &band(j as f64 * 0.1), t).unwrap().value;
            assert!(v >= prev);
            prev = v;
        }
    }
}

#[test]
fn tail_bound_dominates() {
    for n in 1..=6 {
        for rho in [0.2, 0.5, 0.75, 0.9] {
            for eps in [0.0, 0.1, 1.0] {
                let tail = geometric_tail_bound(n, rho, &band(eps)).unwrap();
                let eq = EqualRootSpec::new(n, rho).unwrap().equation();
                for s in box_lp_max_range(&eq, &band(eps), n..=400).unwrap() {
                    if eps > 0.0 {
                        assert!(s.value < tail, "n={n} rho={rho} eps={eps} t={}", s.t);
                    } else {
                        assert!(s.value <= tail * (1.0 + 1e-9));
                    }
                }
            }
        }
    }
}

#[test]
fn equal_root_noise_sensitivities_positive() {
    for n in 1..=6 {
        for rho in [0.1, 0.6, 0.95] {
            let eq = EqualRootSpec::new(n, rho).unwrap().equation();
            let t = simulate(&eq, &InitialCondition::impulse(n), 200).unwrap();
            assert!(t.samples()[n - 1..].iter().all(|&h| h > 0.0));
        }
    }
}

#[test]
fn markov_optimal_noise_has_mixed_signs() {
    let eq = markov_equation(0.9).unwrap();
    let sol = box_lp_max(&eq, &band(0.3), 40).unwrap();
    let v = sol.argmax_noise.values();
    assert!(v.iter().any(|&x| x > 0.0) && v.iter().any(|&x| x < 0.0));
}

#[test]
fn convolution_bound_examples() {
    let spec = EqualRootSpec::new(4, 0.75).unwrap();
    assert_eq!(noise_convolution_bound(4, 0.75, &band(0.0), 30).unwrap(), alpha(30, &spec));
    for n in 1..=6 {
        let s = EqualRootSpec::new(n, 0.6).unwrap();
        let one_step = noise_convolution_bound(n, 0.6, &band(0.5), n).unwrap();
        assert!((one_step - alpha(n, &s) - 0.5).abs() < 1e-14);
    }
    let lp = box_lp_max(&EqualRootSpec::new(2, 0.5).unwrap().equation(), &band(1.0), 10).unwrap();
    let cb = noise_convolution_bound(2, 0.5, &band(1.0), 10).unwrap();
    assert!((lp.value - cb).abs() <= 1e-12 * cb);
    let lp4 = box_lp_max(&spec.equation(), &band(0.2), 30).unwrap();
    assert!((lp4.value - noise_convolution_bound(4, 0.75, &band(0.2), 30).unwrap()).abs() <= 1e-9 * lp4.value);
}

#[test]
fn tail_series_partial_sums() {
    // S_m = Σ_j C(j+m−1, m−1) ρ^j = (1−ρ)^{−m}.
    let rho: f64 = 0.9;
    assert_eq!(binom(0, 0), 1.0);
    for m in 1..=5u64 {
        let mut s = 0.0;
        let mut term = 1.0;
        for j in 0..10_000u64 {
            if j > 0 {
                term *= rho * (j + m - 1) as f64 / j as f64;
            }
            s += term;
        }
        assert!((s - (1.0 - rho).powi(-(m as i32))).abs() / s < 1e-6, "m={m}");
    }
    let spec = EqualRootSpec::new(4, 0.75).unwrap();
    let tail = geometric_tail_bound(4, 0.75, &band(1.0)).unwrap();
    assert!((tail - alpha_max(&spec).unwrap().0 - 256.0).abs() < 1e-9);
    assert_eq!(geometric_tail_bound(4, 0.75, &band(0.0)).unwrap(), alpha_max(&spec).unwrap().0);
}

#[test]
fn steady_state_convergence() {
    let x_star = steady_state(4, 0.75, &band(0.4)).unwrap();
    assert!((x_star - 102.4).abs() < 1e-12);
    assert_eq!(steady_state(4, 0.75, &band(0.0)).unwrap(), 0.0);
    let eq = EqualRootSpec::new(4, 0.75).unwrap().equation();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut finals = Vec::new();
    for init in [
        InitialCondition::alternating(4),
        InitialCondition::new((0..4).map(|_| rng.gen_range(-1.0..=1.0)).collect()).unwrap(),
        InitialCondition::new((0..4).map(|_| rng.gen_range(-1.0..=1.0)).collect()).unwrap(),
    ] {
        let t = simulate_noisy(&eq, &init, &NoiseSequence::constant(0.4, 397), 400).unwrap();
        let x = t.samples()[400];
        assert!((x - x_star).abs() / x_star < 1e-3);
        finals.push(x);
    }
    assert!((finals[1] - finals[2]).abs() / finals[1] < 1e-3);
}

#[test]
fn noise_validation() {
    assert!(NoiseBand::new(-0.1).is_err());
    let v = NoiseSequence::new(vec![0.1, -0.3]).unwrap();
    assert!(v.validate_against(&band(0.3)).is_ok());
    assert!(v.validate_against(&band(0.2)).is_err());
    let eq = EqualRootSpec::new(2, 0.5).unwrap().equation();
    assert!(simulate_noisy(&eq, &InitialCondition::impulse(2), &NoiseSequence::zeros(3), 10).is_err());
}
