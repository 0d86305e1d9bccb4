#![allow(dead_code)]

use num_complex::Complex64;
use peakeq_core::recurrence::coefficients_from_roots;
use peakeq_core::DifferenceEquation;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Real roots and conjugate pairs with modulus below `max_mod`.
pub fn random_roots(rng: &mut ChaCha8Rng, n: usize, max_mod: f64) -> Vec<Complex64> {
    let mut roots = Vec::with_capacity(n);
    while roots.len() < n {
        if n - roots.len() >= 2 && rng.gen_bool(0.5) {
            let r = max_mod * rng.gen::<f64>().sqrt();
            let t = std::f64::consts::PI * rng.gen::<f64>();
            let z = Complex64::from_polar(r, t);
            roots.push(z);
            roots.push(z.conj());
        } else {
            roots.push(Complex64::new(max_mod * (2.0 * rng.gen::<f64>() - 1.0), 0.0));
        }
    }
    roots
}

pub fn random_stable(rng: &mut ChaCha8Rng, n: usize, max_mod: f64) -> DifferenceEquation {
    coefficients_from_roots(&random_roots(rng, n, max_mod)).unwrap()
}

/// Brute force: simulate every sign vertex of the unit box and keep the
/// largest `|x_k|`, `k ∈ [n, horizon]`.
pub fn vertex_brute_force(eq: &DifferenceEquation, horizon: usize) -> f64 {
    let n = eq.order();
    let a = eq.coefficients();
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << n) {
        let mut x: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
        for k in n..=horizon {
            let v: f64 = -(0..n).map(|i| a[i] * x[k - 1 - i]).sum::<f64>();
            x.push(v);
            best = best.max(v.abs());
        }
    }
    best
}

/// Exact `C(k, m)` by the multiplicative formula in `f64` (small arguments).
pub fn binom(k: u64, m: u64) -> f64 {
    if m > k {
        return 0.0;
    }
    (0..m).fold(1.0, |acc, j| acc * (k - j) as f64 / (j + 1) as f64)
}
