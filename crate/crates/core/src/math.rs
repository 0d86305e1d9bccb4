//! Scalar helpers that work without `std`: libm wrappers, overflow-aware
//! binomial coefficients and power products.

pub use libm::{cos, exp, fabs as abs, floor, log as ln, pow, sin, sqrt};

pub const E: f64 = core::f64::consts::E;
pub const PI: f64 = core::f64::consts::PI;

/// `x^k` by repeated squaring; exact for dyadic bases while the result fits.
pub fn powi(x: f64, k: u64) -> f64 {
    let mut base = x;
    let mut exp = k;
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

/// Exact `C(k, m)` when it fits in a `u128`.
pub fn binomial_exact(k: u64, m: u64) -> Option<u128> {
    if m > k {
        return Some(0);
    }
    let m = m.min(k - m);
    let mut acc: u128 = 1;
    for j in 0..m {
        // acc * (k - j) is divisible by (j + 1) after the multiplication.
        acc = acc.checked_mul(u128::from(k - j))? / u128::from(j + 1);
    }
    Some(acc)
}

/// `ln C(k, m)` by direct summation of logs.
pub fn ln_binomial(k: u64, m: u64) -> f64 {
    let m = m.min(k - m);
    (0..m)
        .map(|j| ln((k - j) as f64) - ln((j + 1) as f64))
        .sum()
}

/// `C(k, m) · ρ^e` for `ρ > 0`, switching to log-domain accumulation when the
/// factors overflow or the product would under/overflow in pieces.
pub fn binomial_times_pow(k: u64, m: u64, rho: f64, e: u64) -> f64 {
    if m > k {
        return 0.0;
    }
    if let Some(c) = binomial_exact(k, m) {
        let c = c as f64;
        let p = powi(rho, e);
        if c < 1e300 && p > 1e-290 {
            return c * p;
        }
    }
    exp(ln_binomial(k, m) + e as f64 * ln(rho))
}

/// Lagrange basis polynomial `P_i(k) = Π_{j≠i} (k−j)/(i−j)` on the nodes
/// `0..n`. Integer arithmetic first, log-domain when the numerator overflows.
pub fn lagrange_basis(n: usize, i: usize, k: i64) -> f64 {
    match lagrange_basis_exact(n, i, k) {
        Some(v) => v,
        None => {
            let (sign, log_mag) = lagrange_basis_log(n, i, k);
            sign * exp(log_mag)
        }
    }
}

fn lagrange_basis_exact(n: usize, i: usize, k: i64) -> Option<f64> {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for j in 0..n as i64 {
        if j == i as i64 {
            continue;
        }
        num = num.checked_mul(i128::from(k - j))?;
        den *= i128::from(i as i64 - j);
    }
    if num % den == 0 {
        Some((num / den) as f64)
    } else {
        Some(num as f64 / den as f64)
    }
}

/// `(sign, ln|P_i(k)|)`; the magnitude is `-inf` when `k` is a node `≠ i`.
pub fn lagrange_basis_log(n: usize, i: usize, k: i64) -> (f64, f64) {
    let mut sign = 1.0;
    let mut log_mag = 0.0;
    for j in 0..n as i64 {
        if j == i as i64 {
            continue;
        }
        let num = (k - j) as f64;
        let den = (i as i64 - j) as f64;
        if num == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        if (num < 0.0) != (den < 0.0) {
            sign = -sign;
        }
        log_mag += ln(abs(num)) - ln(abs(den));
    }
    (sign, log_mag)
}

/// `|P_i(k)| · ρ^e` without intermediate overflow.
pub fn lagrange_abs_times_pow(n: usize, i: usize, k: i64, rho: f64, e: u64) -> f64 {
    if let Some(v) = lagrange_basis_exact(n, i, k) {
        let p = powi(rho, e);
        if abs(v) < 1e300 && p > 1e-290 {
            return abs(v) * p;
        }
    }
    let (sign, log_mag) = lagrange_basis_log(n, i, k);
    if sign == 0.0 {
        return 0.0;
    }
    exp(log_mag + e as f64 * ln(rho))
}

pub fn sign_or_plus(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Relative closeness used for argmax tie detection.
pub fn is_tied(value: f64, best: f64, rel_tol: f64) -> bool {
    abs(value - best) <= rel_tol * abs(best).max(f64::MIN_POSITIVE)
}
