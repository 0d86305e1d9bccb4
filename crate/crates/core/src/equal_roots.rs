//! Equations whose characteristic roots all equal `ρ ∈ (0, 1)`:
//! `x_k − C(n,1)ρ x_{k−1} + C(n,2)ρ² x_{k−2} − ... + (−ρ)^n x_{k−n} = 0`.
//!
//! The solution is `x_k = Σ_i x_i P_i(k) ρ^{k−i}` with `P_i` the Lagrange basis
//! on the nodes `0..n`. For `k ≥ n` the signs of `P_i(k)` alternate, which
//! gives the box-worst curve `α_{k,n} = Σ_i |P_i(k)| ρ^{k−i}` (attained by the
//! alternating initial vector) and the impulse curve
//! `β_{k,n} = C(k, n−1) ρ^{k−n+1}`.

use alloc::vec::Vec;

use crate::math;
use crate::recurrence::{ArgmaxTracker, DifferenceEquation, HorizonPolicy, InitialCondition, TIE_TOL};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualRootSpec {
    order: usize,
    rho: f64,
}

impl EqualRootSpec {
    pub fn new(order: usize, rho: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("order must be at least 1"));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::invalid("rho must lie in (0, 1)"));
        }
        Ok(Self { order, rho })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Coefficients `a_i = (−ρ)^i C(n, i)`.
    pub fn equation(&self) -> DifferenceEquation {
        let n = self.order as u64;
        let coeffs = (1..=n)
            .map(|i| {
                let c = math::binomial_exact(n, i).map_or(f64::INFINITY, |c| c as f64);
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                sign * c * math::powi(self.rho, i)
            })
            .collect();
        DifferenceEquation::new(coeffs).expect("finite coefficients for reasonable orders")
    }
}

/// One sample of the α and β curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakCurvePoint {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EqualRootSummary {
    pub alpha_n: f64,
    pub beta_n: f64,
    pub k_alpha: Vec<usize>,
    pub k_beta: Vec<usize>,
    pub rho_star_beta: f64,
    pub rho_star_alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEstimates {
    pub k_alpha_est: f64,
    pub k_beta_est: f64,
    /// Only available for `n ∈ {2, 3}`.
    pub alpha_est: Option<f64>,
    pub beta_est: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub n: usize,
    pub beta_n: f64,
    pub alpha_n: f64,
    pub k_beta: Vec<usize>,
    pub k_alpha: Vec<usize>,
}

/// `P_i(k) = Π_{j≠i} (k−j)/(i−j)`, `j ∈ 0..n`.
pub fn lagrange_basis(n: usize, i: usize, k: i64) -> f64 {
    assert!(i < n, "basis index {i} out of range for order {n}");
    math::lagrange_basis(n, i, k)
}

/// `Σ_i x_i P_i(k) ρ^{k−i}`.
pub fn closed_form_solution(spec: &EqualRootSpec, init: &InitialCondition, k: usize) -> Result<f64> {
    let n = spec.order;
    if init.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: init.len(),
        });
    }
    if k < n {
        return Ok(init.values()[k]);
    }
    let mut acc = 0.0;
    for (i, &x) in init.values().iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        let sign = if (n - 1 - i) % 2 == 0 { 1.0 } else { -1.0 };
        let mag = math::lagrange_abs_times_pow(n, i, k as i64, spec.rho, (k - i) as u64);
        acc += x * sign * mag;
    }
    Ok(acc)
}

/// `α_{k,n} = Σ_i |P_i(k)| ρ^{k−i}`, the maximum of `x_k` over the unit box.
pub fn alpha(k: usize, spec: &EqualRootSpec) -> f64 {
    let n = spec.order;
    assert!(k >= n, "alpha is defined for k ≥ n");
    (0..n)
        .map(|i| math::lagrange_abs_times_pow(n, i, k as i64, spec.rho, (k - i) as u64))
        .sum()
}

/// `β_{k,n} = C(k, n−1) ρ^{k−n+1}`, the impulse response.
pub fn beta(k: usize, spec: &EqualRootSpec) -> f64 {
    let n = spec.order;
    assert!(k + 1 >= n, "beta is defined for k ≥ n − 1");
    math::binomial_times_pow(k as u64, (n - 1) as u64, spec.rho, (k + 1 - n) as u64)
}

pub fn peak_curve(spec: &EqualRootSpec, ks: core::ops::RangeInclusive<usize>) -> Vec<PeakCurvePoint> {
    ks.filter(|&k| k >= spec.order)
        .map(|k| PeakCurvePoint {
            k,
            alpha: alpha(k, spec),
            beta: beta(k, spec),
        })
        .collect()
}

/// `floor((n−1)/(1−ρ))`, snapped to the integer when the quotient is within
/// rounding of one, together with any tied neighbour.
pub fn k_beta(spec: &EqualRootSpec) -> Vec<usize> {
    let n = spec.order;
    let q = (n - 1) as f64 / (1.0 - spec.rho);
    let r = libm::round(q);
    let k = if math::abs(q - r) <= 1e-9 * q.max(1.0) {
        r
    } else {
        math::floor(q)
    } as usize;
    let k = k.max(n - 1);
    let best = beta(k, spec);
    let lo = if k > n - 1 { k - 1 } else { k };
    (lo..=k + 1)
        .filter(|&j| j == k || math::is_tied(beta(j, spec), best, TIE_TOL))
        .collect()
}

/// `(α_n, K_α)`: maximum of `α_{k,n}` over `k ≥ n` by forward scan.
///
/// Stops once `α` has decreased for `2n` consecutive steps beyond the generic
/// estimate `(n−1)/(1−ρ)`; the horizon cap of [`HorizonPolicy::default`]
/// bounds the scan.
pub fn alpha_max(spec: &EqualRootSpec) -> Result<(f64, Vec<usize>)> {
    let n = spec.order;
    let estimate = (n - 1) as f64 / (1.0 - spec.rho);
    let cap = HorizonPolicy::default().cap;
    let mut tracker = ArgmaxTracker::new(TIE_TOL);
    let mut prev = f64::NEG_INFINITY;
    let mut decreasing = 0usize;
    for k in n..=cap {
        let a = alpha(k, spec);
        tracker.offer(k, a);
        decreasing = if a < prev { decreasing + 1 } else { 0 };
        prev = a;
        if decreasing >= 2 * n && k as f64 > estimate {
            return Ok((tracker.best(), tracker.instants()));
        }
    }
    Err(Error::invalid("alpha scan exhausted the horizon cap"))
}

pub fn k_alpha(spec: &EqualRootSpec) -> Result<Vec<usize>> {
    alpha_max(spec).map(|(_, k)| k)
}

/// `ρ*` for the impulse response: `1/n`.
pub fn peak_threshold_beta(n: usize) -> f64 {
    1.0 / n as f64
}

/// `ρ*` for the box worst case: the root of `(1+ρ)^n = 2`, i.e. where
/// `Σ|a_i| = (1+ρ)^n − 1` reaches 1.
pub fn peak_threshold_alpha(n: usize) -> f64 {
    math::pow(2.0, 1.0 / n as f64) - 1.0
}

/// Large-peak asymptotics as `ρ → 1`.
pub fn asymptotic_estimates(spec: &EqualRootSpec) -> AsymptoticEstimates {
    let gap = 1.0 - spec.rho;
    let k_est = (spec.order - 1) as f64 / gap;
    let (alpha_est, beta_est) = match spec.order {
        2 => (Some(2.0 / (math::E * gap)), Some(1.0 / (math::E * gap))),
        3 => {
            let d = math::E * math::E * gap * gap;
            (Some(8.0 / d), Some(2.0 / d))
        }
        _ => (None, None),
    };
    AsymptoticEstimates {
        k_alpha_est: k_est,
        k_beta_est: k_est,
        alpha_est,
        beta_est,
    }
}

pub fn summary(spec: &EqualRootSpec) -> Result<EqualRootSummary> {
    let (alpha_n, k_alpha) = alpha_max(spec)?;
    let k_beta = k_beta(spec);
    Ok(EqualRootSummary {
        alpha_n,
        beta_n: beta(k_beta[0], spec),
        k_alpha,
        k_beta,
        rho_star_beta: peak_threshold_beta(spec.order),
        rho_star_alpha: peak_threshold_alpha(spec.order),
    })
}

/// Row of the `ρ = 1 − 1/n` table.
pub fn table1_row(n: usize) -> Result<Table1Row> {
    if n < 2 {
        return Err(Error::invalid("table rows start at n = 2"));
    }
    let spec = EqualRootSpec::new(n, 1.0 - 1.0 / n as f64)?;
    let nn = (n * n) as u64;
    let beta_n = math::binomial_times_pow(nn - n as u64 - 1, (n - 1) as u64, spec.rho, nn - 2 * n as u64);
    let (alpha_n, k_alpha) = alpha_max(&spec)?;
    Ok(Table1Row {
        n,
        beta_n,
        alpha_n,
        k_beta: k_beta(&spec),
        k_alpha,
    })
}
