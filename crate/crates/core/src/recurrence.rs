//! Scalar linear recurrences `x_k + a_1 x_{k-1} + ... + a_n x_{k-n} = 0`:
//! simulation, characteristic roots, Schur stability and peak computation.
//!
//! The peak of a solution is `max_{k ≥ n} |x_k|`; samples `k < n` are the
//! initial condition itself and never count. Infinite-horizon maxima are
//! computed over an adaptive horizon (see [`HorizonPolicy`]).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math;
use crate::poly::{self, RootCluster, RootFinderOptions};
use crate::{Error, Result};

/// Relative tolerance for reporting tied peak instants.
pub const TIE_TOL: f64 = 1e-9;

/// Coefficients `(a_1, ..., a_n)` of an order-`n` recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceEquation {
    coefficients: Vec<f64>,
}

impl DifferenceEquation {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("equation order must be at least 1"));
        }
        if coefficients.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        Ok(Self { coefficients })
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `Σ |a_i|`.
    pub fn coefficient_abs_sum(&self) -> f64 {
        self.coefficients.iter().map(|a| math::abs(*a)).sum()
    }

    /// Characteristic roots grouped by numerical multiplicity.
    pub fn root_clusters(&self) -> Result<Vec<RootCluster>> {
        poly::roots_clustered(&self.coefficients, &RootFinderOptions::default())
    }

    /// Next sample given the most recent `n` samples (oldest first).
    #[inline]
    fn next(&self, window: &[f64]) -> f64 {
        let n = self.coefficients.len();
        let mut acc = 0.0;
        for (i, a) in self.coefficients.iter().enumerate() {
            acc -= a * window[n - 1 - i];
        }
        acc
    }
}

/// Initial vector `(x_0, ..., x_{n-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialCondition {
    values: Vec<f64>,
}

impl InitialCondition {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("initial values must be finite"));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(math::abs(*x)))
    }

    /// `(0, ..., 0, 1)`.
    pub fn impulse(n: usize) -> Self {
        let mut values = vec![0.0; n];
        if let Some(last) = values.last_mut() {
            *last = 1.0;
        }
        Self { values }
    }

    /// `((−1)^{n−1}, ..., −1, 1)`.
    pub fn alternating(n: usize) -> Self {
        let values = (0..n)
            .map(|i| if (n - 1 - i) % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        Self { values }
    }

    /// `(1, ρ, ..., ρ^{n−1})`.
    pub fn geometric(n: usize, rho: f64) -> Self {
        let values = (0..n).map(|i| math::powi(rho, i as u64)).collect();
        Self { values }
    }

    /// `(1, ..., 1)`.
    pub fn ones(n: usize) -> Self {
        Self {
            values: vec![1.0; n],
        }
    }

    /// `(0, ρ, 2ρ², ..., (n−1)ρ^{n−1})` for an order-`n` equation.
    pub fn ramp(n: usize, rho: f64) -> Self {
        let values = (0..n)
            .map(|i| i as f64 * math::powi(rho, i as u64))
            .collect();
        Self { values }
    }

    pub fn negated(&self) -> Self {
        Self {
            values: self.values.iter().map(|x| -x).collect(),
        }
    }
}

/// Samples `x_0, ..., x_H` of a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<f64>,
}

impl Trajectory {
    pub fn from_samples(samples: Vec<f64>) -> Self {
        Self { samples }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn start_index(&self) -> usize {
        0
    }

    pub fn horizon(&self) -> usize {
        self.samples.len().saturating_sub(1)
    }

    /// Worst normalized residual `|x_k + Σ a_i x_{k−i} − v_k| / (1 + |x_k|)`
    /// over `k ≥ n`, with `v_k` from `forcing` (zero when absent).
    pub fn max_residual(&self, eq: &DifferenceEquation, forcing: Option<&[f64]>) -> f64 {
        let n = eq.order();
        let a = eq.coefficients();
        let mut worst: f64 = 0.0;
        for k in n..self.samples.len() {
            let mut r = self.samples[k];
            for i in 0..n {
                r += a[i] * self.samples[k - 1 - i];
            }
            if let Some(v) = forcing {
                r -= v[k - n];
            }
            worst = worst.max(math::abs(r) / (1.0 + math::abs(self.samples[k])));
        }
        worst
    }

    /// Peak over the stored samples (no horizon extension).
    pub fn peak_over_samples(&self, order: usize) -> PeakReport {
        let mut tracker = ArgmaxTracker::new(TIE_TOL);
        for (k, x) in self.samples.iter().enumerate().skip(order) {
            tracker.offer(k, math::abs(*x));
        }
        tracker.report(self.horizon(), false)
    }
}

/// Peak value and instants of a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakReport {
    pub peak_value: f64,
    /// Every `k ≥ n` within [`TIE_TOL`] (relative) of the maximum, ascending.
    pub peak_instants: Vec<usize>,
    pub horizon_used: usize,
    /// The trailing-window decay test passed before the horizon cap.
    pub certified: bool,
}

impl PeakReport {
    /// A peak in the strict sense: the maximum exceeds the unit scale.
    pub fn has_peak(&self) -> bool {
        self.peak_value > 1.0
    }

    pub fn first_instant(&self) -> usize {
        self.peak_instants[0]
    }
}

/// Horizon control for infinite-horizon maxima.
///
/// Starts from `H₀ = ceil(10·n/(1−ρ̂))` and doubles until the last `n` states are
/// below `decay_tol` times the running maximum, or `cap` is reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonPolicy {
    pub decay_tol: f64,
    pub cap: usize,
}

impl Default for HorizonPolicy {
    fn default() -> Self {
        Self {
            decay_tol: 1e-9,
            cap: 1_000_000,
        }
    }
}

impl HorizonPolicy {
    pub fn with_cap(cap: usize) -> Self {
        Self {
            cap,
            ..Self::default()
        }
    }

    pub fn initial_horizon(&self, order: usize, spectral_radius: f64) -> usize {
        let gap = (1.0 - spectral_radius).max(1e-12);
        let h = math::floor(10.0 * order as f64 / gap) + 1.0;
        let h = if h.is_finite() { h as usize } else { self.cap };
        h.max(order).min(self.cap)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ArgmaxTracker {
    best: f64,
    candidates: Vec<(usize, f64)>,
    rel_tol: f64,
}

impl ArgmaxTracker {
    pub(crate) fn new(rel_tol: f64) -> Self {
        Self {
            best: f64::NEG_INFINITY,
            candidates: Vec::new(),
            rel_tol,
        }
    }

    pub(crate) fn offer(&mut self, k: usize, v: f64) {
        if v > self.best {
            self.best = v;
            let (best, tol) = (self.best, self.rel_tol);
            self.candidates.retain(|&(_, c)| math::is_tied(c, best, tol));
            self.candidates.push((k, v));
        } else if math::is_tied(v, self.best, self.rel_tol) {
            self.candidates.push((k, v));
        }
    }

    pub(crate) fn best(&self) -> f64 {
        self.best
    }

    pub(crate) fn instants(&self) -> Vec<usize> {
        self.candidates.iter().map(|&(k, _)| k).collect()
    }

    pub(crate) fn report(&self, horizon_used: usize, certified: bool) -> PeakReport {
        PeakReport {
            peak_value: self.best.max(0.0),
            peak_instants: self.instants(),
            horizon_used,
            certified,
        }
    }
}

/// `x_0, ..., x_horizon` of the homogeneous recurrence.
pub fn simulate(
    eq: &DifferenceEquation,
    init: &InitialCondition,
    horizon: usize,
) -> Result<Trajectory> {
    let n = eq.order();
    if init.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: init.len(),
        });
    }
    if horizon + 1 < n {
        return Err(Error::invalid("horizon must be at least n − 1"));
    }
    let mut samples = Vec::with_capacity(horizon + 1);
    samples.extend_from_slice(init.values());
    for k in n..=horizon {
        let x = eq.next(&samples[k - n..k]);
        if !x.is_finite() {
            return Err(Error::Overflow { index: k });
        }
        samples.push(x);
    }
    Ok(Trajectory { samples })
}

/// Real coefficients of `Π (λ − λ_i)`. Non-real roots must come with their
/// conjugates (matched to 1e−9).
pub fn coefficients_from_roots(roots: &[Complex64]) -> Result<DifferenceEquation> {
    if roots.is_empty() {
        return Err(Error::invalid("root list is empty"));
    }
    if roots.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::invalid("roots must be finite"));
    }
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        let z = roots[i];
        if used[i] || math::abs(z.im) <= 1e-12 * (1.0 + z.norm()) {
            continue;
        }
        used[i] = true;
        let partner = (0..roots.len()).find(|&j| {
            !used[j] && (roots[j] - z.conj()).norm() <= 1e-9 * (1.0 + z.norm())
        });
        match partner {
            Some(j) => used[j] = true,
            None => return Err(Error::NotConjugateClosed),
        }
    }
    let complex = poly::monic_from_roots(roots);
    let mut coefficients = Vec::with_capacity(complex.len());
    for c in complex {
        if math::abs(c.im) >= 1e-10 * (1.0 + math::abs(c.re)) {
            return Err(Error::NotConjugateClosed);
        }
        coefficients.push(c.re);
    }
    DifferenceEquation::new(coefficients)
}

/// Largest characteristic-root modulus.
pub fn spectral_radius(eq: &DifferenceEquation) -> Result<f64> {
    poly::max_root_modulus(eq.coefficients())
}

/// All roots strictly inside the unit disc.
pub fn is_schur_stable(eq: &DifferenceEquation) -> Result<bool> {
    is_schur_stable_with_margin(eq, 0.0)
}

/// `spectral_radius < 1 − margin`.
pub fn is_schur_stable_with_margin(eq: &DifferenceEquation, margin: f64) -> Result<bool> {
    Ok(spectral_radius(eq)? < 1.0 - margin)
}

fn require_stable(eq: &DifferenceEquation) -> Result<f64> {
    let rho = spectral_radius(eq)?;
    if rho < 1.0 {
        Ok(rho)
    } else {
        Err(Error::Unstable {
            spectral_radius: rho,
        })
    }
}

/// `η(x⁽⁰⁾) = max_{k ≥ n} |x_k|` with the default horizon policy.
pub fn peak(eq: &DifferenceEquation, init: &InitialCondition) -> Result<PeakReport> {
    peak_with_policy(eq, init, &HorizonPolicy::default())
}

pub fn peak_with_policy(
    eq: &DifferenceEquation,
    init: &InitialCondition,
    policy: &HorizonPolicy,
) -> Result<PeakReport> {
    let n = eq.order();
    if init.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: init.len(),
        });
    }
    let rho = require_stable(eq)?;
    let mut samples: Vec<f64> = init.values().to_vec();
    let mut tracker = ArgmaxTracker::new(TIE_TOL);
    let mut horizon = policy.initial_horizon(n, rho);
    loop {
        for k in samples.len()..=horizon {
            let x = eq.next(&samples[k - n..k]);
            if !x.is_finite() {
                return Err(Error::Overflow { index: k });
            }
            samples.push(x);
            tracker.offer(k, math::abs(x));
        }
        let tail = samples[samples.len() - n..]
            .iter()
            .fold(0.0_f64, |m, x| m.max(math::abs(*x)));
        if tail <= policy.decay_tol * tracker.best() {
            return Ok(tracker.report(horizon, true));
        }
        if horizon >= policy.cap {
            return Ok(tracker.report(horizon, false));
        }
        horizon = horizon.saturating_mul(2).min(policy.cap);
    }
}

/// Responses `s_{k,i}` to the canonical initial vectors `e_i`, `k = 0..=horizon`.
/// Row `i` is the trajectory started from `e_i`.
pub fn basis_responses(eq: &DifferenceEquation, horizon: usize) -> Result<Vec<Vec<f64>>> {
    let n = eq.order();
    (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            simulate(eq, &InitialCondition { values: e }, horizon.max(n - 1))
                .map(Trajectory::into_samples)
        })
        .collect()
}

/// Worst case of `η` over the unit box `‖x⁽⁰⁾‖_∞ ≤ 1`.
///
/// `x_k = Σ_i s_{k,i} x_i` is linear in the initial vector, so
/// `max_box |x_k| = Σ_i |s_{k,i}|`, attained at the sign vector of `s_{k,·}`.
pub fn worst_case_peak(
    eq: &DifferenceEquation,
    policy: &HorizonPolicy,
) -> Result<(InitialCondition, PeakReport)> {
    let n = eq.order();
    let rho = require_stable(eq)?;
    // rows[i] holds the basis trajectory e_i; advanced in lock-step.
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();
    let mut tracker = ArgmaxTracker::new(TIE_TOL);
    let mut best_signs = vec![1.0; n];
    let mut horizon = policy.initial_horizon(n, rho);
    let mut sums: Vec<f64> = Vec::new();
    loop {
        let start = rows[0].len();
        for k in start..=horizon {
            let mut sum = 0.0;
            for row in rows.iter_mut() {
                let x = eq.next(&row[k - n..k]);
                if !x.is_finite() {
                    return Err(Error::Overflow { index: k });
                }
                row.push(x);
                sum += math::abs(x);
            }
            let prev_best = tracker.best();
            tracker.offer(k, sum);
            if sum > prev_best {
                for (s, row) in best_signs.iter_mut().zip(&rows) {
                    *s = math::sign_or_plus(row[k]);
                }
            }
            sums.push(sum);
        }
        let tail = sums[sums.len().saturating_sub(n)..]
            .iter()
            .fold(0.0_f64, |m, x| m.max(*x));
        let done = tail <= policy.decay_tol * tracker.best();
        if done || horizon >= policy.cap {
            let init = InitialCondition { values: best_signs };
            return Ok((init, tracker.report(horizon, done)));
        }
        horizon = horizon.saturating_mul(2).min(policy.cap);
    }
}
