//! Bounds for equations with real characteristic roots, peak-existence
//! predicates, and a randomized probe of the worst-case conjecture (equal roots
//! on the boundary circle maximize the box-worst peak).

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equal_roots::{self, EqualRootSpec};
use crate::math;
use crate::recurrence::{
    coefficients_from_roots, spectral_radius, worst_case_peak, DifferenceEquation, HorizonPolicy,
};
use crate::seeds;
use crate::{Error, Result};

/// Below this pairwise gap the Vandermonde formula is refused.
pub const MIN_ROOT_GAP: f64 = 1e-8;

/// Tolerance on the normalized slack `(x_k − β_k)/β_k` of the bound checks.
pub const BOUND_TOL: f64 = 1e-10;

/// Real roots together with the band they are declared to lie in.
#[derive(Debug, Clone, PartialEq)]
pub struct RealRootSet {
    roots: Vec<f64>,
    band: (f64, f64),
}

impl RealRootSet {
    pub fn new(roots: Vec<f64>, lo: f64, hi: f64) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::invalid("root set is empty"));
        }
        if !(lo <= hi) {
            return Err(Error::invalid("band must satisfy lo ≤ hi"));
        }
        if let Some(r) = roots.iter().find(|r| !(**r >= lo && **r <= hi)) {
            return Err(Error::InvalidParameter(alloc::format!(
                "root {r} outside declared band [{lo}, {hi}]"
            )));
        }
        Ok(Self {
            roots,
            band: (lo, hi),
        })
    }

    /// Band `[min, max]` of the roots themselves.
    pub fn tight(roots: Vec<f64>) -> Result<Self> {
        let lo = roots.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = roots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::new(roots, lo, hi)
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn band(&self) -> (f64, f64) {
        self.band
    }

    pub fn order(&self) -> usize {
        self.roots.len()
    }

    pub fn equation(&self) -> DifferenceEquation {
        let zs: Vec<Complex64> = self.roots.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        coefficients_from_roots(&zs).expect("real roots are conjugate closed")
    }
}

/// Outcome of a sandwich-bound check over `k ∈ [n, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheckReport {
    pub horizon: usize,
    /// Lower bound: `min (x_k − β_k)/β_k`. Upper bound: `min (β_k − |x_k|)/β_k`.
    pub min_slack: f64,
    pub worst_k: usize,
    /// Largest `|x_k| / β_k` seen.
    pub max_ratio: f64,
    /// `max_k |x_k|` of the impulse response over the horizon.
    pub peak_value: f64,
    /// `β_n(ρ) = max_k β_{k,n}(ρ)`.
    pub beta_peak: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub roots: Vec<Complex64>,
    pub init: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureProbeReport {
    pub n: usize,
    pub rho: f64,
    pub samples_tested: usize,
    pub max_observed_peak: f64,
    /// `α_n` at `λ_i ≡ ρ`.
    pub reference_peak: f64,
    pub counterexample: Option<Counterexample>,
    pub seed: u64,
}

/// Best configuration found by one partition of the probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePartial {
    pub samples: usize,
    pub best: Option<Counterexample>,
}

/// `x_k = Σ_i λ_i^k / Π_{j≠i}(λ_i − λ_j)` for the initial vector `(0, ..., 0, 1)`.
pub fn impulse_solution_distinct_roots(roots: &RealRootSet, k: usize) -> Result<f64> {
    let r = roots.roots();
    for i in 0..r.len() {
        for j in (i + 1)..r.len() {
            if math::abs(r[i] - r[j]) <= MIN_ROOT_GAP {
                return Err(Error::NearCoincidentRoots {
                    first: r[i],
                    second: r[j],
                    min_gap: MIN_ROOT_GAP,
                });
            }
        }
    }
    let mut acc = 0.0;
    for (i, &li) in r.iter().enumerate() {
        let denom: f64 = r
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, &lj)| li - lj)
            .product();
        acc += math::powi(li, k as u64) / denom;
    }
    Ok(acc)
}

/// Impulse response `x_0, ..., x_horizon` of `Π (1 − λ_i z)` realized as a
/// cascade of first-order sections: `x_{n−1+m} = h_m(λ_1, ..., λ_n)`, the
/// complete homogeneous symmetric polynomial. For nonnegative roots every
/// operation is an addition of nonnegative terms.
pub fn impulse_response_cascade(roots: &[f64], horizon: usize) -> Vec<f64> {
    let n = roots.len();
    let len = (horizon + 2).saturating_sub(n);
    let mut h = vec![0.0; len];
    if len > 0 {
        h[0] = 1.0;
        let first = roots[0];
        for m in 1..len {
            h[m] = h[m - 1] * first;
        }
        for &l in &roots[1..] {
            for m in 1..len {
                h[m] += l * h[m - 1];
            }
        }
    }
    let mut x = vec![0.0; n - 1];
    x.extend(h);
    x.truncate(horizon + 1);
    x
}

fn beta_curve(n: usize, rho: f64, horizon: usize) -> Vec<f64> {
    (0..=horizon)
        .map(|k| {
            if k + 1 < n {
                0.0
            } else {
                math::binomial_times_pow(k as u64, (n - 1) as u64, rho, (k + 1 - n) as u64)
            }
        })
        .collect()
}

fn beta_peak(n: usize, rho: f64) -> f64 {
    match EqualRootSpec::new(n, rho) {
        Ok(spec) => equal_roots::beta(equal_roots::k_beta(&spec)[0], &spec),
        Err(_) => 1.0,
    }
}

/// Lower sandwich bound: roots in `[ρ, 1)` give `x_k ≥ β_{k,n}(ρ)` from the
/// impulse initial vector.
pub fn check_lower_bound(roots: &RealRootSet, rho: f64, horizon: usize) -> Result<BoundCheckReport> {
    let n = roots.order();
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid("rho must lie in (0, 1)"));
    }
    if roots.roots().iter().any(|&l| !(l >= rho && l < 1.0)) {
        return Err(Error::invalid("lower bound needs every root in [rho, 1)"));
    }
    let x = impulse_response_cascade(roots.roots(), horizon);
    let beta = beta_curve(n, rho, horizon);
    let mut report = BoundCheckReport {
        horizon,
        min_slack: f64::INFINITY,
        worst_k: n,
        max_ratio: 0.0,
        peak_value: 0.0,
        beta_peak: beta_peak(n, rho),
    };
    for k in n..=horizon {
        let slack = (x[k] - beta[k]) / beta[k];
        if slack < report.min_slack {
            report.min_slack = slack;
            report.worst_k = k;
        }
        report.max_ratio = report.max_ratio.max(math::abs(x[k]) / beta[k]);
        report.peak_value = report.peak_value.max(math::abs(x[k]));
    }
    if report.min_slack < -BOUND_TOL {
        return Err(Error::BoundViolated {
            k: report.worst_k,
            detail: alloc::format!("x_k below beta_k, relative slack {}", report.min_slack),
        });
    }
    Ok(report)
}

/// Upper sandwich bound: `|λ_i| ≤ ρ` gives `|x_k| ≤ β_{k,n}(ρ)` for the
/// impulse initial vector.
pub fn check_upper_bound(roots: &RealRootSet, rho: f64, horizon: usize) -> Result<BoundCheckReport> {
    let n = roots.order();
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid("rho must lie in (0, 1)"));
    }
    if roots.roots().iter().any(|&l| !(math::abs(l) <= rho)) {
        return Err(Error::invalid("upper bound needs every |root| ≤ rho"));
    }
    let x = impulse_response_cascade(roots.roots(), horizon);
    let beta = beta_curve(n, rho, horizon);
    let mut report = BoundCheckReport {
        horizon,
        min_slack: f64::INFINITY,
        worst_k: n,
        max_ratio: 0.0,
        peak_value: 0.0,
        beta_peak: beta_peak(n, rho),
    };
    for k in n..=horizon {
        if beta[k] == 0.0 {
            // Underflowed tail; the response underflowed with it.
            continue;
        }
        let ratio = math::abs(x[k]) / beta[k];
        let slack = 1.0 - ratio;
        if slack < report.min_slack {
            report.min_slack = slack;
            report.worst_k = k;
        }
        report.max_ratio = report.max_ratio.max(ratio);
        report.peak_value = report.peak_value.max(math::abs(x[k]));
    }
    if report.min_slack < -BOUND_TOL {
        return Err(Error::BoundViolated {
            k: report.worst_k,
            detail: alloc::format!("|x_k| above beta_k, ratio {}", report.max_ratio),
        });
    }
    Ok(report)
}

/// `(−1)^i a_i ≥ C(n, i) ρ^i` for every `i`, which must hold when all roots
/// are at least `ρ` (elementary symmetric functions are monotone in each root).
pub fn necessary_coefficient_conditions(roots: &RealRootSet, rho: f64) -> Result<bool> {
    if !(rho > 0.0) {
        return Err(Error::invalid("rho must be positive"));
    }
    if roots.roots().iter().any(|&l| l < rho) {
        return Err(Error::invalid("every root must be at least rho"));
    }
    let eq = roots.equation();
    let n = eq.order() as u64;
    Ok(eq.coefficients().iter().enumerate().all(|(idx, &a)| {
        let i = idx as u64 + 1;
        let signed = if i % 2 == 0 { a } else { -a };
        let c = math::binomial_exact(n, i).unwrap_or(u128::MAX) as f64;
        let lower = c * math::powi(rho, i);
        signed >= lower * (1.0 - 1e-12)
    }))
}

/// `Σ|a_i| > 1`: some unit-box initial vector produces a peak. `Σ|a_i|` is the
/// box maximum of `|x_n|`, and `Σ|a_i| ≤ 1` keeps every `|x_k| ≤ 1` by
/// induction.
pub fn peak_exists_coefficient_sum(eq: &DifferenceEquation) -> Result<bool> {
    let rho = spectral_radius(eq)?;
    if rho >= 1.0 {
        return Err(Error::Unstable {
            spectral_radius: rho,
        });
    }
    Ok(eq.coefficient_abs_sum() > 1.0)
}

/// `|Σ λ_i| > 1`: sufficient for a peak from `(0, ..., 0, 1)` (then
/// `x_n = Σ λ_i`); also necessary when all roots are positive.
pub fn peak_sufficient_root_sum(roots: &[f64]) -> Result<bool> {
    if roots.iter().any(|l| !(math::abs(*l) < 1.0)) {
        return Err(Error::invalid("roots must lie in the open unit interval"));
    }
    Ok(math::abs(roots.iter().sum::<f64>()) > 1.0)
}

/// Draws one root configuration: repeatedly a real root uniform on `[−ρ, ρ]`
/// or, with probability 1/2 while two slots remain, a conjugate pair uniform
/// in area on the radius-`ρ` disc.
pub fn sample_roots<R: Rng>(rng: &mut R, n: usize, rho: f64) -> Vec<Complex64> {
    let mut roots = Vec::with_capacity(n);
    while roots.len() < n {
        let remaining = n - roots.len();
        if remaining >= 2 && rng.gen_bool(0.5) {
            let r = rho * math::sqrt(rng.gen::<f64>());
            let theta = math::PI * rng.gen::<f64>();
            let z = Complex64::new(r * math::cos(theta), r * math::sin(theta));
            roots.push(z);
            roots.push(z.conj());
        } else {
            roots.push(Complex64::new(rho * (2.0 * rng.gen::<f64>() - 1.0), 0.0));
        }
    }
    roots
}

fn validate_probe(n: usize, rho: f64) -> Result<()> {
    if n == 0 || n > 8 {
        return Err(Error::invalid("probe supports 1 ≤ n ≤ 8"));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid("rho must lie in (0, 1)"));
    }
    Ok(())
}

/// One partition of the probe, seeded independently.
pub fn probe_partition(n: usize, rho: f64, samples: usize, sub_seed: u64) -> Result<ProbePartial> {
    validate_probe(n, rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
    let policy = HorizonPolicy::default();
    let mut best: Option<Counterexample> = None;
    for _ in 0..samples {
        let roots = sample_roots(&mut rng, n, rho);
        let eq = coefficients_from_roots(&roots)?;
        let (init, report) = worst_case_peak(&eq, &policy)?;
        if best.as_ref().map_or(true, |b| report.peak_value > b.value) {
            best = Some(Counterexample {
                roots,
                init: init.values().to_vec(),
                value: report.peak_value,
            });
        }
    }
    Ok(ProbePartial { samples, best })
}

/// Reference value `α_n` at `λ_i ≡ ρ` (the conjectured maximizer).
pub fn conjecture_reference(n: usize, rho: f64) -> Result<f64> {
    validate_probe(n, rho)?;
    let spec = EqualRootSpec::new(n, rho)?;
    Ok(equal_roots::alpha_max(&spec)?.0)
}

/// Combines partition results (in partition order) into the final report.
pub fn merge_probe(
    n: usize,
    rho: f64,
    seed: u64,
    reference_peak: f64,
    partials: impl IntoIterator<Item = ProbePartial>,
) -> ConjectureProbeReport {
    let mut samples_tested = 0;
    let mut best: Option<Counterexample> = None;
    for p in partials {
        samples_tested += p.samples;
        if let Some(c) = p.best {
            if best.as_ref().map_or(true, |b| c.value > b.value) {
                best = Some(c);
            }
        }
    }
    let max_observed_peak = best
        .as_ref()
        .map_or(reference_peak, |b| b.value.max(reference_peak));
    let counterexample = best.filter(|b| b.value > reference_peak * (1.0 + 1e-9));
    ConjectureProbeReport {
        n,
        rho,
        samples_tested,
        max_observed_peak,
        reference_peak,
        counterexample,
        seed,
    }
}

/// Randomized search for root configurations in the radius-`ρ` disc whose
/// box-worst peak beats the equal-root configuration. Deterministic in `seed`.
pub fn conjecture_probe(n: usize, rho: f64, samples: usize, seed: u64) -> Result<ConjectureProbeReport> {
    let reference = conjecture_reference(n, rho)?;
    let partials = seeds::partitions(seed, samples)
        .into_iter()
        .map(|(s, count)| probe_partition(n, rho, count, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_probe(n, rho, seed, reference, partials))
}

impl core::fmt::Display for ConjectureProbeReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let verdict = if self.counterexample.is_some() {
            "counterexample found".to_string()
        } else {
            "no counterexample".to_string()
        };
        write!(
            f,
            "n={} rho={} samples={} max={} reference={} ({verdict})",
            self.n, self.rho, self.samples_tested, self.max_observed_peak, self.reference_peak
        )
    }
}
