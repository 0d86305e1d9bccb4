//! Two worked families: Markov's fourth-order equation with doubled complex
//! roots, and the trinomial `x_{k+1} − a x_k + b x_{k−n} = 0`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math;
use crate::recurrence::{
    is_schur_stable, peak, spectral_radius, DifferenceEquation, InitialCondition, PeakReport,
};
use crate::seeds;
use crate::{Error, Result};

// ---------------------------------------------------------------- Markov

/// `x_{k+4} + 2ρ x_{k+3} + 3ρ² x_{k+2} + 2ρ³ x_{k+1} + ρ⁴ x_k = 0`; roots
/// `ρ e^{±2πj/3}`, each doubled. `ρ = 1` is constructible but unstable.
pub fn markov_equation(rho: f64) -> Result<DifferenceEquation> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::invalid("rho must lie in (0, 1]"));
    }
    DifferenceEquation::new(vec![
        2.0 * rho,
        3.0 * rho * rho,
        2.0 * rho * rho * rho,
        rho * rho * rho * rho,
    ])
}

/// `x_0 = x_1 = x_3 = 0, x_2 = −1`.
pub fn markov_init() -> InitialCondition {
    InitialCondition::new(vec![0.0, 0.0, -1.0, 0.0]).expect("finite")
}

/// `x_k = 2ρ^{k−2}(k−1) sin(2πk/3)/√3`: `±(k−1)ρ^{k−2}` off multiples of 3,
/// zero on them.
pub fn markov_closed_form(rho: f64, k: usize) -> f64 {
    match k % 3 {
        0 => 0.0,
        _ if k < 2 => 0.0,
        r => {
            let mag = (k - 1) as f64 * math::powi(rho, (k - 2) as u64);
            if r == 1 {
                mag
            } else {
                -mag
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovEstimates {
    pub k_est: f64,
    pub eta_est: f64,
    pub rho_star: f64,
}

/// `K ≈ 1/(1−ρ)`, `η ≈ 1/(eρ(1−ρ))`, and the threshold `ρ* = 1/√3`.
pub fn markov_peak_estimates(rho: f64) -> Result<MarkovEstimates> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid("rho must lie in (0, 1)"));
    }
    Ok(MarkovEstimates {
        k_est: 1.0 / (1.0 - rho),
        eta_est: 1.0 / (math::E * rho * (1.0 - rho)),
        rho_star: 1.0 / math::sqrt(3.0),
    })
}

/// Simulated peak from the Markov initial vector. Refuses `ρ = 1`.
pub fn markov_peak(rho: f64) -> Result<PeakReport> {
    peak(&markov_equation(rho)?, &markov_init())
}

// ---------------------------------------------------------------- trinomial

/// `x_{k+1} − a x_k + b x_{k−n} = 0`, an order-`(n+1)` recurrence with
/// characteristic polynomial `λ^{n+1} − aλ^n + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrinomialEquation {
    pub delay_order: usize,
    pub a: f64,
    pub b: f64,
}

impl TrinomialEquation {
    pub fn new(delay_order: usize, a: f64, b: f64) -> Result<Self> {
        if delay_order == 0 {
            return Err(Error::invalid("delay order must be at least 1"));
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::invalid("a and b must be finite"));
        }
        Ok(Self { delay_order, a, b })
    }

    pub fn to_equation(&self) -> DifferenceEquation {
        trinomial_to_equation(self)
    }
}

/// Coefficient vector `(−a, 0, ..., 0, b)` of length `n + 1`.
pub fn trinomial_to_equation(tri: &TrinomialEquation) -> DifferenceEquation {
    let mut c = vec![0.0; tri.delay_order + 1];
    c[0] = -tri.a;
    c[tri.delay_order] += tri.b;
    DifferenceEquation::new(c).expect("finite trinomial coefficients")
}

/// A point of the stability boundary. `omega = 0` and `omega = π` tag the real
/// root lines `λ = 1` and `λ = −1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub omega: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityBoundary {
    pub n: usize,
    pub points: Vec<BoundaryPoint>,
    /// Samples dropped because `sin(nω)` vanished.
    pub singular_gaps: usize,
    /// D-decomposition samples with other roots outside the unit disc; they lie
    /// on the curve but not on the boundary of the stability domain.
    pub off_boundary: usize,
}

/// Tolerance of the spectral-radius check on boundary points.
pub const BOUNDARY_TOL: f64 = 1e-6;

const A_RANGE: (f64, f64) = (-2.2, 2.2);
const B_RANGE: (f64, f64) = (-1.2, 1.2);

/// Boundary of the trinomial stability domain by D-decomposition.
///
/// Setting `p(e^{jω}) = 0` and splitting real and imaginary parts gives the
/// complex-root curve `a(ω) = sin((n+1)ω)/sin(nω)`, `b(ω) = sin ω / sin(nω)`;
/// the real roots `λ = ±1` give the lines `1 − a + b = 0` and
/// `b = (−1)^n (1 + a)`. Every sample is checked against the root finder and
/// only those with spectral radius within [`BOUNDARY_TOL`] of 1 are emitted.
pub fn stability_boundary(n: usize, resolution: usize) -> Result<StabilityBoundary> {
    if n == 0 {
        return Err(Error::invalid("delay order must be at least 1"));
    }
    if resolution < 2 {
        return Err(Error::invalid("resolution must be at least 2"));
    }
    let nf = n as f64;
    let mut candidates = Vec::with_capacity(3 * resolution);
    let mut singular_gaps = 0;
    for j in 1..resolution {
        let omega = math::PI * j as f64 / resolution as f64;
        let s = math::sin(nf * omega);
        if math::abs(s) < 1e-9 {
            singular_gaps += 1;
            continue;
        }
        candidates.push(BoundaryPoint {
            omega,
            a: math::sin((nf + 1.0) * omega) / s,
            b: math::sin(omega) / s,
        });
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    for j in 0..=resolution {
        let a = A_RANGE.0 + (A_RANGE.1 - A_RANGE.0) * j as f64 / resolution as f64;
        candidates.push(BoundaryPoint { omega: 0.0, a, b: a - 1.0 });
        candidates.push(BoundaryPoint {
            omega: math::PI,
            a,
            b: sign * (1.0 + a),
        });
    }
    let mut points = Vec::with_capacity(candidates.len());
    let mut off_boundary = 0;
    for p in candidates {
        let r = spectral_radius(&TrinomialEquation::new(n, p.a, p.b)?.to_equation())?;
        if math::abs(r - 1.0) <= BOUNDARY_TOL {
            points.push(p);
        } else {
            off_boundary += 1;
        }
    }
    Ok(StabilityBoundary {
        n,
        points,
        singular_gaps,
        off_boundary,
    })
}

/// Membership of `(a, b)` in the stability domain `S`, the Cohn rhombus
/// `|a| + |b| ≤ 1`, and the peak domain `P = S ∖ {Σ|a_i| ≤ 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSample {
    pub a: f64,
    pub b: f64,
    pub in_stability: bool,
    pub in_cohn: bool,
    pub in_peak_domain: bool,
}

pub fn classify_point(n: usize, a: f64, b: f64) -> Result<RegionSample> {
    let eq = TrinomialEquation::new(n, a, b)?.to_equation();
    let in_stability = is_schur_stable(&eq)?;
    let abs_sum = math::abs(a) + math::abs(b);
    Ok(RegionSample {
        a,
        b,
        in_stability,
        in_cohn: abs_sum <= 1.0,
        in_peak_domain: in_stability && abs_sum > 1.0,
    })
}

/// Raw Monte Carlo counts over the sampling box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RegionCounts {
    pub samples: usize,
    pub stable: usize,
    pub cohn: usize,
    pub peak: usize,
}

impl RegionCounts {
    pub fn merge(self, other: Self) -> Self {
        Self {
            samples: self.samples + other.samples,
            stable: self.stable + other.stable,
            cohn: self.cohn + other.cohn,
            peak: self.peak + other.peak,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionAreas {
    pub n: usize,
    pub samples: usize,
    pub area_s: f64,
    pub area_p: f64,
    pub area_c: f64,
    /// `A(P)/A(S)`.
    pub ratio: f64,
    pub std_err_s: f64,
    pub std_err_p: f64,
    pub std_err_ratio: f64,
    /// A Cohn sample was classified unstable (should never happen).
    pub cohn_outside_s: usize,
}

pub const MIN_AREA_SAMPLES: usize = 10_000;

pub fn sampling_box_area() -> f64 {
    (A_RANGE.1 - A_RANGE.0) * (B_RANGE.1 - B_RANGE.0)
}

fn draw_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let a = A_RANGE.0 + (A_RANGE.1 - A_RANGE.0) * rng.gen::<f64>();
    let b = B_RANGE.0 + (B_RANGE.1 - B_RANGE.0) * rng.gen::<f64>();
    (a, b)
}

/// `count` uniform points of the box, classified.
pub fn region_samples(n: usize, count: usize, sub_seed: u64) -> Result<Vec<RegionSample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
    (0..count)
        .map(|_| {
            let (a, b) = draw_point(&mut rng);
            classify_point(n, a, b)
        })
        .collect()
}

/// Counts for one seeded partition. Also tallies Cohn points found unstable.
pub fn region_partition(n: usize, count: usize, sub_seed: u64) -> Result<(RegionCounts, usize)> {
    let mut counts = RegionCounts::default();
    let mut cohn_outside = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
    for _ in 0..count {
        let (a, b) = draw_point(&mut rng);
        let s = classify_point(n, a, b)?;
        counts.samples += 1;
        counts.stable += usize::from(s.in_stability);
        counts.cohn += usize::from(s.in_cohn);
        counts.peak += usize::from(s.in_peak_domain);
        cohn_outside += usize::from(s.in_cohn && !s.in_stability);
    }
    Ok((counts, cohn_outside))
}

pub fn finish_areas(n: usize, counts: RegionCounts, cohn_outside_s: usize) -> RegionAreas {
    let box_area = sampling_box_area();
    let total = counts.samples as f64;
    let frac = |c: usize| c as f64 / total;
    let se = |p: f64, m: f64| if m > 0.0 { math::sqrt(p * (1.0 - p) / m) } else { 0.0 };
    let ps = frac(counts.stable);
    let pp = frac(counts.peak);
    let ratio = if counts.stable > 0 {
        counts.peak as f64 / counts.stable as f64
    } else {
        0.0
    };
    RegionAreas {
        n,
        samples: counts.samples,
        area_s: box_area * ps,
        area_p: box_area * pp,
        area_c: box_area * frac(counts.cohn),
        ratio,
        std_err_s: box_area * se(ps, total),
        std_err_p: box_area * se(pp, total),
        std_err_ratio: se(ratio, counts.stable as f64),
        cohn_outside_s,
    }
}

/// Monte Carlo areas of `S` and `P` over `a ∈ [−2.2, 2.2]`, `b ∈ [−1.2, 1.2]`.
pub fn region_areas(n: usize, samples: usize, seed: u64) -> Result<RegionAreas> {
    if samples < MIN_AREA_SAMPLES {
        return Err(Error::invalid("area estimation needs at least 10^4 samples"));
    }
    let mut counts = RegionCounts::default();
    let mut outside = 0;
    for (s, c) in seeds::partitions(seed, samples) {
        let (part, o) = region_partition(n, c, s)?;
        counts = counts.merge(part);
        outside += o;
    }
    Ok(finish_areas(n, counts, outside))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleRootFamily {
    pub b2: f64,
    pub rho: f64,
    /// `1 < a < 1 + 1/n`, the band where the family is described.
    pub in_stated_band: bool,
}

/// `b₂ = a^{n+1} nⁿ/(n+1)^{n+1}`, the `b` at which `ρ = an/(n+1)` is a double
/// root of `λ^{n+1} − aλ^n + b`.
pub fn double_root_family(n: usize, a: f64) -> Result<DoubleRootFamily> {
    if n == 0 || !a.is_finite() {
        return Err(Error::invalid("need n ≥ 1 and finite a"));
    }
    let nf = n as f64;
    let rho = a * nf / (nf + 1.0);
    let b2 = math::powi(a, n as u64 + 1) * math::powi(nf, n as u64) / math::powi(nf + 1.0, n as u64 + 1);
    let p = math::powi(rho, n as u64 + 1) - a * math::powi(rho, n as u64) + b2;
    let dp = (nf + 1.0) * math::powi(rho, n as u64) - a * nf * math::powi(rho, n as u64 - 1);
    if math::abs(p) > 1e-10 || math::abs(dp) > 1e-10 {
        return Err(Error::InvalidParameter(alloc::format!(
            "double-root residuals too large: p = {p}, p' = {dp}"
        )));
    }
    Ok(DoubleRootFamily {
        b2,
        rho,
        in_stated_band: a > 1.0 && a < 1.0 + 1.0 / nf,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RampSolution {
    pub rho: f64,
    pub b2: f64,
    /// `(0, ρ, 2ρ², ..., nρⁿ)`.
    pub init: InitialCondition,
    /// `floor(1/(1−ρ))`.
    pub peak_instant: usize,
    /// `K ρ^K / (nρⁿ)`, the peak normalized by `‖x⁽⁰⁾‖_∞ = nρⁿ`.
    pub eta_normalized: f64,
    /// `ρ^{1/(1−ρ)} / ((1−ρ) nρⁿ)`, below `eta_normalized`.
    pub eta_lower: f64,
}

impl RampSolution {
    /// `x_k = kρ^k`.
    pub fn value(&self, k: usize) -> f64 {
        k as f64 * math::powi(self.rho, k as u64)
    }
}

/// Closed-form solution of the double-root trinomial from the ramp initial
/// vector.
pub fn ramp_solution(n: usize, a: f64) -> Result<RampSolution> {
    let fam = double_root_family(n, a)?;
    let rho = fam.rho;
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid("double root must lie in (0, 1)"));
    }
    let scale = n as f64 * math::powi(rho, n as u64);
    let k = math::floor(1.0 / (1.0 - rho)) as usize;
    let cont = 1.0 / (1.0 - rho);
    Ok(RampSolution {
        rho,
        b2: fam.b2,
        init: InitialCondition::ramp(n + 1, rho),
        peak_instant: k,
        eta_normalized: k as f64 * math::powi(rho, k as u64) / scale,
        eta_lower: cont * math::pow(rho, cont) / scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardInitBound {
    /// `|a|^n = |x_{2n}|` from `(0, ..., 0, 1)`.
    pub bound: f64,
    /// `e`, which the bound stays under whenever `|a| < 1 + 1/n`.
    pub cap: f64,
}

/// Lower bound on the peak from the standard initial vector, for stable
/// `(a, b)` with `|a| > 1`.
pub fn standard_init_lower_bound(n: usize, a: f64, b: f64) -> Result<StandardInitBound> {
    if !(math::abs(a) > 1.0) {
        return Err(Error::invalid("the bound needs |a| > 1"));
    }
    let eq = TrinomialEquation::new(n, a, b)?.to_equation();
    let r = spectral_radius(&eq)?;
    if r >= 1.0 {
        return Err(Error::Unstable { spectral_radius: r });
    }
    Ok(StandardInitBound {
        bound: math::powi(math::abs(a), n as u64),
        cap: math::E,
    })
}
