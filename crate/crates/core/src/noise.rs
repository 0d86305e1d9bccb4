//! Autoregression driven by unknown-but-bounded noise,
//! `x_k + a_1 x_{k-1} + ... + a_n x_{k-n} = v_k` with `|v_k| ≤ ε`.
//!
//! `x_t` is linear in `(x⁽⁰⁾, v)`: `x_t = Σ_i s_{t,i} x_i + Σ_k h_{t,k} v_k`, so its
//! maximum over the box `‖x⁽⁰⁾‖_∞ ≤ 1, |v_k| ≤ ε` is `Σ|s_{t,i}| + ε Σ|h_{t,k}|`,
//! attained at the sign vertices. The noise sensitivity `h_{t,k}` is the
//! impulse response `y_{t−k+n−1}` started from `(0, ..., 0, 1)`.

use alloc::vec::Vec;

use crate::equal_roots::{self, EqualRootSpec};
use crate::math;
use crate::recurrence::{basis_responses, spectral_radius, DifferenceEquation, InitialCondition, Trajectory};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBand {
    epsilon: f64,
}

impl NoiseBand {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid("noise level must be finite and nonnegative"));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Disturbances `v_n, ..., v_H`; index 0 is `v_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSequence {
    values: Vec<f64>,
}

impl NoiseSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("noise values must be finite"));
        }
        Ok(Self { values })
    }

    pub fn constant(value: f64, len: usize) -> Self {
        Self {
            values: alloc::vec![value; len],
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::constant(0.0, len)
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

    pub fn validate_against(&self, band: &NoiseBand) -> Result<()> {
        match self.values.iter().position(|v| math::abs(*v) > band.epsilon) {
            Some(i) => Err(Error::InvalidParameter(alloc::format!(
                "noise value {} at offset {i} exceeds epsilon {}",
                self.values[i], band.epsilon
            ))),
            None => Ok(()),
        }
    }
}

/// Maximizer of `x_t` over the box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxLpSolution {
    pub t: usize,
    pub value: f64,
    pub argmax_init: InitialCondition,
    pub argmax_noise: NoiseSequence,
}

/// One row of a bound sweep over `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSweepRow {
    pub t: usize,
    pub box_lp_max: f64,
    pub convolution_bound: f64,
    pub tail_bound: f64,
}

/// `x_k = −Σ a_i x_{k−i} + v_k` for `k = n..=horizon`.
pub fn simulate_noisy(
    eq: &DifferenceEquation,
    init: &InitialCondition,
    noise: &NoiseSequence,
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
    let needed = horizon + 1 - n;
    if noise.len() < needed {
        return Err(Error::DimensionMismatch {
            expected: needed,
            found: noise.len(),
        });
    }
    let a = eq.coefficients();
    let mut x = Vec::with_capacity(horizon + 1);
    x.extend_from_slice(init.values());
    for k in n..=horizon {
        let mut next = noise.values()[k - n];
        for (i, ai) in a.iter().enumerate() {
            next -= ai * x[k - 1 - i];
        }
        if !next.is_finite() {
            return Err(Error::Overflow { index: k });
        }
        x.push(next);
    }
    Ok(Trajectory::from_samples(x))
}

fn solution_from_responses(rows: &[Vec<f64>], n: usize, epsilon: f64, t: usize) -> BoxLpSolution {
    let impulse = &rows[n - 1];
    let mut value = 0.0;
    let mut init = Vec::with_capacity(n);
    for row in rows {
        value += math::abs(row[t]);
        init.push(math::sign_or_plus(row[t]));
    }
    let mut noise = Vec::with_capacity(t + 1 - n);
    let mut noise_part = 0.0;
    for k in n..=t {
        let h = impulse[t - k + n - 1];
        noise_part += math::abs(h);
        noise.push(epsilon * math::sign_or_plus(h));
    }
    value += epsilon * noise_part;
    BoxLpSolution {
        t,
        value,
        argmax_init: InitialCondition::new(init).expect("signs are finite"),
        argmax_noise: NoiseSequence { values: noise },
    }
}

fn require_stable(eq: &DifferenceEquation) -> Result<()> {
    let rho = spectral_radius(eq)?;
    if rho < 1.0 {
        Ok(())
    } else {
        Err(Error::Unstable {
            spectral_radius: rho,
        })
    }
}

/// Exact maximum of `x_t` subject to `‖x⁽⁰⁾‖_∞ ≤ 1` and `|v_k| ≤ ε`.
pub fn box_lp_max(eq: &DifferenceEquation, band: &NoiseBand, t: usize) -> Result<BoxLpSolution> {
    let n = eq.order();
    if t < n {
        return Err(Error::invalid("t must be at least the equation order"));
    }
    require_stable(eq)?;
    let rows = basis_responses(eq, t)?;
    Ok(solution_from_responses(&rows, n, band.epsilon, t))
}

/// [`box_lp_max`] for every `t` in `ts`, sharing one set of basis responses.
pub fn box_lp_max_range(
    eq: &DifferenceEquation,
    band: &NoiseBand,
    ts: core::ops::RangeInclusive<usize>,
) -> Result<Vec<BoxLpSolution>> {
    let n = eq.order();
    if *ts.start() < n {
        return Err(Error::invalid("t must be at least the equation order"));
    }
    require_stable(eq)?;
    let rows = basis_responses(eq, *ts.end())?;
    Ok(ts
        .map(|t| solution_from_responses(&rows, n, band.epsilon, t))
        .collect())
}

fn spec(n: usize, rho: f64) -> Result<EqualRootSpec> {
    EqualRootSpec::new(n, rho)
}

/// Equal-root maximum `α_{t,n} + ε Σ_{k=n}^{t} C(t−k+n−1, n−1) ρ^{t−k}`.
pub fn noise_convolution_bound(n: usize, rho: f64, band: &NoiseBand, t: usize) -> Result<f64> {
    let s = spec(n, rho)?;
    if t < n {
        return Err(Error::invalid("t must be at least n"));
    }
    let conv: f64 = (n..=t)
        .map(|k| {
            let d = (t - k) as u64;
            math::binomial_times_pow(d + n as u64 - 1, n as u64 - 1, rho, d)
        })
        .sum();
    Ok(equal_roots::alpha(t, &s) + band.epsilon * conv)
}

/// `α_n + ε (1−ρ)^{−n}`, strictly above the equal-root maximum at every `t`.
pub fn geometric_tail_bound(n: usize, rho: f64, band: &NoiseBand) -> Result<f64> {
    let s = spec(n, rho)?;
    let (alpha_n, _) = equal_roots::alpha_max(&s)?;
    Ok(alpha_n + band.epsilon / math::powi(1.0 - rho, n as u64))
}

/// Limit `x* = ε/(1−ρ)^n` of the trajectory under constant noise `v ≡ ε`.
pub fn steady_state(n: usize, rho: f64, band: &NoiseBand) -> Result<f64> {
    spec(n, rho)?;
    Ok(band.epsilon / math::powi(1.0 - rho, n as u64))
}

/// `t, box_lp_max, convolution_bound, tail_bound` for the equal-root equation.
pub fn bound_sweep(
    n: usize,
    rho: f64,
    band: &NoiseBand,
    ts: core::ops::RangeInclusive<usize>,
) -> Result<Vec<BoundSweepRow>> {
    let s = spec(n, rho)?;
    let tail = geometric_tail_bound(n, rho, band)?;
    let lp = box_lp_max_range(&s.equation(), band, ts)?;
    lp.into_iter()
        .map(|sol| {
            Ok(BoundSweepRow {
                t: sol.t,
                box_lp_max: sol.value,
                convolution_bound: noise_convolution_bound(n, rho, band, sol.t)?,
                tail_bound: tail,
            })
        })
        .collect()
}
