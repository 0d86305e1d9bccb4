//! Roots of monic real polynomials by Aberth–Ehrlich simultaneous iteration.
//!
//! Multiple roots are the common case here (equal-root equations, double
//! roots on stability boundaries), and a multiplicity-`m` root of a
//! floating-point polynomial only resolves to about `eps^(1/m)`. The finder
//! therefore groups the converged approximations into clusters using the
//! Weierstrass inclusion disks `D(z_i, n·|p(z_i)/Π_{j≠i}(z_i−z_j)|)`: a connected
//! component of `m` overlapping disks holds exactly `m` roots, and the mean of
//! the component is accurate to working precision even when the individual
//! members are not.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math;
use crate::{Error, Result};

/// A group of numerically coincident roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    /// Mean of the member approximations.
    pub value: Complex64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct RootFinderOptions {
    pub max_iterations: usize,
    pub restarts: usize,
    /// Approximations closer than `cluster_tol·max(1, |z|)` are always merged.
    pub cluster_tol: f64,
}

impl Default for RootFinderOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            restarts: 6,
            cluster_tol: 1e-6,
        }
    }
}

/// `p(z)` and `p'(z)` for `p(λ) = λ^n + a_1 λ^{n-1} + ... + a_n`, plus the
/// Horner rounding-error scale `Σ |coef|·|z|^j`.
fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(1.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let r = z.norm();
    let mut scale = 1.0;
    for &a in coeffs {
        dp = dp * z + p;
        p = p * z + a;
        scale = scale * r + math::abs(a);
    }
    (p, dp, scale)
}

/// Fujiwara bound on the root moduli.
fn root_bound(coeffs: &[f64]) -> f64 {
    let n = coeffs.len();
    let mut bound: f64 = 0.0;
    for (i, &a) in coeffs.iter().enumerate() {
        let e = 1.0 / (i + 1) as f64;
        let term = if i + 1 == n {
            math::pow(math::abs(a) / 2.0, e)
        } else {
            math::pow(math::abs(a), e)
        };
        bound = bound.max(term);
    }
    2.0 * bound
}

fn initial_guesses(coeffs: &[f64], rotation: f64, out: &mut [Complex64]) {
    let n = coeffs.len();
    let radius = root_bound(coeffs).max(1e-3) * 0.5;
    let center = -coeffs[0] / n as f64;
    for (k, z) in out.iter_mut().enumerate() {
        let theta = 2.0 * math::PI * k as f64 / n as f64 + rotation;
        *z = Complex64::new(
            center + radius * math::cos(theta),
            radius * math::sin(theta),
        );
    }
}

/// Runs Aberth iterations in place. Returns `true` once every approximation
/// has a residual within the Horner rounding bound.
fn aberth(coeffs: &[f64], z: &mut [Complex64], max_iterations: usize, root_scale: f64) -> bool {
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..max_iterations {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, scale) = horner(coeffs, z[i]);
            if p.norm() <= 8.0 * f64::EPSILON * scale * (n as f64) {
                done[i] = true;
                continue;
            }
            all_done = false;
            let ratio = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        repulsion += d.inv();
                    }
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                // Multiple roots at the origin converge only linearly and never
                // meet the relative residual test.
                if step.norm() <= f64::EPSILON * 1e-3 * root_scale {
                    done[i] = true;
                }
            } else {
                // p'(z) vanished or two iterates collided; nudge off the
                // singularity and keep going.
                z[i] += Complex64::new(1e-7, 1e-7) * (1.0 + z[i].norm());
            }
        }
        if all_done {
            return true;
        }
    }
    false
}

fn weierstrass_radius(coeffs: &[f64], z: &[Complex64], i: usize) -> f64 {
    let (p, _, _) = horner(coeffs, z[i]);
    let mut denom = Complex64::new(1.0, 0.0);
    for (j, zj) in z.iter().enumerate() {
        if j != i {
            denom *= z[i] - zj;
        }
    }
    let w = p.norm() / denom.norm();
    if w.is_finite() {
        z.len() as f64 * w
    } else {
        f64::INFINITY
    }
}

fn cluster(coeffs: &[f64], z: &[Complex64], tol: f64) -> Vec<RootCluster> {
    let n = z.len();
    let radii: Vec<f64> = (0..n).map(|i| weierstrass_radius(coeffs, z, i)).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (z[i] - z[j]).norm();
            let near = d <= tol * z[i].norm().max(z[j].norm()).max(1.0);
            if near || d <= radii[i] + radii[j] {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut sums: Vec<(Complex64, usize)> = vec![(Complex64::new(0.0, 0.0), 0); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        sums[r].0 += z[i];
        sums[r].1 += 1;
    }
    sums.into_iter()
        .filter(|(_, m)| *m > 0)
        .map(|(s, m)| {
            let mean = s / m as f64;
            RootCluster {
                value: refine_cluster(coeffs, mean, m),
                multiplicity: m,
            }
        })
        .collect()
}

/// Coefficients (descending, leading term first) of the `d`-th derivative of
/// the monic polynomial.
fn derivative_coeffs(coeffs: &[f64], d: usize) -> Vec<f64> {
    let n = coeffs.len();
    let full = core::iter::once(1.0).chain(coeffs.iter().copied());
    full.enumerate()
        .filter(|(idx, _)| n - idx >= d)
        .map(|(idx, c)| {
            let power = n - idx;
            let falling: f64 = ((power - d + 1)..=power).map(|j| j as f64).product();
            c * falling
        })
        .collect()
}

fn eval_desc(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * z + ci)
}

/// A multiplicity-`m` root is a simple root of `p^{(m-1)}`; Newton on that
/// derivative pins the cluster centre down to working precision.
fn refine_cluster(coeffs: &[f64], start: Complex64, m: usize) -> Complex64 {
    let f = derivative_coeffs(coeffs, m - 1);
    let df = derivative_coeffs(coeffs, m);
    let mut z = start;
    let mut last_step = f64::INFINITY;
    for _ in 0..20 {
        let fz = eval_desc(&f, z);
        let dz = eval_desc(&df, z);
        let step = fz / dz;
        let s = step.norm();
        if !s.is_finite() || s >= last_step {
            break;
        }
        z -= step;
        last_step = s;
        if s <= f64::EPSILON * z.norm().max(1e-300) {
            break;
        }
    }
    // Don't let the refinement wander out of the cluster it describes.
    if (z - start).norm() <= 1e-2 * start.norm().max(1.0) {
        if start.im == 0.0 {
            z.im = 0.0;
        }
        z
    } else {
        start
    }
}

/// Splitmix-style rotation offsets for restarts; deterministic.
fn restart_rotation(attempt: usize) -> f64 {
    let mut x = (attempt as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    0.4 + (x >> 11) as f64 / (1u64 << 53) as f64 * 2.0 * math::PI
}

/// All roots of `λ^n + a_1 λ^{n-1} + ... + a_n`, grouped into clusters.
pub fn roots_clustered(coeffs: &[f64], opts: &RootFinderOptions) -> Result<Vec<RootCluster>> {
    let n = coeffs.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if coeffs.iter().any(|a| !a.is_finite()) {
        return Err(Error::invalid("non-finite polynomial coefficient"));
    }
    if n == 1 {
        return Ok(vec![RootCluster {
            value: Complex64::new(-coeffs[0], 0.0),
            multiplicity: 1,
        }]);
    }
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let scale = root_bound(coeffs).max(f64::MIN_POSITIVE);
    for attempt in 0..=opts.restarts {
        initial_guesses(coeffs, restart_rotation(attempt), &mut z);
        if attempt > 0 {
            // Shrink or stretch the starting circle as well as rotating it.
            let s = 0.5 + attempt as f64 * 0.37;
            let c = Complex64::new(-coeffs[0] / n as f64, 0.0);
            for zi in z.iter_mut() {
                *zi = c + (*zi - c) * s;
            }
        }
        if aberth(coeffs, &mut z, opts.max_iterations, scale) {
            return Ok(cluster(coeffs, &z, opts.cluster_tol));
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations * (opts.restarts + 1),
    })
}

/// Flat list of roots with clusters expanded by multiplicity.
pub fn roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let clusters = roots_clustered(coeffs, &RootFinderOptions::default())?;
    Ok(clusters
        .iter()
        .flat_map(|c| core::iter::repeat(c.value).take(c.multiplicity))
        .collect())
}

/// Largest root modulus.
pub fn max_root_modulus(coeffs: &[f64]) -> Result<f64> {
    let clusters = roots_clustered(coeffs, &RootFinderOptions::default())?;
    Ok(clusters
        .iter()
        .map(|c| c.value.norm())
        .fold(0.0, f64::max))
}

/// Monic coefficients `(a_1, ..., a_n)` of `Π (λ − r_i)`, in complex arithmetic.
pub fn monic_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i] += ci;
            next[i + 1] -= ci * r;
        }
        c = next;
    }
    c.remove(0);
    c
}
