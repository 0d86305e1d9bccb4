//! Peak effects in asymptotically stable scalar linear difference equations.
//!
//! The crate works with the recurrence
//!
//! ```text
//! x_k + a_1 x_{k-1} + ... + a_n x_{k-n} = v_k
//! ```
//!
//! and answers how far a solution started from a unit-norm initial condition
//! can travel before it decays. Modules:
//!
//! - [`recurrence`]: simulation, characteristic roots, stability, exact peak
//!   and worst case over the unit box of initial conditions.
//! - [`equal_roots`]: closed forms for the all-roots-equal family (α/β curves,
//!   peak instants, thresholds, asymptotics, the tabulated rows).
//! - [`root_bounds`]: sandwich bounds for real roots, peak-existence
//!   predicates and a randomized probe of the worst-case conjecture.
//! - [`noise`]: bounded-noise autoregression and its box-constrained maximum.
//! - [`special`]: Markov's fourth-order example and the trinomial family.
//!
//! Everything is `no_std` + `alloc`; IO, file formats and the CLI live in the
//! companion `peakeq` crate.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod equal_roots;
mod error;
pub mod math;
pub mod noise;
pub mod poly;
pub mod recurrence;
pub mod root_bounds;
pub mod seeds;
pub mod special;

pub use error::{Error, Result};
pub use recurrence::{
    DifferenceEquation, HorizonPolicy, InitialCondition, PeakReport, Trajectory,
};
