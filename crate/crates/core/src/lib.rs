//! Average-mixing times of Markov chains.
//!
//! The average-mixing distance `beta(t) = sum_x pi(x) TV(e_x P^t, pi)` weighs
//! starting states by the stationary law instead of taking the worst one, and
//! `t_sharp(xi)` is the first `t` with `beta(t) <= xi`. This crate computes both
//! exactly for finite chains, estimates them from a single trajectory, and
//! evaluates the deviation and sample-size bounds that control the estimator.
//!
//! - [`chain`]: stochastic matrices, stationary laws, ergodicity and spectral checks.
//! - [`mixing`]: exact `beta`, `d`, `t_mix`, `t_sharp` and the entropic term `J_p`.
//! - [`estimation`]: trajectories, skipped-pair counts, `beta_hat`, confidence
//!   intervals and Monte Carlo harnesses.
//! - [`bounds`]: MAD, PAC and deviation bounds, rate envelopes, certificates.
//! - [`families`]: two-point, birth-death and countable-state example chains.
//! - [`cli`]: the `mix` command line.
//!
//! Runnable examples live in `examples/`: `exact_profile`, `gap_search`,
//! `estimate_from_trajectory`, `mad_decay`, `sample_sizes`, `bound_request`,
//! `countable_chain`, `chebyshev_walk`, `certificates` and `chain_files`.

pub mod bounds;
pub mod chain;
pub mod cli;
pub mod error;
pub mod estimation;
pub mod families;
pub mod io;
pub mod mixing;
pub mod random;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
