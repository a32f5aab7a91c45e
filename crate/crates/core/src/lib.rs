//! Learning the linear objective of a repeatedly solved optimization problem
//! from observed (parameters, optimal decision) pairs.
//!
//! The crate provides:
//!
//! * domain types ([`types`]) and orientation-aware error accounting ([`ledger`]),
//! * the round-based online loop ([`run::run_online`]),
//! * three learners behind one contract ([`learners`]): multiplicative weights
//!   updates, projected online gradient descent, and a duality-gap-minimizing
//!   follow-the-leader scheme for linear programs,
//! * exact linear-optimization oracles ([`oracles`]) for knapsack (fractional
//!   and 0/1), shortest paths, and small profitable-tour instances, plus a
//!   brute-force oracle for equivalence testing,
//! * Euclidean projections onto simplex/box/ball objective sets ([`projections`]),
//! * a deterministic dense two-phase simplex solver ([`lp`]).
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default `std`
//! feature and enable `libm` to build without the standard library. All
//! algorithms are deterministic: oracles carry fixed tie-breaking rules and the
//! simplex uses Bland's rule, so identical inputs produce identical outputs.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod ledger;
pub mod learners;
pub mod lp;
pub mod math;
pub mod oracles;
pub mod projections;
pub mod run;
pub mod types;

pub use error::CoreError;
pub use ledger::{compute_errors, markov_tail_fraction, stability_bound_check, ErrorRecord, RunLedger};
pub use learners::{FtlLearner, Learner, MwuLearner, OgdLearner};
pub use projections::{diameter_l2, project, FeasibleObjectiveSet};
pub use run::{run_online, Truth};
pub use types::{Bounds, DecisionVector, ObjectiveVector, Observation, Orientation, StabilityParams};
