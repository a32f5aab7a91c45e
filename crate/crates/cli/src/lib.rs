//! Experiment harness and command-line tooling for online objective-function
//! learning: stream generators for the buyer / road-network / delivery
//! families, replicated runners with summary statistics, instance-file
//! parsers, and result emission (per-round CSV, summary JSON, plot data).
//!
//! Determinism: every stream comes from a ChaCha8 generator seeded with the
//! configured 64-bit seed; replication `k` uses stream id `k` of that
//! generator, so runs are bit-reproducible from `(config, seed)`.

pub mod config;
pub mod emit;
pub mod error;
pub mod experiments;
pub mod formats;

pub use config::{ExperimentConfig, LearnerKind, ProblemKind};
pub use error::HarnessError;
