//! The objective learners: multiplicative weights, projected gradient
//! descent, the LP-based follow-the-leader heuristic, and a feature-map
//! wrapper that lifts any learner to transformed decision spaces.

pub mod feature_map;
pub mod ftl;
pub mod mwu;
pub mod ogd;

use crate::error::CoreError;
use crate::types::{DecisionVector, ObjectiveVector};

pub use feature_map::{FeatureMap, FeatureMapLearner};
pub use ftl::{FtlLearner, FtlMode};
pub use mwu::MwuLearner;
pub use ogd::{OgdLearner, OgdSchedule};

/// The learner contract of the online loop.
///
/// `current_objective` is the objective played this round and must lie in the
/// learner's feasible objective set at all times. After the oracle answers
/// and the expert decision is revealed, `observe` updates the state for the
/// next round; it also receives the round's instance parameters, which
/// history-based learners need.
pub trait Learner<P> {
    fn current_objective(&self) -> ObjectiveVector;

    fn observe(
        &mut self,
        params: &P,
        learner_decision: &DecisionVector,
        expert_decision: &DecisionVector,
        round: usize,
    ) -> Result<(), CoreError>;
}
