//! Exact linear-optimization oracles for the experiment families, plus a
//! brute-force oracle used to certify them in tests.
//!
//! Every oracle is deterministic: among optimal decisions it returns the one
//! selected by the family's documented tie rule (lexicographically smallest
//! decision vector for knapsack and tour instances; the lower-index
//! predecessor-arc path for shortest paths). Answer values are always
//! recomputed as `c · decision` with one shared dot product so that equal
//! decisions carry bit-equal values no matter which oracle produced them.

pub mod knapsack;
pub mod pctsp;
pub mod shortest_path;

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::types::{DecisionVector, ObjectiveVector, Orientation};

pub use knapsack::{
    solve_knapsack_ip, solve_knapsack_ip_dp, solve_knapsack_ip_traced, solve_knapsack_lp,
    KnapsackInstance, KnapsackOracle,
};
pub use pctsp::{solve_pctsp, PctspInstance, PctspOracle};
pub use shortest_path::{solve_shortest_path, GraphInstance, ShortestPathOracle};

/// An oracle answer: the optimal decision and its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleAnswer {
    pub decision: DecisionVector,
    pub value: f64,
}

impl OracleAnswer {
    /// Build an answer with the value recomputed from the decision.
    pub fn from_decision(c: &ObjectiveVector, decision: DecisionVector) -> Self {
        let value = c.dot_decision(&decision);
        Self { decision, value }
    }
}

/// A linear-optimization oracle over instances of type `P`: returns
/// `argopt { c · x : x in X(p) }` for any objective `c`.
pub trait LinearOptOracle<P> {
    /// Whether the family maximizes or minimizes.
    fn sense(&self) -> Orientation;

    /// Decision-space dimension of the given instance.
    fn decision_dim(&self, params: &P) -> usize;

    /// Exact optimum of `c` over the instance's feasible set.
    fn solve(&self, c: &ObjectiveVector, params: &P) -> Result<OracleAnswer, CoreError>;

    /// Feasibility test used to validate observed expert decisions.
    fn check_feasible(&self, decision: &DecisionVector, params: &P) -> bool;
}

/// Instances whose full decision set can be enumerated (small cases only).
///
/// Enumerators yield decisions in the family's tie-preference order, so that
/// keeping the first optimum during a scan reproduces the specialized
/// oracle's tie rule exactly.
pub trait EnumerableDecisions {
    fn enumerate_decisions(&self) -> Result<Vec<DecisionVector>, CoreError>;
}

/// Exhaustive argopt over an enumerable instance.
pub fn brute_force_oracle<P: EnumerableDecisions>(
    c: &ObjectiveVector,
    inst: &P,
    sense: Orientation,
) -> Result<OracleAnswer, CoreError> {
    let decisions = inst.enumerate_decisions()?;
    let mut best: Option<(f64, DecisionVector)> = None;
    for d in decisions {
        if d.len() != c.len() {
            return Err(CoreError::DimensionMismatch { expected: c.len(), got: d.len() });
        }
        let v = c.dot_decision(&d);
        let better = match (&best, sense) {
            (None, _) => true,
            (Some((bv, _)), Orientation::Maximize) => v > *bv,
            (Some((bv, _)), Orientation::Minimize) => v < *bv,
        };
        if better {
            best = Some((v, d));
        }
    }
    match best {
        Some((value, decision)) => Ok(OracleAnswer { decision, value }),
        None => Err(CoreError::InvalidParameter("instance has no feasible decision".into())),
    }
}

/// Lexicographic order on decision vectors (first differing entry decides).
pub(crate) fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}
