//! The round-based meta loop: query the learner, solve the round's instance,
//! observe the expert, update, account.

use alloc::format;

use crate::error::CoreError;
use crate::ledger::{compute_errors, compute_objective_only, RunLedger};
use crate::learners::Learner;
use crate::oracles::LinearOptOracle;
use crate::types::{ObjectiveVector, Observation};

/// The hidden objective against which solution and total errors are measured.
/// `PerRound` covers families whose true objective drifts between rounds.
#[derive(Debug, Clone)]
pub enum Truth {
    Unknown,
    Fixed(ObjectiveVector),
    PerRound(alloc::vec::Vec<ObjectiveVector>),
}

impl Truth {
    fn at(&self, index: usize) -> Option<&ObjectiveVector> {
        match self {
            Truth::Unknown => None,
            Truth::Fixed(c) => Some(c),
            Truth::PerRound(cs) => cs.get(index),
        }
    }
}

/// Run the online loop over a revealed observation stream.
///
/// Per round: the learner's current objective is played, the oracle solves
/// the round's instance for it, the expert decision is revealed, errors are
/// recorded, and the learner updates. Oracle failure on any round aborts the
/// run with that round's index.
pub fn run_online<P, L, O>(
    learner: &mut L,
    oracle: &O,
    stream: &[Observation<P>],
    truth: &Truth,
) -> Result<RunLedger, CoreError>
where
    L: Learner<P>,
    O: LinearOptOracle<P>,
{
    if let Truth::PerRound(cs) = truth {
        if cs.len() < stream.len() {
            return Err(CoreError::InvalidParameter(format!(
                "per-round truth has {} entries for {} observations",
                cs.len(),
                stream.len()
            )));
        }
    }
    let mut ledger = RunLedger::new(!matches!(truth, Truth::Unknown));
    let sense = oracle.sense();
    for (index, obs) in stream.iter().enumerate() {
        let c_t = learner.current_objective();
        if c_t.len() != oracle.decision_dim(&obs.params) {
            return Err(CoreError::DimensionMismatch {
                expected: oracle.decision_dim(&obs.params),
                got: c_t.len(),
            });
        }
        if !oracle.check_feasible(&obs.expert_decision, &obs.params) {
            return Err(CoreError::OracleInfeasible {
                round: obs.round,
                detail: "expert decision is infeasible for the round's instance".into(),
            });
        }
        let answer = oracle.solve(&c_t, &obs.params).map_err(|e| match e {
            CoreError::OracleInfeasible { .. } => e,
            other => CoreError::OracleInfeasible { round: obs.round, detail: format!("{other}") },
        })?;
        let record = match truth.at(index) {
            Some(c_true) => compute_errors(obs.round, &c_t, c_true, &answer.decision, &obs.expert_decision, sense)?,
            None => compute_objective_only(obs.round, &c_t, &answer.decision, &obs.expert_decision, sense)?,
        };
        learner.observe(&obs.params, &answer.decision, &obs.expert_decision, obs.round)?;
        ledger.push(c_t, record);
    }
    Ok(ledger)
}
