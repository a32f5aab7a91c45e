//! Orientation-aware error accounting for online objective learning runs.
//!
//! Per round, three quantities are tracked. With the learner's objective
//! `c_t`, the hidden objective `c_true`, the learner's decision `x̄` and the
//! expert's decision `x` (maximization form):
//!
//! * objective error `c_t · (x̄ − x)`: the expert's apparent suboptimality
//!   under the learner's guess,
//! * solution error `c_true · (x − x̄)`: the learner's true suboptimality,
//! * total error: their sum, the per-round regret against the truth.
//!
//! Minimization swaps the differences. With exact oracles on both sides all
//! three are nonnegative.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::math;
use crate::types::{Bounds, DecisionVector, ObjectiveVector, Orientation, StabilityParams};

/// Componentwise tolerance of the mismatch test.
pub const MISMATCH_TOL: f64 = 1e-9;
/// Error measures below this are treated as oracle suboptimality.
pub const DIAGNOSTIC_TOL: f64 = -1e-6;

/// One round's error measures. Solution and total errors are absent when the
/// true objective was not supplied to the run.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub round: usize,
    pub objective_error: f64,
    pub solution_error: Option<f64>,
    pub total_error: Option<f64>,
    pub mismatch: bool,
}

/// Compute one round's error record.
///
/// Callers guarantee that `learner_decision` is optimal for `c_t` and
/// `expert_decision` for `c_true`; a substantially negative error measure
/// (below −1e-6) therefore surfaces as an oracle-suboptimality diagnostic.
pub fn compute_errors(
    round: usize,
    c_t: &ObjectiveVector,
    c_true: &ObjectiveVector,
    learner_decision: &DecisionVector,
    expert_decision: &DecisionVector,
    sense: Orientation,
) -> Result<ErrorRecord, CoreError> {
    let n = c_t.len();
    if c_true.len() != n {
        return Err(CoreError::DimensionMismatch { expected: n, got: c_true.len() });
    }
    if learner_decision.len() != n {
        return Err(CoreError::DimensionMismatch { expected: n, got: learner_decision.len() });
    }
    if expert_decision.len() != n {
        return Err(CoreError::DimensionMismatch { expected: n, got: expert_decision.len() });
    }
    let diff: Vec<f64> = learner_decision
        .as_slice()
        .iter()
        .zip(expert_decision.as_slice())
        .map(|(l, e)| l - e)
        .collect();
    let (objective_error, solution_error) = match sense {
        Orientation::Maximize => (math::dot(c_t.as_slice(), &diff), -math::dot(c_true.as_slice(), &diff)),
        Orientation::Minimize => (-math::dot(c_t.as_slice(), &diff), math::dot(c_true.as_slice(), &diff)),
    };
    for value in [objective_error, solution_error] {
        if value < DIAGNOSTIC_TOL {
            return Err(CoreError::OracleSuboptimality { round, value });
        }
    }
    Ok(ErrorRecord {
        round,
        objective_error,
        solution_error: Some(solution_error),
        total_error: Some(objective_error + solution_error),
        mismatch: !learner_decision.coincides_with(expert_decision, MISMATCH_TOL),
    })
}

/// Objective-error-only record for runs without a known truth.
pub fn compute_objective_only(
    round: usize,
    c_t: &ObjectiveVector,
    learner_decision: &DecisionVector,
    expert_decision: &DecisionVector,
    sense: Orientation,
) -> Result<ErrorRecord, CoreError> {
    let n = c_t.len();
    if learner_decision.len() != n || expert_decision.len() != n {
        return Err(CoreError::DimensionMismatch { expected: n, got: learner_decision.len() });
    }
    let diff: Vec<f64> = learner_decision
        .as_slice()
        .iter()
        .zip(expert_decision.as_slice())
        .map(|(l, e)| l - e)
        .collect();
    let objective_error = match sense {
        Orientation::Maximize => math::dot(c_t.as_slice(), &diff),
        Orientation::Minimize => -math::dot(c_t.as_slice(), &diff),
    };
    if objective_error < DIAGNOSTIC_TOL {
        return Err(CoreError::OracleSuboptimality { round, value: objective_error });
    }
    Ok(ErrorRecord {
        round,
        objective_error,
        solution_error: None,
        total_error: None,
        mismatch: !learner_decision.coincides_with(expert_decision, MISMATCH_TOL),
    })
}

/// Complete per-run record: per-round errors, their prefix averages, the
/// mismatch count, the played objectives and their path length.
#[derive(Debug, Clone, Default)]
pub struct RunLedger {
    pub records: Vec<ErrorRecord>,
    pub avg_objective: Vec<f64>,
    pub avg_solution: Option<Vec<f64>>,
    pub avg_total: Option<Vec<f64>>,
    pub mismatch_count: usize,
    /// Sum of 2-norm steps between consecutive played objectives.
    pub objective_path_length: f64,
    pub played_objectives: Vec<ObjectiveVector>,
}

impl RunLedger {
    pub fn new(with_truth: bool) -> Self {
        Self {
            records: Vec::new(),
            avg_objective: Vec::new(),
            avg_solution: if with_truth { Some(Vec::new()) } else { None },
            avg_total: if with_truth { Some(Vec::new()) } else { None },
            mismatch_count: 0,
            objective_path_length: 0.0,
            played_objectives: Vec::new(),
        }
    }

    pub fn rounds(&self) -> usize {
        self.records.len()
    }

    /// Append one round: the played objective and its error record, keeping
    /// prefix averages, the mismatch count and the path length current.
    pub fn push(&mut self, played: ObjectiveVector, record: ErrorRecord) {
        if let Some(last) = self.played_objectives.last() {
            let step: Vec<f64> = played
                .as_slice()
                .iter()
                .zip(last.as_slice())
                .map(|(a, b)| a - b)
                .collect();
            self.objective_path_length += math::norm2(&step);
        }
        self.played_objectives.push(played);
        if record.mismatch {
            self.mismatch_count += 1;
        }
        let t = self.records.len() as f64 + 1.0;
        let prev_obj = self.avg_objective.last().copied().unwrap_or(0.0);
        self.avg_objective.push(prev_obj + (record.objective_error - prev_obj) / t);
        if let (Some(avg_sol), Some(sol)) = (self.avg_solution.as_mut(), record.solution_error) {
            let prev = avg_sol.last().copied().unwrap_or(0.0);
            avg_sol.push(prev + (sol - prev) / t);
        }
        if let (Some(avg_tot), Some(tot)) = (self.avg_total.as_mut(), record.total_error) {
            let prev = avg_tot.last().copied().unwrap_or(0.0);
            avg_tot.push(prev + (tot - prev) / t);
        }
        self.records.push(record);
    }

    pub fn final_avg_total(&self) -> Option<f64> {
        self.avg_total.as_ref().and_then(|v| v.last().copied())
    }

    pub fn final_avg_solution(&self) -> Option<f64> {
        self.avg_solution.as_ref().and_then(|v| v.last().copied())
    }
}

/// Fraction of rounds whose solution error reaches the theorem threshold plus
/// `epsilon`, together with the guaranteed ceiling on that fraction.
///
/// Returns `(observed_fraction, bound)` with
/// `bound = 1 − epsilon / (2 K sqrt(ln n / T) + epsilon)`.
pub fn markov_tail_fraction(
    ledger: &RunLedger,
    bounds: &Bounds,
    epsilon: f64,
) -> Result<(f64, f64), CoreError> {
    if !(epsilon > 0.0) {
        return Err(CoreError::InvalidParameter("epsilon must be > 0".into()));
    }
    let threshold = bounds.mwu_bound() + epsilon;
    let total = ledger.records.len();
    if total == 0 {
        return Err(CoreError::InvalidParameter("ledger is empty".into()));
    }
    let mut hits = 0usize;
    for record in &ledger.records {
        let Some(sol) = record.solution_error else {
            return Err(CoreError::InvalidParameter("ledger lacks solution errors; run with a known truth".into()));
        };
        if sol >= threshold {
            hits += 1;
        }
    }
    let observed = hits as f64 / total as f64;
    let bound = 1.0 - epsilon / threshold;
    Ok((observed, bound))
}

/// The two candidate mismatch-count ceilings for stable 0/1 families: the
/// proof-chain form `(2K/Δ)·sqrt(T ln n)` and the looser statement form
/// `2K·sqrt(T ln n / Δ)`. The proof form is the operative one.
pub fn stability_bounds(bounds: &Bounds, stab: &StabilityParams) -> (f64, f64) {
    let core = math::sqrt(bounds.t as f64 * math::ln(bounds.n as f64));
    let proof_form = 2.0 * bounds.k / stab.delta * core;
    let statement_form = 2.0 * bounds.k * math::sqrt(bounds.t as f64 * math::ln(bounds.n as f64) / stab.delta);
    (proof_form, statement_form)
}

/// Whether the run's mismatch count respects the proof-form ceiling.
pub fn stability_bound_check(ledger: &RunLedger, bounds: &Bounds, stab: &StabilityParams) -> bool {
    let (proof_form, _) = stability_bounds(bounds, stab);
    (ledger.mismatch_count as f64) <= proof_form
}
