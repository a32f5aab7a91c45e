//! Follow-the-leader objective learning for linear programs: each round plays
//! an objective that minimizes the total duality gap over all observations
//! revealed so far.
//!
//! Two execution modes solve the same master problem:
//!
//! * [`FtlMode::ExactDense`] assembles the full master LP (dual feasibility
//!   blocks for every past round) and solves it with the dense simplex. Exact
//!   and literal, but the master grows with the round count — intended for
//!   small horizons and tests.
//! * [`FtlMode::ConsistencyRows`] exploits that for consistent observation
//!   streams the master optimum is zero, and that a zero gap in one round is
//!   a closed-form set of linear rows over `c` (the optimality conditions of
//!   the observed decision). Rows touching at most two coordinates condense
//!   into per-pair ratio bounds `c_u <= r * c_v`, so the retained system is
//!   bounded by the squared dimension no matter how long the stream runs.
//!   On a unit-simplex objective set the condensed system is solved by a
//!   multiplicative shortest-path relaxation (ratio bounds are difference
//!   constraints in disguise); otherwise it falls back to the dense simplex.
//!   Every returned objective satisfies the whole condensed system, hence
//!   achieves total duality gap zero and is a certified master optimum.
//!   Requires a nonnegative objective domain (the ratio dominance argument
//!   needs `c >= 0`); inconsistent streams surface as an explicit error.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::learners::Learner;
use crate::lp::{build_ftl_lp, solve_lp, DenseLp, LpStatus, PolyhedralInstance, PolyhedralObjectiveSet};
use crate::math;
use crate::types::{DecisionVector, ObjectiveVector};

type PolyhedronFn<P> = Box<dyn Fn(&P) -> PolyhedralInstance + Send>;
type RowsFn<P> = Box<dyn Fn(&P, &DecisionVector) -> Result<Vec<Vec<f64>>, CoreError> + Send>;

pub enum FtlMode<P> {
    /// Literal master: rebuild and solve over the whole history every round.
    ExactDense { to_polyhedron: PolyhedronFn<P> },
    /// Reduced master for consistent streams over nonnegative objective
    /// domains: per-observation optimality rows in `coeffs · c <= 0` form.
    ConsistencyRows { rows_for: RowsFn<P> },
}

/// Condensed reduced-master state: tightest pairwise ratio bounds, forced
/// zero coordinates, and rows too wide to condense.
///
/// A pair bound is kept as the fraction `(num, den)` taken verbatim from row
/// coefficients — `c_u <= (num / den) * c_v` with `den > 0` — and compared by
/// cross-multiplication. Exactly pinned ratios (equal bounds in both
/// directions) then stay consistent: forming the quotient would round and
/// could make a tight cycle infeasible by an ulp.
struct RowSystem {
    dim: usize,
    /// Fraction parts per (u, v) slot; `den == 0` means unconstrained.
    pair_num: Vec<f64>,
    pair_den: Vec<f64>,
    /// `c_u <= 0` constraints.
    zero_forced: Vec<bool>,
    /// Rows with three or more nonzero coefficients, kept verbatim.
    general: Vec<Vec<f64>>,
}

impl RowSystem {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            pair_num: vec![0.0; dim * dim],
            pair_den: vec![0.0; dim * dim],
            zero_forced: vec![false; dim],
            general: Vec::new(),
        }
    }

    /// Fold one `coeffs · c <= 0` row into the condensed system.
    fn absorb(&mut self, row: &[f64]) {
        let nonzeros: Vec<usize> = (0..self.dim).filter(|&i| row[i] != 0.0).collect();
        match nonzeros.len() {
            0 => {}
            1 => {
                let u = nonzeros[0];
                if row[u] > 0.0 {
                    self.zero_forced[u] = true;
                }
                // A negative coefficient asks for c_u >= 0, which the domain
                // already guarantees.
            }
            2 => {
                let (i, j) = (nonzeros[0], nonzeros[1]);
                let (a, b) = (row[i], row[j]);
                if a > 0.0 && b < 0.0 {
                    self.tighten(i, j, -b, a);
                } else if a < 0.0 && b > 0.0 {
                    self.tighten(j, i, -a, b);
                } else if a > 0.0 && b > 0.0 {
                    self.zero_forced[i] = true;
                    self.zero_forced[j] = true;
                }
                // Both negative: satisfied everywhere on the domain.
            }
            _ => {
                self.general.push(row.to_vec());
            }
        }
    }

    /// Keep the tighter of the stored and offered `c_u <= (num/den) c_v`.
    fn tighten(&mut self, u: usize, v: usize, num: f64, den: f64) {
        debug_assert!(den > 0.0 && num > 0.0);
        let idx = u * self.dim + v;
        if self.pair_den[idx] == 0.0 || num * self.pair_den[idx] < self.pair_num[idx] * den {
            self.pair_num[idx] = num;
            self.pair_den[idx] = den;
        }
    }

    /// Whether `c` violates any condensed constraint beyond tolerance.
    fn has_violation(&self, c: &[f64]) -> bool {
        for u in 0..self.dim {
            if self.zero_forced[u] && c[u] > 1e-9 {
                return true;
            }
        }
        for u in 0..self.dim {
            for v in 0..self.dim {
                let idx = u * self.dim + v;
                let den = self.pair_den[idx];
                if den == 0.0 {
                    continue;
                }
                let num = self.pair_num[idx];
                if den * c[u] > num * c[v] + 1e-9 * (den + num) {
                    return true;
                }
            }
        }
        for row in &self.general {
            if math::dot(row, c) > 1e-9 * (1.0 + math::norm1(row)) {
                return true;
            }
        }
        false
    }

    /// Solve the pair/zero system on the unit simplex by multiplicative
    /// relaxation, returning a deterministic extreme solution: the lowest
    /// non-zero coordinate is anchored and every other coordinate takes the
    /// smallest value the ratio bounds allow (the max-lower-path fixpoint,
    /// which satisfies every pair constraint by construction). Extremeness
    /// matches what a vertex-returning LP solver would produce for the same
    /// master problem. Ratio cycles with product above one along the lower
    /// bounds make the anchored system diverge, which forces the anchor to
    /// zero; if every coordinate collapses the system has no explanation on
    /// the simplex.
    fn relaxation_solve(&self) -> Result<Vec<f64>, CoreError> {
        let n = self.dim;
        let mut zero = self.zero_forced.clone();
        'anchor: loop {
            // Zero closure: a coordinate upper-bounded through a zero
            // coordinate is itself zero.
            loop {
                let mut grew = false;
                for u in 0..n {
                    if zero[u] {
                        continue;
                    }
                    for v in 0..n {
                        if zero[v] && self.pair_den[u * n + v] != 0.0 {
                            zero[u] = true;
                            grew = true;
                            break;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            let Some(anchor) = (0..n).find(|&u| !zero[u]) else {
                return Err(CoreError::LpInfeasible(
                    "no objective in the set explains every observation; reduced follow-the-leader requires consistent streams".into(),
                ));
            };

            // Propagate lower bounds from the anchor: the pair (u, v) with
            // c_u <= (num/den) c_v forces c_v >= c_u * den / num.
            let mut lower = vec![0.0_f64; n];
            lower[anchor] = 1.0;
            let mut sweeps = 0usize;
            loop {
                let mut changed = false;
                for u in 0..n {
                    if zero[u] || lower[u] == 0.0 {
                        continue;
                    }
                    for v in 0..n {
                        let idx = u * n + v;
                        if zero[v] || self.pair_den[idx] == 0.0 {
                            continue;
                        }
                        let cand = lower[u] * self.pair_den[idx] / self.pair_num[idx];
                        // Accept only material growth; exactly tight ratio
                        // cycles would otherwise churn on rounding.
                        if cand > lower[v] * (1.0 + 1e-12) || (lower[v] == 0.0 && cand > 0.0) {
                            lower[v] = cand;
                            changed = true;
                        }
                    }
                }
                sweeps += 1;
                if !changed {
                    break;
                }
                if sweeps > n {
                    // A lower-bound cycle with product materially above one
                    // is reachable from the anchor, so the anchor cannot be
                    // positive. Retry with the next candidate.
                    let mut material = false;
                    for u in 0..n {
                        if zero[u] || lower[u] == 0.0 {
                            continue;
                        }
                        for v in 0..n {
                            let idx = u * n + v;
                            if zero[v] || self.pair_den[idx] == 0.0 {
                                continue;
                            }
                            let cand = lower[u] * self.pair_den[idx] / self.pair_num[idx];
                            if cand > lower[v] * (1.0 + 1e-9) {
                                material = true;
                            }
                        }
                    }
                    if material {
                        zero[anchor] = true;
                        continue 'anchor;
                    }
                    break;
                }
            }

            let total: f64 = (0..n).filter(|&u| !zero[u]).map(|u| lower[u]).sum();
            debug_assert!(total > 0.0, "the anchor keeps the total positive");
            let mut c = vec![0.0; n];
            for u in 0..n {
                if !zero[u] {
                    c[u] = lower[u] / total;
                }
            }
            return Ok(c);
        }
    }

    /// Full feasibility LP over every condensed constraint plus the objective
    /// set; the fallback when general rows exist or the set is not the unit
    /// simplex. The domain is nonnegative by the mode's contract, so the
    /// variables carry explicit zero lower bounds, and pair rows use the
    /// exact fraction coefficients (rescaling would round and can push a
    /// tight ratio cycle infeasible by an ulp).
    fn feasibility_lp(&self, objective_set: &PolyhedralObjectiveSet) -> DenseLp {
        let n = self.dim;
        let mut lp = DenseLp::new(vec![0.0; n]);
        lp.var_lower = vec![0.0; n];
        for u in 0..n {
            if self.zero_forced[u] {
                let mut row = vec![0.0; n];
                row[u] = 1.0;
                lp.push_ub(row, 0.0);
            }
        }
        for u in 0..n {
            for v in 0..n {
                let idx = u * n + v;
                if self.pair_den[idx] != 0.0 {
                    let mut row = vec![0.0; n];
                    row[u] = self.pair_den[idx];
                    row[v] = -self.pair_num[idx];
                    lp.push_ub(row, 0.0);
                }
            }
        }
        for row in &self.general {
            lp.push_ub(row.clone(), 0.0);
        }
        for (row, &rhs) in objective_set.ineq_lhs.iter().zip(&objective_set.ineq_rhs) {
            lp.push_ub(row.clone(), rhs);
        }
        for (row, &rhs) in objective_set.eq_lhs.iter().zip(&objective_set.eq_rhs) {
            lp.push_eq(row.clone(), rhs);
        }
        lp
    }
}

pub struct FtlLearner<P> {
    objective_set: PolyhedralObjectiveSet,
    current: Vec<f64>,
    mode: FtlMode<P>,
    /// Exact-mode history of converted instances and expert decisions.
    history: Vec<(PolyhedralInstance, DecisionVector)>,
    /// Reduced-mode condensed constraint system.
    rows: Option<RowSystem>,
    master_value: f64,
}

impl<P> FtlLearner<P> {
    /// The first round plays `first_round_objective` (there is no data yet);
    /// it must lie in the objective set.
    pub fn new(
        objective_set: PolyhedralObjectiveSet,
        first_round_objective: ObjectiveVector,
        mode: FtlMode<P>,
    ) -> Result<Self, CoreError> {
        if first_round_objective.len() != objective_set.dim {
            return Err(CoreError::DimensionMismatch {
                expected: objective_set.dim,
                got: first_round_objective.len(),
            });
        }
        if !objective_set.contains(first_round_objective.as_slice(), 1e-7) {
            return Err(CoreError::InvalidParameter("first-round objective lies outside the objective set".into()));
        }
        let rows = match &mode {
            FtlMode::ConsistencyRows { .. } => Some(RowSystem::new(objective_set.dim)),
            FtlMode::ExactDense { .. } => None,
        };
        Ok(Self {
            objective_set,
            current: first_round_objective.into_vec(),
            mode,
            history: Vec::new(),
            rows,
            master_value: 0.0,
        })
    }

    /// Optimal value of the master problem over the revealed history (the
    /// minimal total duality gap). Zero in reduced mode by construction.
    pub fn master_value(&self) -> f64 {
        self.master_value
    }

    fn resolve_exact(&mut self) -> Result<(), CoreError> {
        let instances: Vec<PolyhedralInstance> = self.history.iter().map(|(i, _)| i.clone()).collect();
        let decisions: Vec<DecisionVector> = self.history.iter().map(|(_, d)| d.clone()).collect();
        let lp = build_ftl_lp(&instances, &decisions, &self.objective_set)?;
        let sol = solve_lp(&lp)?;
        match sol.status {
            LpStatus::Optimal => {
                self.current = sol.point[..self.objective_set.dim].to_vec();
                self.master_value = sol.value;
                Ok(())
            }
            LpStatus::Infeasible => Err(CoreError::LpInfeasible(
                "follow-the-leader master; the objective set is empty or a feasible region is malformed".into(),
            )),
            LpStatus::Unbounded => Err(CoreError::LpUnbounded("follow-the-leader master".into())),
        }
    }

    fn resolve_reduced(&mut self) -> Result<(), CoreError> {
        let rows = self.rows.as_ref().expect("reduced mode keeps a row system");
        if !rows.has_violation(&self.current) {
            self.master_value = 0.0;
            return Ok(());
        }
        if rows.general.is_empty() && self.objective_set.is_unit_simplex() {
            self.current = rows.relaxation_solve()?;
            if rows.has_violation(&self.current) {
                return Err(CoreError::InvalidParameter(
                    "reduced follow-the-leader master failed its own verification".into(),
                ));
            }
        } else {
            let lp = rows.feasibility_lp(&self.objective_set);
            let sol = solve_lp(&lp)?;
            match sol.status {
                LpStatus::Optimal => self.current = sol.point,
                LpStatus::Infeasible => {
                    return Err(CoreError::LpInfeasible(
                        "no objective in the set explains every observation; reduced follow-the-leader requires consistent streams".into(),
                    ))
                }
                LpStatus::Unbounded => return Err(CoreError::LpUnbounded("feasibility master".into())),
            }
        }
        self.master_value = 0.0;
        Ok(())
    }
}

impl<P> Learner<P> for FtlLearner<P> {
    fn current_objective(&self) -> ObjectiveVector {
        ObjectiveVector::new(self.current.clone()).expect("master solutions are finite")
    }

    fn observe(
        &mut self,
        params: &P,
        _learner_decision: &DecisionVector,
        expert_decision: &DecisionVector,
        _round: usize,
    ) -> Result<(), CoreError> {
        match &self.mode {
            FtlMode::ExactDense { to_polyhedron } => {
                let instance = to_polyhedron(params);
                if instance.dim() != self.objective_set.dim {
                    return Err(CoreError::DimensionMismatch {
                        expected: self.objective_set.dim,
                        got: instance.dim(),
                    });
                }
                self.history.push((instance, expert_decision.clone()));
                self.resolve_exact()
            }
            FtlMode::ConsistencyRows { rows_for } => {
                let raw_rows = rows_for(params, expert_decision)?;
                let system = self.rows.as_mut().expect("reduced mode keeps a row system");
                for row in &raw_rows {
                    if row.len() != self.objective_set.dim {
                        return Err(CoreError::DimensionMismatch {
                            expected: self.objective_set.dim,
                            got: row.len(),
                        });
                    }
                    system.absorb(row);
                }
                self.resolve_reduced()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{solve_knapsack_lp, KnapsackInstance};

    fn exact_knapsack_learner(n: usize) -> FtlLearner<KnapsackInstance> {
        FtlLearner::new(
            PolyhedralObjectiveSet::unit_simplex(n),
            ObjectiveVector::uniform(n).unwrap(),
            FtlMode::ExactDense { to_polyhedron: Box::new(|inst: &KnapsackInstance| inst.to_polyhedron()) },
        )
        .unwrap()
    }

    fn reduced_knapsack_learner(n: usize) -> FtlLearner<KnapsackInstance> {
        FtlLearner::new(
            PolyhedralObjectiveSet::unit_simplex(n),
            ObjectiveVector::uniform(n).unwrap(),
            FtlMode::ConsistencyRows {
                rows_for: Box::new(|inst: &KnapsackInstance, x: &DecisionVector| inst.lp_optimality_rows(x)),
            },
        )
        .unwrap()
    }

    #[test]
    fn empty_history_returns_first_round_objective() {
        let learner = exact_knapsack_learner(3);
        let c = Learner::<KnapsackInstance>::current_objective(&learner);
        assert_eq!(c.as_slice(), ObjectiveVector::uniform(3).unwrap().as_slice());
    }

    #[test]
    fn single_observation_reaches_zero_gap() {
        // Expert plays (1, 0) on prices (2, 1), budget 2 — optimal for
        // (0.75, 0.25). After one observation the learner's objective must
        // make that decision optimal again.
        let inst = KnapsackInstance::new(alloc::vec![2.0, 1.0], 2.0, true).unwrap();
        let truth = ObjectiveVector::new(alloc::vec![0.75, 0.25]).unwrap();
        let expert = solve_knapsack_lp(&truth, &inst).unwrap();
        assert_eq!(expert.decision.as_slice(), &[1.0, 0.0]);
        for mut learner in [exact_knapsack_learner(2), reduced_knapsack_learner(2)] {
            learner
                .observe(&inst, &expert.decision.clone(), &expert.decision, 1)
                .unwrap();
            let c = Learner::<KnapsackInstance>::current_objective(&learner);
            let replay = solve_knapsack_lp(&c, &inst).unwrap();
            let gap = replay.value - c.dot_decision(&expert.decision);
            assert!(gap.abs() <= 1e-7, "duality gap {gap} should vanish");
            assert!(learner.master_value().abs() <= 1e-7);
        }
    }

    #[test]
    fn replayed_history_gives_identical_objectives() {
        let insts = [
            KnapsackInstance::new(alloc::vec![2.0, 1.0, 3.0], 3.0, true).unwrap(),
            KnapsackInstance::new(alloc::vec![2.5, 1.5, 2.0], 4.0, true).unwrap(),
        ];
        let truth = ObjectiveVector::new(alloc::vec![0.5, 0.2, 0.3]).unwrap();
        let run = |mut learner: FtlLearner<KnapsackInstance>| {
            let mut played = Vec::new();
            for (round, inst) in insts.iter().enumerate() {
                let expert = solve_knapsack_lp(&truth, inst).unwrap();
                learner.observe(inst, &expert.decision.clone(), &expert.decision, round + 1).unwrap();
                played.push(Learner::<KnapsackInstance>::current_objective(&learner));
            }
            played
        };
        let a = run(exact_knapsack_learner(3));
        let b = run(exact_knapsack_learner(3));
        assert_eq!(a, b);
        let c = run(reduced_knapsack_learner(3));
        let d = run(reduced_knapsack_learner(3));
        assert_eq!(c, d);
    }

    #[test]
    fn both_modes_explain_the_full_history() {
        let insts = [
            KnapsackInstance::new(alloc::vec![3.0, 2.0, 4.0, 1.0], 5.0, true).unwrap(),
            KnapsackInstance::new(alloc::vec![2.0, 2.5, 3.5, 1.5], 4.0, true).unwrap(),
            KnapsackInstance::new(alloc::vec![4.0, 1.0, 2.0, 2.0], 6.0, true).unwrap(),
        ];
        let truth = ObjectiveVector::new(alloc::vec![0.4, 0.1, 0.3, 0.2]).unwrap();
        for mut learner in [exact_knapsack_learner(4), reduced_knapsack_learner(4)] {
            for (round, inst) in insts.iter().enumerate() {
                let expert = solve_knapsack_lp(&truth, inst).unwrap();
                learner.observe(inst, &expert.decision.clone(), &expert.decision, round + 1).unwrap();
            }
            let c = Learner::<KnapsackInstance>::current_objective(&learner);
            assert!(c.is_simplex_member(1e-7));
            for inst in &insts {
                let expert = solve_knapsack_lp(&truth, inst).unwrap();
                let replay = solve_knapsack_lp(&c, inst).unwrap();
                let gap = replay.value - c.dot_decision(&expert.decision);
                assert!(gap.abs() <= 1e-6, "gap {gap} must vanish on consistent history");
            }
        }
    }

    #[test]
    fn reduced_mode_explains_long_streams() {
        // Many rounds with varying prices; the condensed system must keep the
        // learner consistent with every past observation.
        let truth = ObjectiveVector::new(alloc::vec![0.35, 0.05, 0.4, 0.2]).unwrap();
        let mut learner = reduced_knapsack_learner(4);
        let mut insts = Vec::new();
        for round in 1..=40 {
            let r = round as f64;
            let prices = alloc::vec![
                2.0 + (r * 0.37) % 3.0,
                1.0 + (r * 0.71) % 2.0,
                3.0 + (r * 0.13) % 4.0,
                1.5 + (r * 0.53) % 2.5,
            ];
            let budget = 1.0 + (r * 1.31) % 6.0;
            let inst = KnapsackInstance::new(prices, budget, true).unwrap();
            let expert = solve_knapsack_lp(&truth, &inst).unwrap();
            learner.observe(&inst, &expert.decision.clone(), &expert.decision, round).unwrap();
            insts.push(inst);
        }
        let c = Learner::<KnapsackInstance>::current_objective(&learner);
        for inst in &insts {
            let expert = solve_knapsack_lp(&truth, inst).unwrap();
            let replay = solve_knapsack_lp(&c, inst).unwrap();
            let gap = replay.value - c.dot_decision(&expert.decision);
            assert!(gap.abs() <= 1e-6, "gap {gap} must vanish over the whole stream");
        }
    }

    #[test]
    fn inconsistent_stream_is_an_explicit_error_in_reduced_mode() {
        // Round 1: (1, 0) on budget 2 needs c_0 >= 2 c_1. Round 2: (0, 1)
        // leaves budget slack, so it needs c_0 <= 0. On the simplex the two
        // demands are contradictory.
        let inst = KnapsackInstance::new(alloc::vec![2.0, 1.0], 2.0, true).unwrap();
        let pick_a = DecisionVector::new(alloc::vec![1.0, 0.0]).unwrap();
        let pick_b = DecisionVector::new(alloc::vec![0.0, 1.0]).unwrap();
        let mut learner = reduced_knapsack_learner(2);
        learner.observe(&inst, &pick_a.clone(), &pick_a, 1).unwrap();
        let err = learner.observe(&inst, &pick_b.clone(), &pick_b, 2).unwrap_err();
        assert!(matches!(err, CoreError::LpInfeasible(_)));
    }
}
