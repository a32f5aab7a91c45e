//! Knapsack oracles: the fractional (divisible goods) relaxation solved by
//! ratio greedy, and the 0/1 problem solved by best-first branch and bound
//! with the fractional-greedy upper bound.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::lp::PolyhedralInstance;
use crate::math;
use crate::oracles::{lex_less, EnumerableDecisions, LinearOptOracle, OracleAnswer};
use crate::types::{DecisionVector, ObjectiveVector, Orientation};

const FEAS_TOL: f64 = 1e-9;

/// One buyer round: per-good prices, the budget, and whether goods are
/// divisible (fractional purchases allowed) or 0/1.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    pub prices: Vec<f64>,
    pub budget: f64,
    pub divisible: bool,
}

impl KnapsackInstance {
    pub fn new(prices: Vec<f64>, budget: f64, divisible: bool) -> Result<Self, CoreError> {
        if prices.is_empty() {
            return Err(CoreError::InvalidParameter("knapsack needs at least one item".into()));
        }
        if prices.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(CoreError::InvalidParameter("prices must be strictly positive and finite".into()));
        }
        if !budget.is_finite() || budget < 0.0 {
            return Err(CoreError::InvalidParameter("budget must be finite and >= 0".into()));
        }
        Ok(Self { prices, budget, divisible })
    }

    pub fn num_items(&self) -> usize {
        self.prices.len()
    }

    /// The feasible region as explicit rows: price row, upper bounds, lower
    /// bounds. Used by the follow-the-leader master problem.
    pub fn to_polyhedron(&self) -> PolyhedralInstance {
        let n = self.num_items();
        let mut a = Vec::with_capacity(2 * n + 1);
        let mut b = Vec::with_capacity(2 * n + 1);
        a.push(self.prices.clone());
        b.push(self.budget);
        for i in 0..n {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            a.push(row);
            b.push(1.0);
        }
        for i in 0..n {
            let mut row = vec![0.0; n];
            row[i] = -1.0;
            a.push(row);
            b.push(0.0);
        }
        PolyhedralInstance { a, b }
    }

    /// Linear rows over `c` that hold exactly when the observed fractional
    /// greedy vertex `x` is optimal for `c` (the optimality conditions of the
    /// relaxation). Used by the reduced follow-the-leader master.
    ///
    /// Rows come back in `coeffs · c <= 0` form.
    pub fn lp_optimality_rows(&self, x: &DecisionVector) -> Result<Vec<Vec<f64>>, CoreError> {
        let n = self.num_items();
        if x.len() != n {
            return Err(CoreError::DimensionMismatch { expected: n, got: x.len() });
        }
        let mut taken = Vec::new();
        let mut zeros = Vec::new();
        let mut fractional = None;
        for i in 0..n {
            let v = x[i];
            if v >= 1.0 - FEAS_TOL {
                taken.push(i);
            } else if v <= FEAS_TOL {
                zeros.push(i);
            } else if fractional.is_none() {
                fractional = Some(i);
            } else {
                return Err(CoreError::InvalidParameter(
                    "decision has more than one fractional entry; not a greedy vertex".into(),
                ));
            }
        }
        let spent = math::dot(&self.prices, x.as_slice());
        let tight = (self.budget - spent).abs() <= FEAS_TOL * (1.0 + self.budget.abs());
        let mut rows = Vec::new();
        if !tight {
            // Slack budget: every coordinate below one must carry weight <= 0.
            for &j in &zeros {
                let mut row = vec![0.0; n];
                row[j] = 1.0;
                rows.push(row);
            }
            if let Some(f) = fractional {
                let mut up = vec![0.0; n];
                up[f] = 1.0;
                let mut down = vec![0.0; n];
                down[f] = -1.0;
                rows.push(up);
                rows.push(down);
            }
            return Ok(rows);
        }
        match fractional {
            Some(f) => {
                let pf = self.prices[f];
                // Ratio of every taken item at least the break ratio, every
                // skipped item at most it: c_i p_f - c_f p_i >= 0 (taken),
                // <= 0 (skipped).
                for &i in &taken {
                    let mut row = vec![0.0; n];
                    row[i] = -pf;
                    row[f] = self.prices[i];
                    rows.push(row);
                }
                for &j in &zeros {
                    let mut row = vec![0.0; n];
                    row[j] = pf;
                    row[f] = -self.prices[j];
                    rows.push(row);
                }
            }
            None => {
                // Tight integral vertex: every taken ratio at least every
                // skipped ratio, pairwise.
                for &i in &taken {
                    for &j in &zeros {
                        let mut row = vec![0.0; n];
                        row[j] = self.prices[i];
                        row[i] = -self.prices[j];
                        rows.push(row);
                    }
                }
            }
        }
        Ok(rows)
    }
}

/// Items in greedy order: ratio `c_i / p_i` descending, index ascending.
fn ratio_order(c: &[f64], prices: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..c.len()).collect();
    let ratios: Vec<f64> = c.iter().zip(prices).map(|(ci, pi)| ci / pi).collect();
    order.sort_by(|&i, &j| ratios[j].total_cmp(&ratios[i]).then(i.cmp(&j)));
    order
}

fn require_nonnegative(c: &ObjectiveVector) -> Result<(), CoreError> {
    if c.as_slice().iter().any(|&ci| ci < 0.0) {
        return Err(CoreError::InvalidParameter("knapsack oracle requires a nonnegative objective".into()));
    }
    Ok(())
}

/// Exact optimum of the fractional relaxation: greedy by ratio, at most one
/// fractional item, equal ratios processed by lower index. Items with zero
/// weight are left out — taking them is equally optimal, and the family tie
/// rule prefers the lexicographically smallest decision vector.
pub fn solve_knapsack_lp(c: &ObjectiveVector, inst: &KnapsackInstance) -> Result<OracleAnswer, CoreError> {
    let n = inst.num_items();
    if c.len() != n {
        return Err(CoreError::DimensionMismatch { expected: n, got: c.len() });
    }
    require_nonnegative(c)?;
    let mut x = vec![0.0; n];
    let mut remaining = inst.budget;
    for &i in &ratio_order(c.as_slice(), &inst.prices) {
        if remaining <= 0.0 || c[i] == 0.0 {
            break;
        }
        let p = inst.prices[i];
        if p <= remaining {
            x[i] = 1.0;
            remaining -= p;
        } else {
            x[i] = remaining / p;
            break;
        }
    }
    Ok(OracleAnswer::from_decision(c, DecisionVector::new(x)?))
}

#[derive(Debug, Clone, Copy)]
struct BbNode {
    parent: usize,
    pos: usize,
    took: bool,
}

#[derive(Debug)]
struct HeapEntry {
    bound: f64,
    id: usize,
    level: usize,
    value: f64,
    weight: f64,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.id == other.id
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        // Max-heap: larger bound first; at equal bound the younger node,
        // which makes tie exploration depth-first and zero-branch-first.
        self.bound.total_cmp(&other.bound).then(self.id.cmp(&other.id))
    }
}

struct BbSearch<'a> {
    c: &'a [f64],
    prices: &'a [f64],
    budget: f64,
    order: Vec<usize>,
    arena: Vec<BbNode>,
}

impl<'a> BbSearch<'a> {
    fn decision_of(&self, mut id: usize, n: usize) -> Vec<f64> {
        let mut x = vec![0.0; n];
        while id != 0 {
            let node = self.arena[id];
            if node.took {
                x[self.order[node.pos]] = 1.0;
            }
            id = node.parent;
        }
        x
    }

    /// Fractional-greedy completion bound from `level` on.
    fn bound(&self, level: usize, value: f64, weight: f64) -> f64 {
        let mut rem = self.budget - weight;
        let mut b = value;
        for pos in level..self.order.len() {
            if rem <= 0.0 {
                break;
            }
            let i = self.order[pos];
            let p = self.prices[i];
            if p <= rem {
                b += self.c[i];
                rem -= p;
            } else {
                b += self.c[i] * rem / p;
                break;
            }
        }
        b
    }
}

/// Proven-optimal 0/1 knapsack via best-first branch and bound; among optima
/// the lexicographically smallest decision vector is returned. Exceeding
/// `node_cap` is an explicit error, never a degraded answer.
pub fn solve_knapsack_ip(
    c: &ObjectiveVector,
    inst: &KnapsackInstance,
    node_cap: usize,
) -> Result<OracleAnswer, CoreError> {
    let (answer, _) = solve_knapsack_ip_traced(c, inst, node_cap)?;
    Ok(answer)
}

/// Branch and bound that additionally reports every incumbent in the order it
/// was found (used to emulate almost-optimal experts).
pub fn solve_knapsack_ip_traced(
    c: &ObjectiveVector,
    inst: &KnapsackInstance,
    node_cap: usize,
) -> Result<(OracleAnswer, Vec<DecisionVector>), CoreError> {
    let n = inst.num_items();
    if c.len() != n {
        return Err(CoreError::DimensionMismatch { expected: n, got: c.len() });
    }
    require_nonnegative(c)?;

    let mut search = BbSearch {
        c: c.as_slice(),
        prices: &inst.prices,
        budget: inst.budget,
        order: ratio_order(c.as_slice(), &inst.prices),
        arena: vec![BbNode { parent: 0, pos: usize::MAX, took: false }],
    };
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    let root_bound = search.bound(0, 0.0, 0.0);
    heap.push(HeapEntry { bound: root_bound, id: 0, level: 0, value: 0.0, weight: 0.0 });

    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut trace: Vec<DecisionVector> = Vec::new();
    let mut expansions = 0usize;

    while let Some(entry) = heap.pop() {
        // Re-check against the current incumbent: it may have improved since
        // the entry was pushed. Equal-bound subtrees survive only if they can
        // still improve lexicographically.
        if let Some((best_value, best_vec)) = &incumbent {
            if entry.bound < *best_value {
                continue;
            }
            if entry.bound == *best_value {
                let lex_min = search.decision_of(entry.id, n);
                if !lex_less(&lex_min, best_vec) {
                    continue;
                }
            }
        }
        if entry.level == n {
            let decision = search.decision_of(entry.id, n);
            let replace = match &incumbent {
                None => true,
                Some((best_value, best_vec)) => {
                    entry.value > *best_value
                        || (entry.value == *best_value && lex_less(&decision, best_vec))
                }
            };
            if replace {
                trace.push(DecisionVector::new(decision.clone())?);
                incumbent = Some((entry.value, decision));
            }
            continue;
        }

        expansions += 1;
        if expansions > node_cap {
            return Err(CoreError::OracleBudgetExceeded { nodes: expansions });
        }

        let item = search.order[entry.level];
        let price = search.prices[item];
        // Take-branch first, then skip-branch: the skip child receives the
        // larger id and therefore wins heap ties, which steers tie exploration
        // toward lexicographically smaller decisions.
        if entry.weight + price <= search.budget {
            let id = search.arena.len();
            search.arena.push(BbNode { parent: entry.id, pos: entry.level, took: true });
            let value = entry.value + search.c[item];
            let weight = entry.weight + price;
            let bound = search.bound(entry.level + 1, value, weight);
            push_if_viable(&mut heap, &search, &incumbent, HeapEntry { bound, id, level: entry.level + 1, value, weight }, n);
        }
        {
            let id = search.arena.len();
            search.arena.push(BbNode { parent: entry.id, pos: entry.level, took: false });
            let bound = search.bound(entry.level + 1, entry.value, entry.weight);
            push_if_viable(
                &mut heap,
                &search,
                &incumbent,
                HeapEntry { bound, id, level: entry.level + 1, value: entry.value, weight: entry.weight },
                n,
            );
        }
    }

    let (_, decision) = incumbent.expect("the all-zero decision is always feasible");
    let answer = OracleAnswer::from_decision(c, DecisionVector::new(decision)?);
    Ok((answer, trace))
}

fn push_if_viable(
    heap: &mut BinaryHeap<HeapEntry>,
    search: &BbSearch<'_>,
    incumbent: &Option<(f64, Vec<f64>)>,
    entry: HeapEntry,
    n: usize,
) {
    if let Some((best_value, best_vec)) = incumbent {
        if entry.bound < *best_value {
            return;
        }
        if entry.bound == *best_value {
            let lex_min = search.decision_of(entry.id, n);
            if !lex_less(&lex_min, best_vec) {
                return;
            }
        }
    }
    heap.push(entry);
}

/// Exact 0/1 knapsack by budget-indexed dynamic programming; requires integral
/// prices and budget. Among optima it reconstructs the lexicographically
/// smallest decision (zero preferred at the earliest index).
pub fn solve_knapsack_ip_dp(c: &ObjectiveVector, inst: &KnapsackInstance) -> Result<OracleAnswer, CoreError> {
    let n = inst.num_items();
    if c.len() != n {
        return Err(CoreError::DimensionMismatch { expected: n, got: c.len() });
    }
    require_nonnegative(c)?;
    let mut prices = Vec::with_capacity(n);
    for &p in &inst.prices {
        let rounded = math::round(p);
        if (p - rounded).abs() > FEAS_TOL || rounded < 1.0 {
            return Err(CoreError::InvalidParameter("dynamic program requires integral positive prices".into()));
        }
        prices.push(rounded as usize);
    }
    if (inst.budget - math::round(inst.budget)).abs() > FEAS_TOL {
        return Err(CoreError::InvalidParameter("dynamic program requires an integral budget".into()));
    }
    let w_max = math::round(inst.budget) as usize;
    if (n + 1).saturating_mul(w_max + 1) > 200_000_000 {
        return Err(CoreError::InvalidParameter("dynamic program table would be too large".into()));
    }

    // Suffix table: best[i][w] = optimal value over items i.. with capacity w.
    let width = w_max + 1;
    let mut best = vec![0.0_f64; (n + 1) * width];
    for i in (0..n).rev() {
        let (head, tail) = best.split_at_mut((i + 1) * width);
        let row = &mut head[i * width..];
        let next = &tail[..width];
        let p = prices[i];
        let ci = c[i];
        for w in 0..width {
            let skip = next[w];
            row[w] = if p <= w {
                let take = ci + next[w - p];
                if take > skip {
                    take
                } else {
                    skip
                }
            } else {
                skip
            };
        }
    }

    let mut x = vec![0.0; n];
    let mut w = w_max;
    for i in 0..n {
        let here = best[i * width + w];
        let skip = best[(i + 1) * width + w];
        if here == skip {
            // Zero is achievable at the same value; prefer it for lex order.
            continue;
        }
        x[i] = 1.0;
        w -= prices[i];
    }
    Ok(OracleAnswer::from_decision(c, DecisionVector::new(x)?))
}

/// Dispatching oracle for both knapsack variants.
///
/// `node_cap` bounds the branch-and-bound search. With `dp_fallback` set, a
/// capped search falls back to the exact dynamic program instead of erroring
/// (the answer stays proven-optimal either way).
#[derive(Debug, Clone)]
pub struct KnapsackOracle {
    pub node_cap: usize,
    pub dp_fallback: bool,
}

impl Default for KnapsackOracle {
    fn default() -> Self {
        Self { node_cap: 10_000_000, dp_fallback: false }
    }
}

impl LinearOptOracle<KnapsackInstance> for KnapsackOracle {
    fn sense(&self) -> Orientation {
        Orientation::Maximize
    }

    fn decision_dim(&self, params: &KnapsackInstance) -> usize {
        params.num_items()
    }

    fn solve(&self, c: &ObjectiveVector, params: &KnapsackInstance) -> Result<OracleAnswer, CoreError> {
        if params.divisible {
            solve_knapsack_lp(c, params)
        } else {
            match solve_knapsack_ip(c, params, self.node_cap) {
                Err(CoreError::OracleBudgetExceeded { .. }) if self.dp_fallback => {
                    solve_knapsack_ip_dp(c, params)
                }
                other => other,
            }
        }
    }

    fn check_feasible(&self, decision: &DecisionVector, params: &KnapsackInstance) -> bool {
        if decision.len() != params.num_items() {
            return false;
        }
        let within_bounds = decision.as_slice().iter().all(|&x| {
            if params.divisible {
                (-FEAS_TOL..=1.0 + FEAS_TOL).contains(&x)
            } else {
                (x - 0.0).abs() <= FEAS_TOL || (x - 1.0).abs() <= FEAS_TOL
            }
        });
        let spent = math::dot(&params.prices, decision.as_slice());
        within_bounds && spent <= params.budget + FEAS_TOL * (1.0 + params.budget.abs())
    }
}

impl EnumerableDecisions for KnapsackInstance {
    /// All feasible 0/1 decisions in lexicographic vector order (item 0 is the
    /// most significant coordinate). Divisible instances are not enumerable.
    fn enumerate_decisions(&self) -> Result<Vec<DecisionVector>, CoreError> {
        if self.divisible {
            return Err(CoreError::InvalidParameter("divisible knapsack decisions are not enumerable".into()));
        }
        let n = self.num_items();
        if n > 20 {
            return Err(CoreError::EnumerationOverflow { size_log2: n as u32 });
        }
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << n) {
            let mut x = vec![0.0; n];
            let mut cost = 0.0;
            for i in 0..n {
                if mask & (1 << (n - 1 - i)) != 0 {
                    x[i] = 1.0;
                    cost += self.prices[i];
                }
            }
            if cost <= self.budget {
                out.push(DecisionVector::new(x)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::brute_force_oracle;

    fn obj(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn greedy_single_item_fits() {
        let inst = KnapsackInstance::new(vec![2.0, 1.0], 2.0, true).unwrap();
        let ans = solve_knapsack_lp(&obj(&[3.0, 1.0]), &inst).unwrap();
        assert_eq!(ans.decision.as_slice(), &[1.0, 0.0]);
        assert_eq!(ans.value, 3.0);
    }

    #[test]
    fn greedy_fractional_break_item() {
        let inst = KnapsackInstance::new(vec![2.0, 1.0], 2.5, true).unwrap();
        let ans = solve_knapsack_lp(&obj(&[3.0, 1.0]), &inst).unwrap();
        assert_eq!(ans.decision.as_slice(), &[1.0, 0.5]);
        assert!((ans.value - 3.5).abs() < 1e-12);
    }

    #[test]
    fn greedy_unconstrained_budget_takes_everything() {
        let inst = KnapsackInstance::new(vec![2.0, 1.0, 4.0], 100.0, true).unwrap();
        let ans = solve_knapsack_lp(&obj(&[3.0, 1.0, 0.5]), &inst).unwrap();
        assert_eq!(ans.decision.as_slice(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn greedy_leaves_worthless_items_out() {
        // Zero-weight items are ties; the lex rule keeps them at zero.
        let inst = KnapsackInstance::new(vec![2.0, 1.0, 4.0], 100.0, true).unwrap();
        let ans = solve_knapsack_lp(&obj(&[3.0, 1.0, 0.0]), &inst).unwrap();
        assert_eq!(ans.decision.as_slice(), &[1.0, 1.0, 0.0]);
    }

    #[test]
    fn branch_and_bound_three_items() {
        let inst = KnapsackInstance::new(vec![1.0, 2.0, 3.0], 5.0, false).unwrap();
        let ans = solve_knapsack_ip(&obj(&[6.0, 10.0, 12.0]), &inst, 1_000).unwrap();
        assert_eq!(ans.decision.as_slice(), &[0.0, 1.0, 1.0]);
        assert_eq!(ans.value, 22.0);
    }

    #[test]
    fn zero_budget_forces_empty_choice() {
        let inst = KnapsackInstance::new(vec![1.0, 2.0], 0.0, false).unwrap();
        let ans = solve_knapsack_ip(&obj(&[5.0, 5.0]), &inst, 1_000).unwrap();
        assert_eq!(ans.decision.as_slice(), &[0.0, 0.0]);
        assert_eq!(ans.value, 0.0);
    }

    #[test]
    fn zero_objective_picks_lexicographically_smallest() {
        let inst = KnapsackInstance::new(vec![1.0, 1.0, 1.0], 3.0, false).unwrap();
        let ans = solve_knapsack_ip(&obj(&[0.0, 0.0, 0.0]), &inst, 1_000).unwrap();
        assert_eq!(ans.decision.as_slice(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn branch_and_bound_matches_brute_force() {
        let inst = KnapsackInstance::new(vec![3.0, 5.0, 4.0, 2.0, 6.0], 9.0, false).unwrap();
        let c = obj(&[4.5, 6.0, 5.5, 1.5, 7.0]);
        let bb = solve_knapsack_ip(&c, &inst, 10_000).unwrap();
        let bf = brute_force_oracle(&c, &inst, Orientation::Maximize).unwrap();
        assert_eq!(bb.decision, bf.decision);
        assert_eq!(bb.value, bf.value);
    }

    #[test]
    fn dp_agrees_with_branch_and_bound() {
        let inst = KnapsackInstance::new(vec![3.0, 5.0, 4.0, 2.0, 6.0], 9.0, false).unwrap();
        let c = obj(&[4.5, 6.0, 5.5, 1.5, 7.0]);
        let bb = solve_knapsack_ip(&c, &inst, 10_000).unwrap();
        let dp = solve_knapsack_ip_dp(&c, &inst).unwrap();
        assert_eq!(bb.decision, dp.decision);
    }

    #[test]
    fn node_cap_is_an_explicit_error() {
        let inst = KnapsackInstance::new(vec![3.0, 5.0, 4.0, 2.0, 6.0], 9.0, false).unwrap();
        let c = obj(&[4.5, 6.0, 5.5, 1.5, 7.0]);
        let err = solve_knapsack_ip(&c, &inst, 1).unwrap_err();
        assert!(matches!(err, CoreError::OracleBudgetExceeded { .. }));
    }

    #[test]
    fn negative_price_rejected() {
        assert!(KnapsackInstance::new(vec![1.0, -2.0], 3.0, true).is_err());
    }

    #[test]
    fn optimality_rows_accept_the_generating_objective() {
        let inst = KnapsackInstance::new(vec![2.0, 1.0, 4.0], 3.0, true).unwrap();
        let c = obj(&[0.6, 0.1, 0.3]);
        let ans = solve_knapsack_lp(&c, &inst).unwrap();
        let rows = inst.lp_optimality_rows(&ans.decision).unwrap();
        for row in &rows {
            assert!(math::dot(row, c.as_slice()) <= 1e-12, "generating objective must satisfy its own rows");
        }
    }

    #[test]
    fn optimality_rows_reject_objectives_with_other_optima() {
        let inst = KnapsackInstance::new(vec![2.0, 1.0], 2.0, true).unwrap();
        let c = obj(&[0.9, 0.1]);
        let ans = solve_knapsack_lp(&c, &inst).unwrap();
        assert_eq!(ans.decision.as_slice(), &[1.0, 0.0]);
        let rows = inst.lp_optimality_rows(&ans.decision).unwrap();
        // Under (0.1, 0.9) the greedy optimum is (0.5, 1) instead, so some row
        // must be violated.
        let other = [0.1, 0.9];
        assert!(rows.iter().any(|row| math::dot(row, &other) > 1e-9));
    }
}
