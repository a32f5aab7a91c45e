//! Exact profitable-tour oracle over complete undirected graphs, via a
//! Held-Karp dynamic program over customer subsets.
//!
//! Decision layout: first the y-block (customers in index order, then the
//! depot), then the x-block (edges in (i < j) lexicographic order). A tour
//! through a single customer traverses its depot edge twice (entry 2), an
//! empty tour is the all-zero vector.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::oracles::{lex_less, EnumerableDecisions, LinearOptOracle, OracleAnswer};
use crate::types::{DecisionVector, ObjectiveVector, Orientation};

const FEAS_TOL: f64 = 1e-9;
const MAX_EXACT_NODES: usize = 16;

/// One delivery round on a complete graph: true edge costs and customer
/// revenues (the round's hidden objective data) plus the topology size.
#[derive(Debug, Clone, PartialEq)]
pub struct PctspInstance {
    /// Customers plus the depot; the depot is the highest node id.
    pub node_count: usize,
    /// True traversal costs per edge, (i < j) lexicographic order.
    pub edge_costs: Vec<f64>,
    /// True revenues per y-coordinate (customers then depot; depot entry 0).
    pub revenues: Vec<f64>,
}

impl PctspInstance {
    pub fn new(node_count: usize, edge_costs: Vec<f64>, revenues: Vec<f64>) -> Result<Self, CoreError> {
        if node_count < 2 {
            return Err(CoreError::InvalidParameter("need a depot and at least one customer".into()));
        }
        let edges = node_count * (node_count - 1) / 2;
        if edge_costs.len() != edges {
            return Err(CoreError::DimensionMismatch { expected: edges, got: edge_costs.len() });
        }
        if revenues.len() != node_count {
            return Err(CoreError::DimensionMismatch { expected: node_count, got: revenues.len() });
        }
        if edge_costs.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(CoreError::InvalidParameter("edge costs must be finite and >= 0".into()));
        }
        if revenues.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(CoreError::InvalidParameter("revenues must be finite and >= 0".into()));
        }
        Ok(Self { node_count, edge_costs, revenues })
    }

    pub fn num_customers(&self) -> usize {
        self.node_count - 1
    }

    pub fn num_edges(&self) -> usize {
        self.node_count * (self.node_count - 1) / 2
    }

    pub fn decision_dim(&self) -> usize {
        self.node_count + self.num_edges()
    }

    /// Index of edge {i, j} (any order) in the x-block.
    pub fn edge_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i != j);
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let n = self.node_count;
        a * n - a * (a + 1) / 2 + (b - a - 1)
    }
}

struct HeldKarp<'a> {
    inst: &'a PctspInstance,
    /// Objective weight on each edge (the x-part of the joint objective).
    cx: &'a [f64],
    /// Edges removed from consideration (used for tie resolution).
    forbidden: &'a [bool],
    k: usize,
    depot: usize,
    /// best[mask][last]: max x-weight of a depot-start path visiting exactly
    /// `mask`, ending at customer `last`; NEG_INFINITY if impossible.
    best: Vec<f64>,
}

impl<'a> HeldKarp<'a> {
    fn run(inst: &'a PctspInstance, cx: &'a [f64], forbidden: &'a [bool]) -> Self {
        let k = inst.num_customers();
        let depot = inst.node_count - 1;
        let size = 1usize << k;
        let mut best = vec![f64::NEG_INFINITY; size * k];
        for v in 0..k {
            let e = inst.edge_index(v, depot);
            if !forbidden[e] {
                best[(1 << v) * k + v] = cx[e];
            }
        }
        for mask in 1..size {
            for last in 0..k {
                if mask & (1 << last) == 0 {
                    continue;
                }
                let prev_mask = mask ^ (1 << last);
                if prev_mask == 0 {
                    continue;
                }
                let mut score = f64::NEG_INFINITY;
                for prev in 0..k {
                    if prev_mask & (1 << prev) == 0 {
                        continue;
                    }
                    let from = best[prev_mask * k + prev];
                    if from == f64::NEG_INFINITY {
                        continue;
                    }
                    let e = inst.edge_index(prev, last);
                    if forbidden[e] {
                        continue;
                    }
                    let cand = from + cx[e];
                    if cand > score {
                        score = cand;
                    }
                }
                best[mask * k + last] = score;
            }
        }
        Self { inst, cx, forbidden, k, depot, best }
    }

    /// Best closed-tour x-weight for the customer set `mask` (singletons give
    /// the doubled depot edge) or None when no tour avoids the forbidden set.
    fn tour_score(&self, mask: usize) -> Option<f64> {
        let mut score = f64::NEG_INFINITY;
        for last in 0..self.k {
            if mask & (1 << last) == 0 {
                continue;
            }
            let path = self.best[mask * self.k + last];
            if path == f64::NEG_INFINITY {
                continue;
            }
            let e = self.inst.edge_index(last, self.depot);
            if self.forbidden[e] {
                continue;
            }
            let cand = path + self.cx[e];
            if cand > score {
                score = cand;
            }
        }
        if score == f64::NEG_INFINITY {
            None
        } else {
            Some(score)
        }
    }

    /// Number of directed optimal traversals for `mask` (two per undirected
    /// tour once |mask| >= 2; exactly one for singletons).
    fn count_optimal(&self, mask: usize, target: f64) -> u64 {
        let mut counts = vec![0u64; (1usize << self.k) * self.k];
        for v in 0..self.k {
            if self.best[(1 << v) * self.k + v] != f64::NEG_INFINITY {
                counts[(1 << v) * self.k + v] = 1;
            }
        }
        let relevant = mask;
        for m in 1..=relevant {
            if m & !relevant != 0 {
                continue;
            }
            for last in 0..self.k {
                if m & (1 << last) == 0 || m.count_ones() < 2 {
                    continue;
                }
                let prev_mask = m ^ (1 << last);
                let score = self.best[m * self.k + last];
                if score == f64::NEG_INFINITY {
                    continue;
                }
                let mut total = 0u64;
                for prev in 0..self.k {
                    if prev_mask & (1 << prev) == 0 {
                        continue;
                    }
                    let from = self.best[prev_mask * self.k + prev];
                    if from == f64::NEG_INFINITY {
                        continue;
                    }
                    let e = self.inst.edge_index(prev, last);
                    if self.forbidden[e] {
                        continue;
                    }
                    if from + self.cx[e] == score {
                        total = total.saturating_add(counts[prev_mask * self.k + prev]);
                    }
                }
                counts[m * self.k + last] = total;
            }
        }
        let mut total = 0u64;
        for last in 0..self.k {
            if mask & (1 << last) == 0 {
                continue;
            }
            let path = self.best[mask * self.k + last];
            if path == f64::NEG_INFINITY {
                continue;
            }
            let e = self.inst.edge_index(last, self.depot);
            if self.forbidden[e] {
                continue;
            }
            if path + self.cx[e] == target {
                total = total.saturating_add(counts[mask * self.k + last]);
            }
        }
        total
    }

    /// One optimal tour for `mask` as an edge multiset, deterministic
    /// (smallest customer index wins every tie).
    fn reconstruct(&self, mask: usize, target: f64) -> Vec<usize> {
        let mut edges = Vec::new();
        let mut last = None;
        for v in 0..self.k {
            if mask & (1 << v) == 0 {
                continue;
            }
            let path = self.best[mask * self.k + v];
            if path == f64::NEG_INFINITY {
                continue;
            }
            let e = self.inst.edge_index(v, self.depot);
            if self.forbidden[e] {
                continue;
            }
            if path + self.cx[e] == target {
                last = Some(v);
                break;
            }
        }
        let mut v = last.expect("target score must be attainable");
        edges.push(self.inst.edge_index(v, self.depot));
        let mut m = mask;
        while m.count_ones() > 1 {
            let prev_mask = m ^ (1 << v);
            let score = self.best[m * self.k + v];
            let mut next = None;
            for prev in 0..self.k {
                if prev_mask & (1 << prev) == 0 {
                    continue;
                }
                let from = self.best[prev_mask * self.k + prev];
                if from == f64::NEG_INFINITY {
                    continue;
                }
                let e = self.inst.edge_index(prev, v);
                if self.forbidden[e] {
                    continue;
                }
                if from + self.cx[e] == score {
                    next = Some(prev);
                    break;
                }
            }
            let prev = next.expect("consistent DP labels");
            edges.push(self.inst.edge_index(prev, v));
            m = prev_mask;
            v = prev;
        }
        edges.push(self.inst.edge_index(v, self.depot));
        edges
    }
}

/// Exact profitable-tour optimum of the joint objective `c` (y-block then
/// x-block) over tours through the depot. Among optima, the decision with the
/// lexicographically smallest joint vector is returned.
pub fn solve_pctsp(c: &ObjectiveVector, inst: &PctspInstance) -> Result<OracleAnswer, CoreError> {
    if inst.node_count > MAX_EXACT_NODES {
        return Err(CoreError::InvalidParameter("exact oracle capped at 16 nodes".into()));
    }
    let dim = inst.decision_dim();
    if c.len() != dim {
        return Err(CoreError::DimensionMismatch { expected: dim, got: c.len() });
    }
    let k = inst.num_customers();
    let cy = &c.as_slice()[..inst.node_count];
    let cx = &c.as_slice()[inst.node_count..];
    let no_forbidden = vec![false; inst.num_edges()];
    let hk = HeldKarp::run(inst, cx, &no_forbidden);

    // Scan customer subsets in y-lexicographic order (customer 0 is the most
    // significant digit), keeping the first profit maximizer; the empty tour
    // comes first with profit zero.
    let mut best_profit = 0.0_f64;
    let mut best_mask: Option<usize> = None;
    for key in 1..(1usize << k) {
        let mask = reverse_bits(key, k);
        let Some(score) = hk.tour_score(mask) else {
            continue;
        };
        let mut profit = 0.0;
        for v in 0..k {
            if mask & (1 << v) != 0 {
                profit += cy[v];
            }
        }
        profit += cy[inst.node_count - 1];
        profit += score;
        if profit > best_profit {
            best_profit = profit;
            best_mask = Some(mask);
        }
    }

    let decision = match best_mask {
        None => DecisionVector::zeros(dim),
        Some(mask) => {
            let target = hk.tour_score(mask).expect("winner mask has a tour");
            let mut x = vec![0.0; inst.num_edges()];
            if mask.count_ones() == 1 {
                let v = mask.trailing_zeros() as usize;
                x[inst.edge_index(v, inst.node_count - 1)] = 2.0;
            } else if hk.count_optimal(mask, target) <= 2 {
                for e in hk.reconstruct(mask, target) {
                    x[e] = 1.0;
                }
            } else {
                // Tie among tours: fix the lexicographically smallest edge
                // set by greedily forbidding edges that some optimal tour can
                // avoid.
                let mut forbidden = vec![false; inst.num_edges()];
                for e in 0..inst.num_edges() {
                    forbidden[e] = true;
                    let keeps_target = HeldKarp::run(inst, cx, &forbidden)
                        .tour_score(mask)
                        .is_some_and(|s| s == target);
                    if !keeps_target {
                        forbidden[e] = false;
                    }
                }
                let hk_tied = HeldKarp::run(inst, cx, &forbidden);
                for e in hk_tied.reconstruct(mask, target) {
                    x[e] = 1.0;
                }
            }
            let mut joint = vec![0.0; dim];
            for v in 0..k {
                if mask & (1 << v) != 0 {
                    joint[v] = 1.0;
                }
            }
            joint[inst.node_count - 1] = 1.0;
            joint[inst.node_count..].copy_from_slice(&x);
            DecisionVector::new(joint)?
        }
    };
    Ok(OracleAnswer::from_decision(c, decision))
}

fn reverse_bits(value: usize, width: usize) -> usize {
    let mut out = 0;
    for b in 0..width {
        if value & (1 << b) != 0 {
            out |= 1 << (width - 1 - b);
        }
    }
    out
}

/// Oracle wrapper for the profitable-tour family (maximization).
#[derive(Debug, Clone, Default)]
pub struct PctspOracle;

impl LinearOptOracle<PctspInstance> for PctspOracle {
    fn sense(&self) -> Orientation {
        Orientation::Maximize
    }

    fn decision_dim(&self, params: &PctspInstance) -> usize {
        params.decision_dim()
    }

    fn solve(&self, c: &ObjectiveVector, params: &PctspInstance) -> Result<OracleAnswer, CoreError> {
        solve_pctsp(c, params)
    }

    fn check_feasible(&self, decision: &DecisionVector, params: &PctspInstance) -> bool {
        if decision.len() != params.decision_dim() {
            return false;
        }
        let n = params.node_count;
        let y = &decision.as_slice()[..n];
        let x = &decision.as_slice()[n..];
        let is_binary = |v: f64| (v - 0.0).abs() <= FEAS_TOL || (v - 1.0).abs() <= FEAS_TOL;
        if !y.iter().all(|&v| is_binary(v)) {
            return false;
        }
        if !x.iter().all(|&v| is_binary(v) || (v - 2.0).abs() <= FEAS_TOL) {
            return false;
        }
        // Customers can only be served if the depot is active.
        let depot_active = y[n - 1] > 0.5;
        if y[..n - 1].iter().any(|&v| v > 0.5) && !depot_active {
            return false;
        }
        // Degree equations: sum of incident edge uses equals 2 y_v.
        for v in 0..n {
            let mut degree = 0.0;
            for u in 0..n {
                if u != v {
                    degree += x[params.edge_index(u, v)];
                }
            }
            if (degree - 2.0 * y[v]).abs() > FEAS_TOL {
                return false;
            }
        }
        // Active nodes must form a single connected component.
        let active: Vec<usize> = (0..n).filter(|&v| y[v] > 0.5).collect();
        if active.is_empty() {
            return x.iter().all(|&v| v.abs() <= FEAS_TOL);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![active[0]];
        seen[active[0]] = true;
        while let Some(v) = stack.pop() {
            for u in 0..n {
                if u != v && !seen[u] && x[params.edge_index(u, v)] > 0.5 {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        active.iter().all(|&v| seen[v])
    }
}

impl EnumerableDecisions for PctspInstance {
    /// Every feasible (y, x) vector: the empty tour, singleton round trips,
    /// and all tours over customer subsets of size >= 2, in lexicographic
    /// order of the joint decision vector.
    fn enumerate_decisions(&self) -> Result<Vec<DecisionVector>, CoreError> {
        if self.node_count > 8 {
            return Err(CoreError::EnumerationOverflow { size_log2: self.node_count as u32 });
        }
        let k = self.num_customers();
        let depot = self.node_count - 1;
        let dim = self.decision_dim();
        let mut raw: Vec<Vec<f64>> = Vec::new();
        raw.push(vec![0.0; dim]);
        for v in 0..k {
            let mut d = vec![0.0; dim];
            d[v] = 1.0;
            d[depot] = 1.0;
            d[self.node_count + self.edge_index(v, depot)] = 2.0;
            raw.push(d);
        }
        for mask in 1usize..(1 << k) {
            if mask.count_ones() < 2 {
                continue;
            }
            let members: Vec<usize> = (0..k).filter(|v| mask & (1 << v) != 0).collect();
            let mut perm = members.clone();
            permute_tours(self, &mut perm, 0, depot, dim, mask, &mut raw);
        }
        raw.sort_by(|a, b| {
            if lex_less(a, b) {
                core::cmp::Ordering::Less
            } else if lex_less(b, a) {
                core::cmp::Ordering::Greater
            } else {
                core::cmp::Ordering::Equal
            }
        });
        raw.dedup();
        raw.into_iter().map(DecisionVector::new).collect()
    }
}

fn permute_tours(
    inst: &PctspInstance,
    perm: &mut Vec<usize>,
    at: usize,
    depot: usize,
    dim: usize,
    mask: usize,
    out: &mut Vec<Vec<f64>>,
) {
    if at == perm.len() {
        let mut d = vec![0.0; dim];
        for v in 0..inst.num_customers() {
            if mask & (1 << v) != 0 {
                d[v] = 1.0;
            }
        }
        d[depot] = 1.0;
        let mut prev = depot;
        for &v in perm.iter() {
            d[inst.node_count + inst.edge_index(prev, v)] = 1.0;
            prev = v;
        }
        d[inst.node_count + inst.edge_index(prev, depot)] = 1.0;
        out.push(d);
        return;
    }
    for i in at..perm.len() {
        perm.swap(at, i);
        permute_tours(inst, perm, at + 1, depot, dim, mask, out);
        perm.swap(at, i);
    }
}
