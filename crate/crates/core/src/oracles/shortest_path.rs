//! Shortest-path oracle over directed graphs with arc-incidence decisions.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::oracles::{EnumerableDecisions, LinearOptOracle, OracleAnswer};
use crate::types::{DecisionVector, ObjectiveVector, Orientation};

const FEAS_TOL: f64 = 1e-9;

/// One routing round: fixed topology plus the round's origin and destination.
/// The decision space is the 0/1 arc-incidence vector indexed by arc position.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    pub node_count: usize,
    /// Directed arcs as (tail, head); the arc's index is its position here.
    pub arcs: Vec<(usize, usize)>,
    pub source: usize,
    pub target: usize,
}

impl GraphInstance {
    pub fn new(node_count: usize, arcs: Vec<(usize, usize)>, source: usize, target: usize) -> Result<Self, CoreError> {
        if source == target {
            return Err(CoreError::InvalidParameter("source and target must differ".into()));
        }
        if source >= node_count || target >= node_count {
            return Err(CoreError::InvalidParameter("endpoint node id out of range".into()));
        }
        if arcs.iter().any(|&(u, v)| u >= node_count || v >= node_count) {
            return Err(CoreError::InvalidParameter("arc endpoint out of range".into()));
        }
        Ok(Self { node_count, arcs, source, target })
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }
}

#[derive(Debug)]
struct QueueEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for QueueEntry {}
impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        // Reversed for a min-heap; node index as a deterministic tiebreak.
        other.dist.total_cmp(&self.dist).then(other.node.cmp(&self.node))
    }
}

/// Minimum-cost source→target path under nonnegative arc costs.
///
/// Distances accumulate as forward partial sums, and the path is recovered by
/// walking backward from the target, at each node preferring the tight
/// predecessor arc with the lowest index. Among minimum-cost paths this picks
/// the one whose reversed arc-index sequence is lexicographically smallest.
pub fn solve_shortest_path(c: &ObjectiveVector, inst: &GraphInstance) -> Result<OracleAnswer, CoreError> {
    let m = inst.num_arcs();
    if c.len() != m {
        return Err(CoreError::DimensionMismatch { expected: m, got: c.len() });
    }
    if c.as_slice().iter().any(|&w| w < 0.0) {
        return Err(CoreError::InvalidParameter("negative arc cost".into()));
    }

    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); inst.node_count];
    let mut in_arcs: Vec<Vec<usize>> = vec![Vec::new(); inst.node_count];
    for (a, &(u, v)) in inst.arcs.iter().enumerate() {
        out_arcs[u].push(a);
        in_arcs[v].push(a);
    }

    let mut dist = vec![f64::INFINITY; inst.node_count];
    let mut done = vec![false; inst.node_count];
    dist[inst.source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(QueueEntry { dist: 0.0, node: inst.source });
    while let Some(QueueEntry { dist: d, node }) = heap.pop() {
        if done[node] || d > dist[node] {
            continue;
        }
        done[node] = true;
        for &a in &out_arcs[node] {
            let (_, head) = inst.arcs[a];
            let nd = dist[node] + c[a];
            if nd < dist[head] {
                dist[head] = nd;
                heap.push(QueueEntry { dist: nd, node: head });
            }
        }
    }
    if !dist[inst.target].is_finite() {
        return Err(CoreError::UnreachableTarget { source: inst.source, target: inst.target });
    }

    // Backward walk over tight arcs. With positive costs the tight graph is
    // acyclic, so the walk finishes within node_count steps.
    let mut x = vec![0.0; m];
    let mut node = inst.target;
    let mut steps = 0usize;
    while node != inst.source {
        steps += 1;
        if steps > inst.node_count {
            return Err(CoreError::InvalidParameter(
                "tight-arc walk did not terminate; zero-cost cycle in the instance".into(),
            ));
        }
        let mut chosen = None;
        for &a in &in_arcs[node] {
            let (tail, _) = inst.arcs[a];
            if tail != node && dist[tail] + c[a] == dist[node] {
                chosen = Some(a);
                break;
            }
        }
        let Some(a) = chosen else {
            return Err(CoreError::InvalidParameter("inconsistent shortest-path labels".into()));
        };
        x[a] = 1.0;
        node = inst.arcs[a].0;
    }

    Ok(OracleAnswer::from_decision(c, DecisionVector::new(x)?))
}

/// Oracle wrapper for the shortest-path family (minimization).
#[derive(Debug, Clone, Default)]
pub struct ShortestPathOracle;

impl LinearOptOracle<GraphInstance> for ShortestPathOracle {
    fn sense(&self) -> Orientation {
        Orientation::Minimize
    }

    fn decision_dim(&self, params: &GraphInstance) -> usize {
        params.num_arcs()
    }

    fn solve(&self, c: &ObjectiveVector, params: &GraphInstance) -> Result<OracleAnswer, CoreError> {
        solve_shortest_path(c, params)
    }

    fn check_feasible(&self, decision: &DecisionVector, params: &GraphInstance) -> bool {
        if decision.len() != params.num_arcs() {
            return false;
        }
        if decision
            .as_slice()
            .iter()
            .any(|&x| (x - 0.0).abs() > FEAS_TOL && (x - 1.0).abs() > FEAS_TOL)
        {
            return false;
        }
        let mut balance = vec![0.0_f64; params.node_count];
        for (a, &(u, v)) in params.arcs.iter().enumerate() {
            if decision[a] > 0.5 {
                balance[u] += 1.0;
                balance[v] -= 1.0;
            }
        }
        for node in 0..params.node_count {
            let want = if node == params.source {
                1.0
            } else if node == params.target {
                -1.0
            } else {
                0.0
            };
            if (balance[node] - want).abs() > FEAS_TOL {
                return false;
            }
        }
        true
    }
}

/// All simple source→target paths as incidence vectors, ordered by the
/// family tie rule (reversed arc-index sequence, lexicographically).
impl EnumerableDecisions for GraphInstance {
    fn enumerate_decisions(&self) -> Result<Vec<DecisionVector>, CoreError> {
        if self.node_count > 10 {
            return Err(CoreError::EnumerationOverflow { size_log2: self.node_count as u32 });
        }
        let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); self.node_count];
        for (a, &(u, _)) in self.arcs.iter().enumerate() {
            out_arcs[u].push(a);
        }
        let mut paths: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut visited = vec![false; self.node_count];
        visited[self.source] = true;
        dfs_paths(self, &out_arcs, self.source, &mut visited, &mut stack, &mut paths);
        // Tie-rule order: compare reversed arc-index sequences.
        paths.sort_by(|p, q| {
            let rp = p.iter().rev();
            let rq = q.iter().rev();
            rp.cmp(rq)
        });
        paths
            .into_iter()
            .map(|p| {
                let mut x = vec![0.0; self.num_arcs()];
                for a in p {
                    x[a] = 1.0;
                }
                DecisionVector::new(x)
            })
            .collect()
    }
}

fn dfs_paths(
    inst: &GraphInstance,
    out_arcs: &[Vec<usize>],
    node: usize,
    visited: &mut Vec<bool>,
    stack: &mut Vec<usize>,
    paths: &mut Vec<Vec<usize>>,
) {
    if node == inst.target {
        paths.push(stack.clone());
        return;
    }
    for &a in &out_arcs[node] {
        let (_, head) = inst.arcs[a];
        if visited[head] {
            continue;
        }
        visited[head] = true;
        stack.push(a);
        dfs_paths(inst, out_arcs, head, visited, stack, paths);
        stack.pop();
        visited[head] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn detour_beats_direct_arc() {
        // Arcs: 0: s->t cost 3, 1: s->m cost 1, 2: m->t cost 1.
        let inst = GraphInstance::new(3, vec![(0, 2), (0, 1), (1, 2)], 0, 2).unwrap();
        let ans = solve_shortest_path(&obj(&[3.0, 1.0, 1.0]), &inst).unwrap();
        assert_eq!(ans.decision.as_slice(), &[0.0, 1.0, 1.0]);
        assert_eq!(ans.value, 2.0);
    }

    #[test]
    fn single_arc_graph() {
        let inst = GraphInstance::new(2, vec![(0, 1)], 0, 1).unwrap();
        let ans = solve_shortest_path(&obj(&[7.5]), &inst).unwrap();
        assert_eq!(ans.decision.as_slice(), &[1.0]);
        assert_eq!(ans.value, 7.5);
    }

    #[test]
    fn equal_cost_parallel_routes_take_lower_arc_index() {
        // Route A: arc 0 (s->t, cost 2). Route B: arcs 1 and 2 (cost 1 + 1).
        let inst = GraphInstance::new(3, vec![(0, 2), (0, 1), (1, 2)], 0, 2).unwrap();
        let c = obj(&[2.0, 1.0, 1.0]);
        // Both routes cost exactly 2 (integer arithmetic, no rounding).
        let ans = solve_shortest_path(&c, &inst).unwrap();
        assert_eq!(ans.decision.as_slice(), &[1.0, 0.0, 0.0]);
        // Enumeration confirms the tie.
        let all = inst.enumerate_decisions().unwrap();
        let costs: Vec<f64> = all.iter().map(|d| c.dot_decision(d)).collect();
        assert_eq!(costs.iter().filter(|&&v| v == 2.0).count(), 2);
    }

    #[test]
    fn unreachable_target_is_hard_error() {
        let inst = GraphInstance::new(3, vec![(1, 0)], 0, 2).unwrap();
        let err = solve_shortest_path(&obj(&[1.0]), &inst).unwrap_err();
        assert!(matches!(err, CoreError::UnreachableTarget { .. }));
    }

    #[test]
    fn negative_cost_rejected() {
        let inst = GraphInstance::new(2, vec![(0, 1)], 0, 1).unwrap();
        assert!(solve_shortest_path(&obj(&[-1.0]), &inst).is_err());
    }

    #[test]
    fn feasibility_check_flow_conservation() {
        let inst = GraphInstance::new(3, vec![(0, 1), (1, 2), (0, 2)], 0, 2).unwrap();
        let oracle = ShortestPathOracle;
        let path = DecisionVector::new(vec![1.0, 1.0, 0.0]).unwrap();
        assert!(oracle.check_feasible(&path, &inst));
        let broken = DecisionVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(!oracle.check_feasible(&broken, &inst));
    }
}
