//! Road-network stream generator: drivers with random origin/destination
//! pairs on a fixed network whose travel times may drift over the day.
//!
//! Bottleneck arcs are the most-traversed arcs under free flow (counted over
//! all-pairs shortest paths); congestion schedules scale only those arcs.

use oofl_core::oracles::{solve_shortest_path, GraphInstance};
use oofl_core::types::{ObjectiveVector, Observation};
use oofl_core::CoreError;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::HarnessError;

const OD_RETRIES: usize = 100;

/// Fixed topology with free-flow traversal times per arc.
#[derive(Debug, Clone)]
pub struct RoadNetwork {
    pub node_count: usize,
    pub arcs: Vec<(usize, usize)>,
    pub free_flow: Vec<f64>,
}

/// Four-neighbor grid, both arc directions, free-flow times uniform in
/// [1, 10). Arcs are enumerated node by node in (east, south, west, north)
/// order; the order is part of the reproducibility contract.
pub fn synthetic_grid(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> RoadNetwork {
    assert!(rows >= 2 && cols >= 2, "grids must be at least 2x2");
    let id = |r: usize, c: usize| r * cols + c;
    let mut arcs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                arcs.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                arcs.push((id(r, c), id(r + 1, c)));
            }
            if c > 0 {
                arcs.push((id(r, c), id(r, c - 1)));
            }
            if r > 0 {
                arcs.push((id(r, c), id(r - 1, c)));
            }
        }
    }
    let free_flow = (0..arcs.len()).map(|_| rng.gen_range(1.0..10.0)).collect();
    RoadNetwork { node_count: rows * cols, arcs, free_flow }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    None,
    Gradual,
    Abrupt,
}

#[derive(Debug, Clone, Copy)]
pub struct CongestionSchedule {
    pub kind: ScheduleKind,
    /// Fraction of arcs selected as bottlenecks (most-traversed first).
    pub bottleneck_fraction: f64,
    /// Multiplier applied to bottleneck arcs under the abrupt schedule.
    pub abrupt_factor: f64,
}

impl Default for CongestionSchedule {
    fn default() -> Self {
        Self { kind: ScheduleKind::None, bottleneck_fraction: 0.05, abrupt_factor: 1000.0 }
    }
}

/// Travel-time multiplier for a bottleneck arc at (1-based) round `t`.
///
/// The gradual profile ramps from the free-flow time up to twice it between
/// rounds 12 and 18, holds through round 29, and ramps back down by round 36;
/// the abrupt profile jumps to `abrupt_factor` for rounds 12..=36.
pub fn congestion_factor(kind: ScheduleKind, abrupt_factor: f64, t: usize) -> f64 {
    match kind {
        ScheduleKind::None => 1.0,
        ScheduleKind::Gradual => match t {
            12..=18 => 1.0 + (t as f64 - 12.0) / 6.0,
            19..=29 => 2.0,
            30..=36 => 1.0 + (36.0 - t as f64) / 6.0,
            _ => 1.0,
        },
        ScheduleKind::Abrupt => {
            if (12..=36).contains(&t) {
                abrupt_factor
            } else {
                1.0
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpStream {
    /// Per-round true travel times, normalized to unit 1-norm.
    pub truths: Vec<ObjectiveVector>,
    pub observations: Vec<Observation<GraphInstance>>,
    /// Indices of the congested arcs.
    pub bottlenecks: Vec<usize>,
}

/// Most-traversed arcs under free flow: run the path oracle over every
/// ordered node pair and count arc usage; ties break toward lower indices.
pub fn select_bottlenecks(network: &RoadNetwork, fraction: f64) -> Result<Vec<usize>, HarnessError> {
    let free = ObjectiveVector::new(network.free_flow.clone())?;
    let mut counts = vec![0u64; network.arcs.len()];
    for source in 0..network.node_count {
        for target in 0..network.node_count {
            if source == target {
                continue;
            }
            let inst = GraphInstance::new(network.node_count, network.arcs.clone(), source, target)?;
            match solve_shortest_path(&free, &inst) {
                Ok(answer) => {
                    for (a, &x) in answer.decision.as_slice().iter().enumerate() {
                        if x > 0.5 {
                            counts[a] += 1;
                        }
                    }
                }
                Err(CoreError::UnreachableTarget { .. }) => continue,
                Err(other) => return Err(other.into()),
            }
        }
    }
    let take = ((network.arcs.len() as f64 * fraction).round() as usize).max(1);
    let mut order: Vec<usize> = (0..network.arcs.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = order.into_iter().take(take).collect();
    chosen.sort_unstable();
    Ok(chosen)
}

/// Draw one driver stream: per round, the scheduled travel times and a
/// uniformly random origin/destination pair with a route between them
/// (bounded retries), answered by the exact path oracle.
pub fn gen_sp_stream(
    network: &RoadNetwork,
    rounds: usize,
    schedule: &CongestionSchedule,
    rng: &mut ChaCha8Rng,
) -> Result<SpStream, HarnessError> {
    if network.arcs.len() != network.free_flow.len() {
        return Err(HarnessError::Config("network arcs and free-flow times differ in length".into()));
    }
    if network.node_count < 2 {
        return Err(HarnessError::Config("network needs at least two nodes".into()));
    }
    let bottlenecks = select_bottlenecks(network, schedule.bottleneck_fraction)?;
    let mut is_bottleneck = vec![false; network.arcs.len()];
    for &a in &bottlenecks {
        is_bottleneck[a] = true;
    }

    let mut truths = Vec::with_capacity(rounds);
    let mut observations = Vec::with_capacity(rounds);
    for round in 1..=rounds {
        let factor = congestion_factor(schedule.kind, schedule.abrupt_factor, round);
        let raw: Vec<f64> = network
            .free_flow
            .iter()
            .enumerate()
            .map(|(a, &f)| if is_bottleneck[a] { factor * f } else { f })
            .collect();
        let truth = ObjectiveVector::new(raw)?.normalized_l1()?;

        let mut placed = false;
        for _ in 0..OD_RETRIES {
            let source = rng.gen_range(0..network.node_count);
            let target = rng.gen_range(0..network.node_count);
            if source == target {
                continue;
            }
            let inst = GraphInstance::new(network.node_count, network.arcs.clone(), source, target)?;
            match solve_shortest_path(&truth, &inst) {
                Ok(answer) => {
                    observations.push(Observation { round, params: inst, expert_decision: answer.decision });
                    placed = true;
                    break;
                }
                Err(CoreError::UnreachableTarget { .. }) => continue,
                Err(other) => return Err(other.into()),
            }
        }
        if !placed {
            return Err(HarnessError::Config(format!(
                "no connected origin/destination pair found within {OD_RETRIES} draws at round {round}"
            )));
        }
        truths.push(truth);
    }
    Ok(SpStream { truths, observations, bottlenecks })
}
