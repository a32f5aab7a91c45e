//! Replicated experiment execution and summary statistics.

use oofl_core::learners::{FtlLearner, FtlMode, MwuLearner, OgdLearner, OgdSchedule};
use oofl_core::lp::PolyhedralObjectiveSet;
use oofl_core::oracles::{KnapsackInstance, KnapsackOracle, PctspOracle, ShortestPathOracle};
use oofl_core::projections::FeasibleObjectiveSet;
use oofl_core::types::{Bounds, DecisionVector, ObjectiveVector, Orientation};
use oofl_core::{run_online, RunLedger, Truth};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, LearnerKind, ProblemKind, ScheduleKindConfig};
use crate::error::HarnessError;
use crate::experiments::knapsack::{gen_knapsack_stream, KnapsackGenConfig};
use crate::experiments::pctsp::{gen_pctsp_stream, PctspGenConfig};
use crate::experiments::shortest_path::{
    gen_sp_stream, synthetic_grid, CongestionSchedule, RoadNetwork, ScheduleKind,
};
use crate::formats::tntp::parse_tntp;

/// Node budget for the 0/1 knapsack search before the exact dynamic-program
/// fallback takes over (strongly correlated rounds occasionally blow the
/// search up; the fallback keeps answers proven-optimal).
const HARNESS_NODE_CAP: usize = 500_000;

/// Mean and population standard deviation of the prefix-average errors at
/// each checkpoint, taken across replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub checkpoints: Vec<usize>,
    pub mean_avg_objective: Vec<f64>,
    pub std_avg_objective: Vec<f64>,
    pub mean_avg_solution: Vec<f64>,
    pub std_avg_solution: Vec<f64>,
    pub mean_avg_total: Vec<f64>,
    pub std_avg_total: Vec<f64>,
}

/// Everything a replicated run produces.
#[derive(Debug)]
pub struct ExperimentOutput {
    pub ledgers: Vec<RunLedger>,
    pub summary: SummaryTable,
    /// Per-replication diameter/dimension data for the regret bounds.
    pub bounds: Vec<Bounds>,
    pub sense: Orientation,
}

fn mean_and_std(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Aggregate prefix-average errors at the checkpoints across replications.
pub fn summarize(ledgers: &[RunLedger], checkpoints: &[usize]) -> Result<SummaryTable, HarnessError> {
    if ledgers.is_empty() {
        return Err(HarnessError::Config("no ledgers to summarize".into()));
    }
    let mut table = SummaryTable {
        checkpoints: checkpoints.to_vec(),
        mean_avg_objective: Vec::new(),
        std_avg_objective: Vec::new(),
        mean_avg_solution: Vec::new(),
        std_avg_solution: Vec::new(),
        mean_avg_total: Vec::new(),
        std_avg_total: Vec::new(),
    };
    for &cp in checkpoints {
        let mut objective = Vec::with_capacity(ledgers.len());
        let mut solution = Vec::with_capacity(ledgers.len());
        let mut total = Vec::with_capacity(ledgers.len());
        for ledger in ledgers {
            if cp < 1 || cp > ledger.rounds() {
                return Err(HarnessError::Config(format!(
                    "checkpoint {cp} outside the {}-round ledger",
                    ledger.rounds()
                )));
            }
            objective.push(ledger.avg_objective[cp - 1]);
            let (Some(avg_sol), Some(avg_tot)) = (&ledger.avg_solution, &ledger.avg_total) else {
                return Err(HarnessError::Config("summaries need ledgers with a known truth".into()));
            };
            solution.push(avg_sol[cp - 1]);
            total.push(avg_tot[cp - 1]);
        }
        let (m, s) = mean_and_std(&objective);
        table.mean_avg_objective.push(m);
        table.std_avg_objective.push(s);
        let (m, s) = mean_and_std(&solution);
        table.mean_avg_solution.push(m);
        table.std_avg_solution.push(s);
        let (m, s) = mean_and_std(&total);
        table.mean_avg_total.push(m);
        table.std_avg_total.push(s);
    }
    Ok(table)
}

/// Least-squares slope of `log(avg_total)` against `log(t)` over the
/// inclusive round window.
pub fn convergence_slope(ledger: &RunLedger, window: (usize, usize)) -> Result<f64, HarnessError> {
    let Some(avg_total) = &ledger.avg_total else {
        return Err(HarnessError::Config("slope needs a ledger with a known truth".into()));
    };
    slope_of_avg_series(avg_total, window)
}

/// Slope fit over a raw prefix-average series (index i holds round i + 1).
pub fn slope_of_avg_series(avg_total: &[f64], window: (usize, usize)) -> Result<f64, HarnessError> {
    let (lo, hi) = window;
    if lo < 1 || hi > avg_total.len() || lo >= hi {
        return Err(HarnessError::Config(format!("invalid slope window [{lo}, {hi}]")));
    }
    let mut xs = Vec::with_capacity(hi - lo + 1);
    let mut ys = Vec::with_capacity(hi - lo + 1);
    for t in lo..=hi {
        let v = avg_total[t - 1];
        if v <= 0.0 {
            return Err(HarnessError::Config(format!(
                "average total error is not positive at round {t}; narrow the window"
            )));
        }
        xs.push((t as f64).ln());
        ys.push(v.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    Ok(num / den)
}

fn ogd_schedule(kind: LearnerKind) -> Option<OgdSchedule> {
    match kind {
        LearnerKind::OgdFixed => Some(OgdSchedule::Fixed),
        LearnerKind::OgdDynamic => Some(OgdSchedule::Dynamic),
        _ => None,
    }
}

/// Run every replication of the configured experiment. Replication `k` draws
/// its stream from ChaCha8(seed, stream = k), so outputs are bit-reproducible
/// and independent of execution order.
pub fn run_replicated(cfg: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    cfg.validate()?;
    let mut ledgers = Vec::with_capacity(cfg.replications);
    let mut bounds = Vec::with_capacity(cfg.replications);
    let mut sense = Orientation::Maximize;

    // TNTP networks are fixed inputs shared by every replication.
    let tntp_network: Option<RoadNetwork> = match (&cfg.problem, &cfg.shortest_path) {
        (ProblemKind::ShortestPath, Some(section)) => match &section.tntp_path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path.clone(), e))?;
                let network = parse_tntp(&text, section.zone_id_threshold)?;
                Some(network.to_road_network())
            }
            None => None,
        },
        _ => None,
    };

    for rep in 0..cfg.replications {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(rep as u64);
        match cfg.problem {
            ProblemKind::KnapsackLp | ProblemKind::KnapsackIp => {
                let section = cfg.knapsack.as_ref().expect("validated");
                let divisible = cfg.problem == ProblemKind::KnapsackLp;
                let gen_cfg = KnapsackGenConfig {
                    items: section.items,
                    rounds: section.rounds,
                    divisible,
                    suboptimality_eps: section.suboptimality_eps,
                };
                let oracle = KnapsackOracle { node_cap: HARNESS_NODE_CAP, dp_fallback: true };
                let stream = gen_knapsack_stream(&gen_cfg, &mut rng, &oracle)?;
                sense = Orientation::Maximize;
                let n = section.items;
                let t = section.rounds;
                let truth = Truth::Fixed(stream.c_true.clone());
                let ledger = match cfg.learner {
                    LearnerKind::Mwu => {
                        let mut learner = MwuLearner::new(n, t, Orientation::Maximize)?;
                        bounds.push(Bounds::new(1.0, 2.0_f64.sqrt(), n, t)?);
                        run_online(&mut learner, &oracle, &stream.observations, &truth)?
                    }
                    LearnerKind::OgdFixed | LearnerKind::OgdDynamic => {
                        let k = (n as f64).sqrt();
                        // Rate constant: the squared gradient-norm bound, so
                        // eta = D / (K^2 sqrt(T)).
                        let mut learner = OgdLearner::new(
                            FeasibleObjectiveSet::UnitSimplex(n),
                            k * k,
                            Some(t),
                            ogd_schedule(cfg.learner).expect("ogd kind"),
                            Orientation::Maximize,
                            None,
                        )?;
                        bounds.push(Bounds::new(k, 2.0_f64.sqrt(), n, t)?);
                        run_online(&mut learner, &oracle, &stream.observations, &truth)?
                    }
                    LearnerKind::LpFtl => {
                        let mut learner = FtlLearner::new(
                            PolyhedralObjectiveSet::unit_simplex(n),
                            ObjectiveVector::uniform(n)?,
                            FtlMode::ConsistencyRows {
                                rows_for: Box::new(|inst: &KnapsackInstance, x: &DecisionVector| {
                                    inst.lp_optimality_rows(x)
                                }),
                            },
                        )?;
                        bounds.push(Bounds::new(1.0, 2.0_f64.sqrt(), n, t)?);
                        run_online(&mut learner, &oracle, &stream.observations, &truth)?
                    }
                };
                ledgers.push(ledger);
            }
            ProblemKind::ShortestPath => {
                let section = cfg.shortest_path.as_ref().expect("validated");
                let network = match &tntp_network {
                    Some(fixed) => fixed.clone(),
                    None => synthetic_grid(
                        section.grid_rows.expect("validated"),
                        section.grid_cols.expect("validated"),
                        &mut rng,
                    ),
                };
                let schedule = CongestionSchedule {
                    kind: match section.schedule {
                        ScheduleKindConfig::None => ScheduleKind::None,
                        ScheduleKindConfig::Gradual => ScheduleKind::Gradual,
                        ScheduleKindConfig::Abrupt => ScheduleKind::Abrupt,
                    },
                    bottleneck_fraction: section.bottleneck_fraction,
                    abrupt_factor: section.abrupt_factor,
                };
                let stream = gen_sp_stream(&network, section.rounds, &schedule, &mut rng)?;
                sense = Orientation::Minimize;
                let oracle = ShortestPathOracle;
                let n = network.arcs.len();
                let t = section.rounds;
                let truth = Truth::PerRound(stream.truths.clone());
                let ledger = match cfg.learner {
                    LearnerKind::Mwu => {
                        let mut learner = MwuLearner::new(n, t, Orientation::Minimize)?;
                        bounds.push(Bounds::new(1.0, 2.0_f64.sqrt(), n, t)?);
                        run_online(&mut learner, &oracle, &stream.observations, &truth)?
                    }
                    LearnerKind::OgdFixed | LearnerKind::OgdDynamic => {
                        let k = (n as f64).sqrt();
                        let mut learner = OgdLearner::new(
                            FeasibleObjectiveSet::UnitSimplex(n),
                            k,
                            Some(t),
                            ogd_schedule(cfg.learner).expect("ogd kind"),
                            Orientation::Minimize,
                            None,
                        )?;
                        bounds.push(Bounds::new(k, 2.0_f64.sqrt(), n, t)?);
                        run_online(&mut learner, &oracle, &stream.observations, &truth)?
                    }
                    LearnerKind::LpFtl => unreachable!("validation rejects lp-ftl off knapsack-lp"),
                };
                ledgers.push(ledger);
            }
            ProblemKind::Pctsp => {
                let section = cfg.pctsp.as_ref().expect("validated");
                let gen_cfg = PctspGenConfig {
                    customers: section.customers,
                    rounds: section.rounds,
                    revenue_scale: section.revenue_scale,
                    cost_jitter: section.cost_jitter,
                    revenue_jitter: section.revenue_jitter,
                };
                let stream = gen_pctsp_stream(&gen_cfg, &mut rng)?;
                sense = Orientation::Maximize;
                let oracle = PctspOracle;
                let node_count = section.customers + 1;
                let edges = node_count * (node_count - 1) / 2;
                let dim = node_count + edges;
                let t = section.rounds;
                // Coordinatewise decision spans: 1 on tour coordinates, 2 on
                // doubled depot edges.
                let k = ((node_count + 4 * edges) as f64).sqrt();
                let set = FeasibleObjectiveSet::L2Ball {
                    center: vec![0.0; dim],
                    radius: stream.objective_ball_radius,
                };
                let truth = Truth::PerRound(stream.truths.clone());
                let ledger = match cfg.learner {
                    LearnerKind::OgdFixed | LearnerKind::OgdDynamic => {
                        let l = 2.0 * stream.objective_ball_radius;
                        let mut learner = OgdLearner::new(
                            set,
                            k,
                            Some(t),
                            ogd_schedule(cfg.learner).expect("ogd kind"),
                            Orientation::Maximize,
                            None,
                        )?;
                        bounds.push(Bounds::new(k, l, dim, t)?);
                        run_online(&mut learner, &oracle, &stream.observations, &truth)?
                    }
                    _ => unreachable!("validation restricts pctsp to gradient descent"),
                };
                ledgers.push(ledger);
            }
        }
    }
    let summary = summarize(&ledgers, &cfg.checkpoints)?;
    Ok(ExperimentOutput { ledgers, summary, bounds, sense })
}
