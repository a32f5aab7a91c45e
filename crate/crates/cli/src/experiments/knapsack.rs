//! Buyer-stream generator: per round, strongly correlated prices around the
//! hidden integer utilities and a uniformly random budget; the expert answers
//! with the exact knapsack optimum (optionally degraded to an almost-optimal
//! decision).

use oofl_core::oracles::{solve_knapsack_ip_traced, KnapsackInstance, KnapsackOracle, LinearOptOracle};
use oofl_core::types::{DecisionVector, ObjectiveVector, Observation};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::HarnessError;

#[derive(Debug, Clone)]
pub struct KnapsackGenConfig {
    pub items: usize,
    pub rounds: usize,
    pub divisible: bool,
    /// Expert decisions are replaced by (1 − eps)-optimal ones when positive.
    pub suboptimality_eps: f64,
}

#[derive(Debug, Clone)]
pub struct KnapsackStream {
    /// Hidden normalized utilities.
    pub c_true: ObjectiveVector,
    /// The raw integer utilities behind `c_true`.
    pub utilities: Vec<u64>,
    pub observations: Vec<Observation<KnapsackInstance>>,
    /// True value of the exact optimum per round.
    pub optimal_values: Vec<f64>,
    /// True value of the observed (possibly degraded) decision per round.
    pub observed_values: Vec<f64>,
}

/// Draw one stream. Utilities are integers from [1, 1000], prices per round
/// are `u_i + 100 + r` with integer noise `r` from [-10, 10], and budgets are
/// integers from [1, sum(prices) - 1]. The draw order (utilities; then per
/// round: noise by item, budget) is part of the reproducibility contract.
pub fn gen_knapsack_stream(
    cfg: &KnapsackGenConfig,
    rng: &mut ChaCha8Rng,
    oracle: &KnapsackOracle,
) -> Result<KnapsackStream, HarnessError> {
    if cfg.items < 2 {
        return Err(HarnessError::Config("knapsack generator needs at least 2 items".into()));
    }
    let utilities: Vec<u64> = (0..cfg.items).map(|_| rng.gen_range(1..=1000)).collect();
    let total_utility: u64 = utilities.iter().sum();
    let c_true = ObjectiveVector::new(
        utilities.iter().map(|&u| u as f64 / total_utility as f64).collect(),
    )?;

    let mut observations = Vec::with_capacity(cfg.rounds);
    let mut optimal_values = Vec::with_capacity(cfg.rounds);
    let mut observed_values = Vec::with_capacity(cfg.rounds);
    for round in 1..=cfg.rounds {
        let prices: Vec<f64> = utilities
            .iter()
            .map(|&u| {
                let noise: i64 = rng.gen_range(-10..=10);
                (u as i64 + 100 + noise) as f64
            })
            .collect();
        let price_sum: f64 = prices.iter().sum();
        let budget = rng.gen_range(1..=(price_sum as u64 - 1)) as f64;
        let instance = KnapsackInstance::new(prices, budget, cfg.divisible)?;
        let optimal = oracle.solve(&c_true, &instance)?;
        let observed = if cfg.suboptimality_eps > 0.0 {
            apply_suboptimality(&optimal.decision, cfg.suboptimality_eps, oracle, &c_true, &instance)?
        } else {
            optimal.decision.clone()
        };
        optimal_values.push(c_true.dot_decision(&optimal.decision));
        observed_values.push(c_true.dot_decision(&observed));
        observations.push(Observation { round, params: instance, expert_decision: observed });
    }
    Ok(KnapsackStream { c_true, utilities, observations, optimal_values, observed_values })
}

/// A feasible decision worth at least `(1 - eps)` of the optimum under the
/// true objective. Fractional instances scale the optimum down; 0/1 instances
/// replay the branch-and-bound incumbents and keep the first qualifying one.
pub fn apply_suboptimality(
    optimal: &DecisionVector,
    eps: f64,
    oracle: &KnapsackOracle,
    c_true: &ObjectiveVector,
    instance: &KnapsackInstance,
) -> Result<DecisionVector, HarnessError> {
    if !(0.0..1.0).contains(&eps) {
        return Err(HarnessError::Config("suboptimality fraction must lie in [0, 1)".into()));
    }
    if eps == 0.0 {
        return Ok(optimal.clone());
    }
    if instance.divisible {
        let scaled: Vec<f64> = optimal.as_slice().iter().map(|x| (1.0 - eps) * x).collect();
        return Ok(DecisionVector::new(scaled)?);
    }
    let target = (1.0 - eps) * c_true.dot_decision(optimal);
    let (_, incumbents) = solve_knapsack_ip_traced(c_true, instance, oracle.node_cap)
        .or_else(|_| solve_knapsack_ip_traced(c_true, instance, usize::MAX))?;
    for candidate in &incumbents {
        if c_true.dot_decision(candidate) >= target {
            return Ok(candidate.clone());
        }
    }
    Ok(optimal.clone())
}
