//! Delivery-stream generator: a synthetic Euclidean customer layout with
//! per-round jittered edge costs and customer revenues; the expert answers
//! with the exact profitable-tour optimum for the round's true objective.

use oofl_core::oracles::{solve_pctsp, PctspInstance};
use oofl_core::types::{ObjectiveVector, Observation};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::HarnessError;

#[derive(Debug, Clone)]
pub struct PctspGenConfig {
    pub customers: usize,
    pub rounds: usize,
    /// Base revenues are scaled up by this factor to make the serve/skip
    /// trade-off non-trivial.
    pub revenue_scale: f64,
    /// Edge costs are drawn per round from ±this fraction around the base.
    pub cost_jitter: f64,
    /// Revenues are drawn per round from ±this fraction around the base.
    pub revenue_jitter: f64,
}

#[derive(Debug, Clone)]
pub struct PctspStream {
    /// The expected objective (base revenues ‖ negated base costs).
    pub c_expected: ObjectiveVector,
    /// Per-round jittered true objectives in the joint layout.
    pub truths: Vec<ObjectiveVector>,
    pub observations: Vec<Observation<PctspInstance>>,
    /// Radius of an origin-centered ball guaranteed to contain every round's
    /// true objective (used as the gradient-descent objective set).
    pub objective_ball_radius: f64,
    /// Base costs/revenues as an instance (jitter-free).
    pub base_instance: PctspInstance,
}

/// Draw one stream. Node coordinates are uniform on [0, 100]^2 (customers
/// first, depot last), base costs are Euclidean distances, base revenues are
/// uniform on [10, 40] times `revenue_scale`. Per round, costs and revenues
/// are jittered multiplicatively and the expert plays the exact optimum.
pub fn gen_pctsp_stream(cfg: &PctspGenConfig, rng: &mut ChaCha8Rng) -> Result<PctspStream, HarnessError> {
    let node_count = cfg.customers + 1;
    if node_count > 16 {
        return Err(HarnessError::Config("the exact tour oracle is capped at 16 nodes".into()));
    }
    if cfg.customers < 1 {
        return Err(HarnessError::Config("need at least one customer".into()));
    }
    let coords: Vec<(f64, f64)> = (0..node_count)
        .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
        .collect();
    let mut base_costs = Vec::with_capacity(node_count * (node_count - 1) / 2);
    for i in 0..node_count {
        for j in (i + 1)..node_count {
            let dx = coords[i].0 - coords[j].0;
            let dy = coords[i].1 - coords[j].1;
            base_costs.push((dx * dx + dy * dy).sqrt());
        }
    }
    let mut base_revenues: Vec<f64> =
        (0..cfg.customers).map(|_| cfg.revenue_scale * rng.gen_range(10.0..40.0)).collect();
    base_revenues.push(0.0); // depot

    let base_instance = PctspInstance::new(node_count, base_costs.clone(), base_revenues.clone())?;
    let mut expected = base_revenues.clone();
    expected.extend(base_costs.iter().map(|&c| -c));
    let c_expected = ObjectiveVector::new(expected)?;

    // Ball radius: jitter can inflate magnitudes by at most these margins.
    let mut extreme: Vec<f64> = base_revenues.iter().map(|r| r * (1.0 + cfg.revenue_jitter)).collect();
    extreme.extend(base_costs.iter().map(|c| c * (1.0 + cfg.cost_jitter)));
    let objective_ball_radius = extreme.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut truths = Vec::with_capacity(cfg.rounds);
    let mut observations = Vec::with_capacity(cfg.rounds);
    for round in 1..=cfg.rounds {
        let costs: Vec<f64> = base_costs
            .iter()
            .map(|&c| c * rng.gen_range(1.0 - cfg.cost_jitter..=1.0 + cfg.cost_jitter))
            .collect();
        let mut revenues: Vec<f64> = base_revenues[..cfg.customers]
            .iter()
            .map(|&r| r * rng.gen_range(1.0 - cfg.revenue_jitter..=1.0 + cfg.revenue_jitter))
            .collect();
        revenues.push(0.0);
        let instance = PctspInstance::new(node_count, costs.clone(), revenues.clone())?;
        let mut joint = revenues;
        joint.extend(costs.iter().map(|&c| -c));
        let truth = ObjectiveVector::new(joint)?;
        let expert = solve_pctsp(&truth, &instance)?;
        truths.push(truth);
        observations.push(Observation { round, params: instance, expert_decision: expert.decision });
    }
    Ok(PctspStream { c_expected, truths, observations, objective_ball_radius, base_instance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn cfg() -> PctspGenConfig {
        PctspGenConfig { customers: 5, rounds: 12, revenue_scale: 4.0, cost_jitter: 0.10, revenue_jitter: 0.20 }
    }

    #[test]
    fn jitters_stay_in_their_bands() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let stream = gen_pctsp_stream(&cfg(), &mut rng).unwrap();
        let base = &stream.base_instance;
        for obs in &stream.observations {
            for (e, &cost) in obs.params.edge_costs.iter().enumerate() {
                assert!(cost >= 0.9 * base.edge_costs[e] - 1e-12);
                assert!(cost <= 1.1 * base.edge_costs[e] + 1e-12);
            }
            for (v, &rev) in obs.params.revenues.iter().enumerate().take(5) {
                assert!(rev >= 0.8 * base.revenues[v] - 1e-12);
                assert!(rev <= 1.2 * base.revenues[v] + 1e-12);
            }
        }
    }

    #[test]
    fn zero_jitter_keeps_the_truth_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let mut config = cfg();
        config.cost_jitter = 0.0;
        config.revenue_jitter = 0.0;
        let stream = gen_pctsp_stream(&config, &mut rng).unwrap();
        for truth in &stream.truths {
            assert_eq!(truth, &stream.c_expected);
        }
    }

    #[test]
    fn truths_fit_inside_the_declared_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let stream = gen_pctsp_stream(&cfg(), &mut rng).unwrap();
        for truth in &stream.truths {
            let norm: f64 = truth.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(norm <= stream.objective_ball_radius + 1e-9);
        }
    }

    #[test]
    fn expert_tours_are_optimal_for_the_round_truth() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let stream = gen_pctsp_stream(&cfg(), &mut rng).unwrap();
        for (obs, truth) in stream.observations.iter().zip(&stream.truths) {
            let again = solve_pctsp(truth, &obs.params).unwrap();
            assert_eq!(again.decision, obs.expert_decision);
        }
    }
}
