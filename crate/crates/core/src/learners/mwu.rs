//! Objective learning via multiplicative weights updates.
//!
//! The learner maintains strictly positive weights, plays their 1-normalized
//! vector, and after each round shifts weight away from coordinates it
//! over-valued: with the update direction `y` (the ∞-normalized decision
//! difference, sign-adjusted for the orientation), weights become
//! `w − eta (w ⊙ y)`. With `eta < 1/2` and `|y| <= 1` the weights stay
//! positive, so the played objective always lies in the unit simplex.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::learners::Learner;
use crate::math;
use crate::types::{DecisionVector, ObjectiveVector, Orientation};

/// Learning rates at or above 1/2 break the positivity argument; degenerate
/// tiny-horizon configurations are clamped here instead of rejected.
pub const ETA_CLAMP: f64 = 0.4999;

#[derive(Debug, Clone)]
pub struct MwuLearner {
    weights: Vec<f64>,
    eta: f64,
    eta_clamped: bool,
    sense: Orientation,
}

impl MwuLearner {
    /// Set up for `n` coordinates and a horizon of `t` rounds, with the rate
    /// `sqrt(ln n / t)` (clamped below 1/2 for tiny horizons).
    pub fn new(n: usize, t: usize, sense: Orientation) -> Result<Self, CoreError> {
        if n < 2 {
            return Err(CoreError::InvalidParameter("weight dimension must be at least 2".into()));
        }
        if t < 1 {
            return Err(CoreError::InvalidParameter("horizon must be at least 1".into()));
        }
        let raw = math::sqrt(math::ln(n as f64) / t as f64);
        let (eta, eta_clamped) = if raw >= 0.5 { (ETA_CLAMP, true) } else { (raw, false) };
        Ok(Self { weights: vec![1.0; n], eta, eta_clamped, sense })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Whether the rate formula exceeded 1/2 and was clamped.
    pub fn eta_was_clamped(&self) -> bool {
        self.eta_clamped
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl<P> Learner<P> for MwuLearner {
    fn current_objective(&self) -> ObjectiveVector {
        let sum = math::norm1(&self.weights);
        ObjectiveVector::new(self.weights.iter().map(|w| w / sum).collect())
            .expect("weights are positive and finite")
    }

    fn observe(
        &mut self,
        _params: &P,
        learner_decision: &DecisionVector,
        expert_decision: &DecisionVector,
        _round: usize,
    ) -> Result<(), CoreError> {
        let n = self.weights.len();
        if learner_decision.len() != n || expert_decision.len() != n {
            return Err(CoreError::DimensionMismatch { expected: n, got: learner_decision.len() });
        }
        let diff: Vec<f64> = learner_decision
            .as_slice()
            .iter()
            .zip(expert_decision.as_slice())
            .map(|(l, e)| l - e)
            .collect();
        let scale = math::norm_inf(&diff);
        if scale == 0.0 {
            return Ok(());
        }
        let sign = self.sense.update_sign();
        for (w, d) in self.weights.iter_mut().zip(&diff) {
            let y = sign * d / scale;
            *w -= self.eta * *w * y;
            debug_assert!(*w > 0.0, "weights must stay strictly positive");
        }
        Ok(())
    }
}
