//! Objective learning via projected online gradient descent.
//!
//! The learner steps against the observed decision difference and projects
//! back onto its feasible objective set. Rates follow `D/(G sqrt(T))`
//! (fixed, requires the horizon) or `D/(G sqrt(t))` (dynamic, anytime),
//! where `D` is the set's 2-norm diameter and `G` bounds the gradient norm —
//! here the configured decision-diameter bound.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::learners::Learner;
use crate::math;
use crate::projections::{diameter_l2, project, FeasibleObjectiveSet};
use crate::types::{DecisionVector, ObjectiveVector, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OgdSchedule {
    /// Constant rate `D/(G sqrt(T))`; needs the horizon up front.
    Fixed,
    /// Per-round rate `D/(G sqrt(t))`; horizon-free.
    Dynamic,
}

#[derive(Debug, Clone)]
pub struct OgdLearner {
    current: Vec<f64>,
    set: FeasibleObjectiveSet,
    schedule: OgdSchedule,
    /// `D / G`, the rate numerator shared by both schedules.
    rate_scale: f64,
    /// Fixed-schedule rate; unused under the dynamic schedule.
    fixed_eta: f64,
    sense: Orientation,
}

impl OgdLearner {
    /// `k` is the 2-norm decision-diameter bound (the gradient bound `G`);
    /// `horizon` is required by the fixed schedule. The start objective is
    /// the projection of `start` (or the origin) onto the set.
    pub fn new(
        set: FeasibleObjectiveSet,
        k: f64,
        horizon: Option<usize>,
        schedule: OgdSchedule,
        sense: Orientation,
        start: Option<Vec<f64>>,
    ) -> Result<Self, CoreError> {
        set.validate()?;
        if !(k > 0.0) || !k.is_finite() {
            return Err(CoreError::InvalidParameter("decision diameter bound must be positive and finite".into()));
        }
        let d = diameter_l2(&set);
        let rate_scale = d / k;
        let fixed_eta = match (schedule, horizon) {
            (OgdSchedule::Fixed, Some(t)) if t >= 1 => rate_scale / math::sqrt(t as f64),
            (OgdSchedule::Fixed, _) => {
                return Err(CoreError::InvalidParameter("fixed schedule requires the horizon".into()))
            }
            (OgdSchedule::Dynamic, _) => 0.0,
        };
        let n = set.dimension();
        let raw = start.unwrap_or_else(|| alloc::vec![0.0; n]);
        if raw.len() != n {
            return Err(CoreError::DimensionMismatch { expected: n, got: raw.len() });
        }
        let current = project(&raw, &set)?;
        Ok(Self { current, set, schedule, rate_scale, fixed_eta, sense })
    }

    pub fn eta_at(&self, round: usize) -> f64 {
        match self.schedule {
            OgdSchedule::Fixed => self.fixed_eta,
            OgdSchedule::Dynamic => self.rate_scale / math::sqrt(round as f64),
        }
    }

    pub fn feasible_set(&self) -> &FeasibleObjectiveSet {
        &self.set
    }
}

impl<P> Learner<P> for OgdLearner {
    fn current_objective(&self) -> ObjectiveVector {
        ObjectiveVector::new(self.current.clone()).expect("projected point is finite")
    }

    fn observe(
        &mut self,
        _params: &P,
        learner_decision: &DecisionVector,
        expert_decision: &DecisionVector,
        round: usize,
    ) -> Result<(), CoreError> {
        let n = self.current.len();
        if learner_decision.len() != n || expert_decision.len() != n {
            return Err(CoreError::DimensionMismatch { expected: n, got: learner_decision.len() });
        }
        if round < 1 {
            return Err(CoreError::InvalidParameter("rounds are 1-based".into()));
        }
        let eta = self.eta_at(round);
        let sign = self.sense.update_sign();
        let stepped: Vec<f64> = self
            .current
            .iter()
            .zip(learner_decision.as_slice().iter().zip(expert_decision.as_slice()))
            .map(|(c, (l, e))| c - eta * sign * (l - e))
            .collect();
        self.current = project(&stepped, &self.set)?;
        Ok(())
    }
}
