//! Lifting a learner to decisions evaluated through basis functions: the
//! wrapped learner sees feature images `f(x)` instead of raw decisions, so an
//! objective learned over feature space scores decisions as `c · f(x)`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::learners::Learner;
use crate::types::{DecisionVector, ObjectiveVector};

type MapFn = Box<dyn Fn(&DecisionVector) -> Vec<f64> + Send>;

/// A deterministic decision-to-feature map with a fixed output dimension and
/// a Lipschitz bound used when sizing regret constants.
pub struct FeatureMap {
    map: MapFn,
    output_dim: usize,
    pub lipschitz_bound: f64,
}

impl FeatureMap {
    pub fn new(output_dim: usize, lipschitz_bound: f64, map: MapFn) -> Self {
        Self { map, output_dim, lipschitz_bound }
    }

    /// The identity embedding of an `n`-dimensional decision space.
    pub fn identity(n: usize) -> Self {
        Self::new(n, 1.0, Box::new(|d: &DecisionVector| d.as_slice().to_vec()))
    }

    /// The stacked map `x -> (q_1 x, ..., q_m x)` used for learning linearly
    /// parameterized objectives: blocks of the decision scaled by the round's
    /// objective parameters.
    pub fn scaled_stack(q: Vec<f64>, n: usize) -> Self {
        let m = q.len();
        let lipschitz = q.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()));
        Self::new(
            m * n,
            lipschitz,
            Box::new(move |d: &DecisionVector| {
                let mut out = Vec::with_capacity(q.len() * d.len());
                for &qi in &q {
                    out.extend(d.as_slice().iter().map(|&x| qi * x));
                }
                out
            }),
        )
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn apply(&self, d: &DecisionVector) -> Result<DecisionVector, CoreError> {
        let image = (self.map)(d);
        if image.len() != self.output_dim {
            return Err(CoreError::DimensionMismatch { expected: self.output_dim, got: image.len() });
        }
        DecisionVector::new(image)
    }
}

/// Wraps a learner over feature space so it can consume raw decisions.
pub struct FeatureMapLearner<L> {
    inner: L,
    map: FeatureMap,
}

impl<L> FeatureMapLearner<L> {
    pub fn new(inner: L, map: FeatureMap) -> Self {
        Self { inner, map }
    }

    pub fn inner(&self) -> &L {
        &self.inner
    }
}

impl<P, L: Learner<P>> Learner<P> for FeatureMapLearner<L> {
    /// The feature-space objective; the harness scores decisions as
    /// `c · f(x)`.
    fn current_objective(&self) -> ObjectiveVector {
        self.inner.current_objective()
    }

    fn observe(
        &mut self,
        params: &P,
        learner_decision: &DecisionVector,
        expert_decision: &DecisionVector,
        round: usize,
    ) -> Result<(), CoreError> {
        let learner_image = self.map.apply(learner_decision)?;
        let expert_image = self.map.apply(expert_decision)?;
        self.inner.observe(params, &learner_image, &expert_image, round)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::MwuLearner;
    use crate::types::Orientation;

    fn dv(v: &[f64]) -> DecisionVector {
        DecisionVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_map_behaves_like_inner_learner() {
        let mut plain = MwuLearner::new(2, 50, Orientation::Maximize).unwrap();
        let mut wrapped = FeatureMapLearner::new(
            MwuLearner::new(2, 50, Orientation::Maximize).unwrap(),
            FeatureMap::identity(2),
        );
        for round in 1..=10 {
            let a = dv(&[1.0, 0.0]);
            let b = dv(&[0.0, 1.0]);
            Learner::<()>::observe(&mut plain, &(), &a, &b, round).unwrap();
            Learner::<()>::observe(&mut wrapped, &(), &a, &b, round).unwrap();
        }
        assert_eq!(
            Learner::<()>::current_objective(&plain),
            Learner::<()>::current_objective(&wrapped)
        );
    }

    #[test]
    fn scaled_block_map_scales_updates() {
        // One block scaled by 2: images are 2x, so the ∞-normalized update
        // equals the identity one and the learned weights coincide.
        let map = FeatureMap::scaled_stack(alloc::vec![2.0], 2);
        assert_eq!(map.output_dim(), 2);
        let image = map.apply(&dv(&[1.0, 0.5])).unwrap();
        assert_eq!(image.as_slice(), &[2.0, 1.0]);
        assert_eq!(map.lipschitz_bound, 2.0);
    }

    #[test]
    fn feature_collision_produces_zero_update() {
        // Distinct decisions with identical images must not move the learner.
        let collapsing = FeatureMap::new(
            2,
            1.0,
            Box::new(|d: &DecisionVector| alloc::vec![d.as_slice().iter().sum(), 0.0]),
        );
        let mut wrapped =
            FeatureMapLearner::new(MwuLearner::new(2, 50, Orientation::Maximize).unwrap(), collapsing);
        let before = Learner::<()>::current_objective(&wrapped);
        Learner::<()>::observe(&mut wrapped, &(), &dv(&[1.0, 0.0]), &dv(&[0.0, 1.0]), 1).unwrap();
        assert_eq!(Learner::<()>::current_objective(&wrapped), before);
    }

    #[test]
    fn dimension_mismatch_is_hard_error() {
        let bad = FeatureMap::new(3, 1.0, Box::new(|d: &DecisionVector| d.as_slice().to_vec()));
        let mut wrapped =
            FeatureMapLearner::new(MwuLearner::new(3, 50, Orientation::Maximize).unwrap(), bad);
        let err = Learner::<()>::observe(&mut wrapped, &(), &dv(&[1.0, 0.0]), &dv(&[0.0, 1.0]), 1).unwrap_err();
        assert!(matches!(err, CoreError::DimensionMismatch { .. }));
    }
}
