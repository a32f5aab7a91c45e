//! Euclidean projections onto the feasible objective sets used by the
//! gradient-descent learner.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::math;

/// A convex, compact, non-empty set of admissible objective vectors with a
/// closed-form Euclidean projection and 2-norm diameter.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleObjectiveSet {
    /// Probability simplex in `n` dimensions.
    UnitSimplex(usize),
    /// Axis-aligned box `lo <= c <= hi`.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Euclidean ball around `center` with the given radius.
    L2Ball { center: Vec<f64>, radius: f64 },
}

impl FeasibleObjectiveSet {
    pub fn dimension(&self) -> usize {
        match self {
            FeasibleObjectiveSet::UnitSimplex(n) => *n,
            FeasibleObjectiveSet::Box { lo, .. } => lo.len(),
            FeasibleObjectiveSet::L2Ball { center, .. } => center.len(),
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        match self {
            FeasibleObjectiveSet::UnitSimplex(n) => {
                if *n == 0 {
                    return Err(CoreError::InvalidParameter("simplex dimension must be positive".into()));
                }
            }
            FeasibleObjectiveSet::Box { lo, hi } => {
                if lo.len() != hi.len() {
                    return Err(CoreError::DimensionMismatch { expected: lo.len(), got: hi.len() });
                }
                if lo.is_empty() {
                    return Err(CoreError::InvalidParameter("box must have positive dimension".into()));
                }
                if lo.iter().chain(hi.iter()).any(|x| !x.is_finite()) {
                    return Err(CoreError::NonFinite("box bounds"));
                }
                if lo.iter().zip(hi).any(|(l, h)| l > h) {
                    return Err(CoreError::InvalidParameter("box lower bound exceeds upper bound".into()));
                }
            }
            FeasibleObjectiveSet::L2Ball { center, radius } => {
                if center.is_empty() {
                    return Err(CoreError::InvalidParameter("ball must have positive dimension".into()));
                }
                if center.iter().any(|x| !x.is_finite()) || !radius.is_finite() {
                    return Err(CoreError::NonFinite("ball data"));
                }
                if *radius < 0.0 {
                    return Err(CoreError::InvalidParameter("ball radius must be >= 0".into()));
                }
            }
        }
        Ok(())
    }

    /// Membership within an absolute tolerance.
    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        if v.len() != self.dimension() {
            return false;
        }
        match self {
            FeasibleObjectiveSet::UnitSimplex(_) => {
                let sum: f64 = v.iter().sum();
                (sum - 1.0).abs() <= tol && v.iter().all(|&x| x >= -tol)
            }
            FeasibleObjectiveSet::Box { lo, hi } => v
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(&x, (&l, &h))| x >= l - tol && x <= h + tol),
            FeasibleObjectiveSet::L2Ball { center, radius } => {
                let d: Vec<f64> = v.iter().zip(center).map(|(x, c)| x - c).collect();
                math::norm2(&d) <= radius + tol
            }
        }
    }
}

/// Euclidean projection of `v` onto `set`.
///
/// The simplex case uses the sort-and-threshold rule: the output satisfies
/// `p_i = max(v_i − lambda, 0)` with `lambda` chosen so the entries sum to one.
/// Boxes clamp componentwise; balls rescale toward the center (a point equal
/// to the center maps to itself).
pub fn project(v: &[f64], set: &FeasibleObjectiveSet) -> Result<Vec<f64>, CoreError> {
    set.validate()?;
    if v.len() != set.dimension() {
        return Err(CoreError::DimensionMismatch { expected: set.dimension(), got: v.len() });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CoreError::NonFinite("projection input"));
    }
    match set {
        FeasibleObjectiveSet::UnitSimplex(_) => Ok(project_simplex(v)),
        FeasibleObjectiveSet::Box { lo, hi } => Ok(v
            .iter()
            .zip(lo.iter().zip(hi))
            .map(|(&x, (&l, &h))| x.clamp(l, h))
            .collect()),
        FeasibleObjectiveSet::L2Ball { center, radius } => {
            let diff: Vec<f64> = v.iter().zip(center).map(|(x, c)| x - c).collect();
            let dist = math::norm2(&diff);
            if dist <= *radius || dist == 0.0 {
                Ok(v.to_vec())
            } else {
                let scale = radius / dist;
                Ok(center.iter().zip(&diff).map(|(c, d)| c + scale * d).collect())
            }
        }
    }
}

/// 2-norm diameter of the set.
pub fn diameter_l2(set: &FeasibleObjectiveSet) -> f64 {
    match set {
        FeasibleObjectiveSet::UnitSimplex(_) => math::sqrt(2.0),
        FeasibleObjectiveSet::Box { lo, hi } => {
            let d: Vec<f64> = hi.iter().zip(lo).map(|(h, l)| h - l).collect();
            math::norm2(&d)
        }
        FeasibleObjectiveSet::L2Ball { radius, .. } => 2.0 * radius,
    }
}

/// Sort-and-threshold simplex projection, exact in O(n log n).
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted: Vec<f64> = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
    let mut prefix = 0.0;
    let mut lambda = 0.0;
    let mut active = 0usize;
    for (j, &u) in sorted.iter().enumerate() {
        prefix += u;
        let candidate = (prefix - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            lambda = candidate;
            active = j + 1;
        }
    }
    debug_assert!(active > 0);
    v.iter().map(|&x| (x - lambda).max(0.0)).collect()
}
