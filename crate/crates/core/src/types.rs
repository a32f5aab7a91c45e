//! Domain types shared by every learner and oracle.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use crate::error::CoreError;
use crate::math;

/// Whether the underlying decision problem maximizes or minimizes.
///
/// The orientation is fixed per experiment. Minimization instances are handled
/// by orientation-aware formulas rather than by negating the objective, which
/// keeps coefficients nonnegative for learners confined to the simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Maximize,
    Minimize,
}

impl Orientation {
    /// +1 for maximization, −1 for minimization; the sign applied to
    /// `learner_decision − expert_decision` in learner updates.
    pub fn update_sign(self) -> f64 {
        match self {
            Orientation::Maximize => 1.0,
            Orientation::Minimize => -1.0,
        }
    }
}

/// Dense real objective vector: the learner's current guess or the hidden truth.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector {
    coeffs: Vec<f64>,
}

impl ObjectiveVector {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, CoreError> {
        if coeffs.is_empty() {
            return Err(CoreError::InvalidParameter("objective vector must be non-empty".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(CoreError::NonFinite("objective vector"));
        }
        Ok(Self { coeffs })
    }

    /// The uniform distribution over `n` coordinates.
    pub fn uniform(n: usize) -> Result<Self, CoreError> {
        if n == 0 {
            return Err(CoreError::InvalidParameter("dimension must be positive".into()));
        }
        Ok(Self { coeffs: vec![1.0 / n as f64; n] })
    }

    pub fn zeros(n: usize) -> Result<Self, CoreError> {
        if n == 0 {
            return Err(CoreError::InvalidParameter("dimension must be positive".into()));
        }
        Ok(Self { coeffs: vec![0.0; n] })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coeffs
    }

    /// Rescale to unit 1-norm. Errors when the vector is all-zero.
    pub fn normalized_l1(&self) -> Result<Self, CoreError> {
        let n1 = math::norm1(&self.coeffs);
        if n1 <= 0.0 {
            return Err(CoreError::InvalidParameter("cannot 1-normalize the zero vector".into()));
        }
        Self::new(self.coeffs.iter().map(|c| c / n1).collect())
    }

    /// Membership in the unit simplex within `tol`: entries ≥ −tol, sum within
    /// `tol` of one.
    pub fn is_simplex_member(&self, tol: f64) -> bool {
        let sum: f64 = self.coeffs.iter().sum();
        (sum - 1.0).abs() <= tol && self.coeffs.iter().all(|&c| c >= -tol)
    }

    pub fn dot_decision(&self, d: &DecisionVector) -> f64 {
        math::dot(&self.coeffs, d.as_slice())
    }
}

impl Index<usize> for ObjectiveVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coeffs[i]
    }
}

/// A solution of the round's optimization problem, as a dense vector in the
/// instance's decision space.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionVector {
    entries: Vec<f64>,
}

impl DecisionVector {
    pub fn new(entries: Vec<f64>) -> Result<Self, CoreError> {
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(CoreError::NonFinite("decision vector"));
        }
        Ok(Self { entries })
    }

    pub fn zeros(n: usize) -> Self {
        Self { entries: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.entries
    }

    /// Componentwise equality within `tol`.
    pub fn coincides_with(&self, other: &DecisionVector, tol: f64) -> bool {
        self.len() == other.len() && math::max_abs_diff(&self.entries, &other.entries) <= tol
    }
}

impl Index<usize> for DecisionVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

/// One revealed round: the instance parameters and the expert's decision.
#[derive(Debug, Clone)]
pub struct Observation<P> {
    /// 1-based round index.
    pub round: usize,
    pub params: P,
    pub expert_decision: DecisionVector,
}

/// Diameter and dimension data used by the regret bounds.
///
/// `k` bounds the diameter of the feasible decision regions (∞-norm for the
/// multiplicative-weights learner, 2-norm for gradient descent); `l` bounds
/// the 2-norm diameter of the objective set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub k: f64,
    pub l: f64,
    pub n: usize,
    pub t: usize,
}

impl Bounds {
    pub fn new(k: f64, l: f64, n: usize, t: usize) -> Result<Self, CoreError> {
        if !k.is_finite() || k < 0.0 {
            return Err(CoreError::InvalidParameter("decision diameter bound must be finite and >= 0".into()));
        }
        if !l.is_finite() || l < 0.0 {
            return Err(CoreError::InvalidParameter("objective diameter bound must be finite and >= 0".into()));
        }
        Ok(Self { k, l, n, t })
    }

    /// Multiplicative-weights average-error bound `2 K sqrt(ln n / T)`.
    pub fn mwu_bound(&self) -> f64 {
        2.0 * self.k * math::sqrt(math::ln(self.n as f64) / self.t as f64)
    }

    /// Gradient-descent average-error bound `(3/2) L K / sqrt(T)`.
    pub fn ogd_bound(&self) -> f64 {
        1.5 * self.l * self.k / math::sqrt(self.t as f64)
    }
}

/// Stability data for the mismatch-count bound on 0/1 polytope families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityParams {
    /// Minimal true-value gap between distinct optima and non-optima.
    pub delta: f64,
    /// 1-norm of the integer vector whose normalization is the true objective.
    pub denominator_norm: f64,
}

impl StabilityParams {
    pub fn new(delta: f64, denominator_norm: f64) -> Result<Self, CoreError> {
        if !(delta > 0.0) {
            return Err(CoreError::InvalidParameter("stability margin must be > 0".into()));
        }
        Ok(Self { delta, denominator_norm })
    }
}
