//! Error type shared by all core modules.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Vector lengths disagree.
    DimensionMismatch { expected: usize, got: usize },
    /// A value that must be finite is NaN or infinite.
    NonFinite(&'static str),
    /// A precondition on an argument failed; the message names it.
    InvalidParameter(String),
    /// An error measure came out below the diagnostic threshold, which points
    /// at a non-optimal oracle answer upstream.
    OracleSuboptimality { round: usize, value: f64 },
    /// The oracle could not produce a decision for the given round.
    OracleInfeasible { round: usize, detail: String },
    /// Search-based oracle exceeded its node budget.
    OracleBudgetExceeded { nodes: usize },
    /// Target not reachable from the source in a shortest-path instance.
    UnreachableTarget { source: usize, target: usize },
    /// Decision enumeration would exceed the brute-force cap.
    EnumerationOverflow { size_log2: u32 },
    /// Numerically singular simplex pivot; carries tableau diagnostics.
    LpSingularPivot { row: usize, col: usize, value: f64 },
    /// Simplex iteration guard tripped.
    LpIterationLimit { iterations: usize },
    /// The LP is unbounded where boundedness was required.
    LpUnbounded(String),
    /// The LP is infeasible where feasibility was required.
    LpInfeasible(String),
    /// Follow-the-leader was asked to build a master problem over no history.
    EmptyHistory,
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            CoreError::NonFinite(what) => write!(f, "non-finite value in {what}"),
            CoreError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            CoreError::OracleSuboptimality { round, value } => {
                write!(f, "oracle suboptimality at round {round}: error measure {value:e} below -1e-6")
            }
            CoreError::OracleInfeasible { round, detail } => {
                write!(f, "oracle infeasible at round {round}: {detail}")
            }
            CoreError::OracleBudgetExceeded { nodes } => {
                write!(f, "oracle budget exceeded after {nodes} nodes")
            }
            CoreError::UnreachableTarget { source, target } => {
                write!(f, "no path from node {source} to node {target}")
            }
            CoreError::EnumerationOverflow { size_log2 } => {
                write!(f, "decision enumeration exceeds 2^{size_log2}")
            }
            CoreError::LpSingularPivot { row, col, value } => {
                write!(f, "numerically singular pivot at tableau ({row}, {col}): {value:e}")
            }
            CoreError::LpIterationLimit { iterations } => {
                write!(f, "simplex did not terminate within {iterations} pivots")
            }
            CoreError::LpUnbounded(what) => write!(f, "LP unbounded: {what}"),
            CoreError::LpInfeasible(what) => write!(f, "LP infeasible: {what}"),
            CoreError::EmptyHistory => write!(f, "empty observation history"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoreError {}
