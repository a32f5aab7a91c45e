//! Instance-stream generators for the three experiment families, the
//! replication runner, and summary statistics.

pub mod knapsack;
pub mod pctsp;
pub mod replicate;
pub mod shortest_path;

pub use knapsack::{apply_suboptimality, gen_knapsack_stream, KnapsackGenConfig, KnapsackStream};
pub use pctsp::{gen_pctsp_stream, PctspGenConfig, PctspStream};
pub use replicate::{
    convergence_slope, run_replicated, slope_of_avg_series, summarize, ExperimentOutput, SummaryTable,
};
pub use shortest_path::{
    congestion_factor, gen_sp_stream, synthetic_grid, CongestionSchedule, RoadNetwork, ScheduleKind,
    SpStream,
};
