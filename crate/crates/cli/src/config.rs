//! JSON experiment configuration. Unknown keys are rejected outright —
//! silent typos corrupt experiments.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "knapsack-lp")]
    KnapsackLp,
    #[serde(rename = "knapsack-ip")]
    KnapsackIp,
    #[serde(rename = "shortest-path")]
    ShortestPath,
    #[serde(rename = "pctsp")]
    Pctsp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LearnerKind {
    #[serde(rename = "mwu")]
    Mwu,
    #[serde(rename = "ogd-fixed")]
    OgdFixed,
    #[serde(rename = "ogd-dynamic")]
    OgdDynamic,
    #[serde(rename = "lp-ftl")]
    LpFtl,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnapsackSection {
    pub items: usize,
    pub rounds: usize,
    #[serde(default)]
    pub suboptimality_eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScheduleKindConfig {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "gradual")]
    Gradual,
    #[serde(rename = "abrupt")]
    Abrupt,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShortestPathSection {
    #[serde(default)]
    pub grid_rows: Option<usize>,
    #[serde(default)]
    pub grid_cols: Option<usize>,
    #[serde(default)]
    pub tntp_path: Option<String>,
    #[serde(default)]
    pub zone_id_threshold: Option<usize>,
    pub rounds: usize,
    pub schedule: ScheduleKindConfig,
    #[serde(default = "default_bottleneck_fraction")]
    pub bottleneck_fraction: f64,
    #[serde(default = "default_abrupt_factor")]
    pub abrupt_factor: f64,
}

fn default_bottleneck_fraction() -> f64 {
    0.05
}

fn default_abrupt_factor() -> f64 {
    1000.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PctspSection {
    pub customers: usize,
    pub rounds: usize,
    #[serde(default = "default_revenue_scale")]
    pub revenue_scale: f64,
    #[serde(default = "default_cost_jitter")]
    pub cost_jitter: f64,
    #[serde(default = "default_revenue_jitter")]
    pub revenue_jitter: f64,
}

fn default_revenue_scale() -> f64 {
    4.0
}

fn default_cost_jitter() -> f64 {
    0.10
}

fn default_revenue_jitter() -> f64 {
    0.20
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    pub learner: LearnerKind,
    pub seed: u64,
    pub output_dir: String,
    pub checkpoints: Vec<usize>,
    pub replications: usize,
    #[serde(default)]
    pub emit_svg: bool,
    #[serde(default)]
    pub knapsack: Option<KnapsackSection>,
    #[serde(default)]
    pub shortest_path: Option<ShortestPathSection>,
    #[serde(default)]
    pub pctsp: Option<PctspSection>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path.display().to_string(), e))?;
        let cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn rounds(&self) -> usize {
        match self.problem {
            ProblemKind::KnapsackLp | ProblemKind::KnapsackIp => {
                self.knapsack.as_ref().map(|k| k.rounds).unwrap_or(0)
            }
            ProblemKind::ShortestPath => self.shortest_path.as_ref().map(|s| s.rounds).unwrap_or(0),
            ProblemKind::Pctsp => self.pctsp.as_ref().map(|p| p.rounds).unwrap_or(0),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        match self.problem {
            ProblemKind::KnapsackLp | ProblemKind::KnapsackIp => {
                let Some(section) = &self.knapsack else {
                    return fail("knapsack problems need a `knapsack` section".into());
                };
                if section.items < 2 {
                    return fail("knapsack needs at least 2 items".into());
                }
                if section.rounds < 1 {
                    return fail("rounds must be at least 1".into());
                }
                if !(0.0..1.0).contains(&section.suboptimality_eps) {
                    return fail("suboptimality_eps must lie in [0, 1)".into());
                }
                if self.shortest_path.is_some() || self.pctsp.is_some() {
                    return fail("only the generator section matching `problem` may be present".into());
                }
            }
            ProblemKind::ShortestPath => {
                let Some(section) = &self.shortest_path else {
                    return fail("shortest-path problems need a `shortest_path` section".into());
                };
                match (&section.tntp_path, section.grid_rows, section.grid_cols) {
                    (Some(_), None, None) => {}
                    (None, Some(r), Some(c)) => {
                        if r < 2 || c < 2 {
                            return fail("synthetic grids must be at least 2x2".into());
                        }
                    }
                    _ => return fail("specify either tntp_path or grid_rows+grid_cols".into()),
                }
                if !(section.bottleneck_fraction > 0.0 && section.bottleneck_fraction <= 1.0) {
                    return fail("bottleneck_fraction must lie in (0, 1]".into());
                }
                if self.knapsack.is_some() || self.pctsp.is_some() {
                    return fail("only the generator section matching `problem` may be present".into());
                }
            }
            ProblemKind::Pctsp => {
                let Some(section) = &self.pctsp else {
                    return fail("pctsp problems need a `pctsp` section".into());
                };
                if section.customers + 1 > 16 {
                    return fail("the exact tour oracle is capped at 16 nodes including the depot".into());
                }
                if section.customers < 1 {
                    return fail("pctsp needs at least one customer".into());
                }
                if !(0.0..1.0).contains(&section.cost_jitter) || !(0.0..1.0).contains(&section.revenue_jitter) {
                    return fail("jitters must lie in [0, 1)".into());
                }
                if self.knapsack.is_some() || self.shortest_path.is_some() {
                    return fail("only the generator section matching `problem` may be present".into());
                }
            }
        }
        if self.replications < 1 {
            return fail("replications must be at least 1".into());
        }
        let rounds = self.rounds();
        if self.checkpoints.is_empty() {
            return fail("at least one checkpoint is required".into());
        }
        if self.checkpoints.iter().any(|&c| c < 1 || c > rounds) {
            return fail(format!("checkpoints must lie in 1..={rounds}"));
        }
        match self.learner {
            LearnerKind::LpFtl => {
                if self.problem != ProblemKind::KnapsackLp {
                    return fail("lp-ftl requires a polyhedral continuous problem (knapsack-lp)".into());
                }
            }
            LearnerKind::Mwu => {
                if self.problem == ProblemKind::Pctsp {
                    return fail("mwu requires a nonnegative true objective; pctsp has mixed signs".into());
                }
            }
            LearnerKind::OgdFixed | LearnerKind::OgdDynamic => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_json() -> serde_json::Value {
        serde_json::json!({
            "problem": "knapsack-lp",
            "learner": "mwu",
            "seed": 7,
            "output_dir": "out",
            "checkpoints": [5, 50],
            "replications": 2,
            "knapsack": {"items": 10, "rounds": 50}
        })
    }

    #[test]
    fn valid_config_passes() {
        let cfg: ExperimentConfig = serde_json::from_value(base_json()).unwrap();
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut v = base_json();
        v["surprise"] = serde_json::json!(1);
        assert!(serde_json::from_value::<ExperimentConfig>(v).is_err());
    }

    #[test]
    fn ftl_requires_continuous_knapsack() {
        let mut v = base_json();
        v["learner"] = serde_json::json!("lp-ftl");
        v["problem"] = serde_json::json!("knapsack-ip");
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn mwu_is_rejected_on_pctsp() {
        let v = serde_json::json!({
            "problem": "pctsp",
            "learner": "mwu",
            "seed": 7,
            "output_dir": "out",
            "checkpoints": [5],
            "replications": 1,
            "pctsp": {"customers": 5, "rounds": 10}
        });
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn checkpoints_beyond_horizon_fail() {
        let mut v = base_json();
        v["checkpoints"] = serde_json::json!([5, 51]);
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());
    }
}
