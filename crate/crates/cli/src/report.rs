//! Metrics JSON emitted by the subcommands.

use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

pub const METRICS_SCHEMA: &str = "dpbf-metrics/1";

/// Summary of a run: quality metrics plus the effective configuration, so
/// the file alone reproduces the run.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub schema: &'static str,
    pub weighting_loss_db: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured_hpbw_deg: Option<f64>,
    pub max_parallelity: f64,
    pub max_power_mismatch: f64,
    pub seed: u64,
    pub config: RunConfig,
}

impl MetricsReport {
    /// All numeric fields must be finite before the report is written.
    pub fn ensure_finite(&self) -> Result<(), CliError> {
        let required = [
            ("weighting_loss_db", self.weighting_loss_db),
            ("max_parallelity", self.max_parallelity),
            ("max_power_mismatch", self.max_power_mismatch),
        ];
        let optional = [
            ("cost1", self.cost1),
            ("cost2", self.cost2),
            ("measured_hpbw_deg", self.measured_hpbw_deg),
        ];
        for (name, v) in required {
            if !v.is_finite() {
                return Err(CliError::Invariant(format!("metric {name} is not finite: {v}")));
            }
        }
        for (name, v) in optional {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(CliError::Invariant(format!("metric {name} is not finite: {v}")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        self.ensure_finite()?;
        serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Invariant(format!("cannot serialize metrics: {e}")))
    }
}
