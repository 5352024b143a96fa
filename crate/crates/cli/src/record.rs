use egma::Status;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const PATH_CSV: &str = "path.csv";
pub const ENERGY_CSV: &str = "energy.csv";
pub const RECORD_JSON: &str = "run.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifacts {
    pub path_csv: String,
    pub energy_csv: String,
}

/// Summary of one solver run, written next to its artifacts as `run.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: RunConfig,
    pub status: Status,
    pub iterations: usize,
    pub final_energy: f64,
    pub final_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence: Option<String>,
    pub artifacts: Artifacts,
    pub wall_seconds: f64,
    pub version: String,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run records always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<RunRecord> {
        serde_json::from_str(text)
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.status)
    }
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Converged => 0,
        Status::MaxIters => 2,
        Status::Diverged => 3,
    }
}
