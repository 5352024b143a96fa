use std::fs;
use std::path::Path as FsPath;

use egma::AnyModel;
use rayon::prelude::*;
use serde::Serialize;

use crate::artifacts::write_rows;
use crate::config::RunConfig;
use crate::record::RunRecord;
use crate::run::solve;
use crate::{CliError, ConfigError};

pub const PARAMS: [&str; 4] = ["beta", "epsilon", "n_segments", "ds"];

/// One line of the sweep summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: String,
    pub status: String,
    pub final_energy: Option<f64>,
    pub iterations: Option<usize>,
}

pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub records: Vec<Result<RunRecord, String>>,
}

/// Copy of `base` with `param` set to `value`, writing into its own
/// subdirectory of the base output directory.
pub fn with_param(base: &RunConfig, param: &str, value: &str) -> Result<RunConfig, ConfigError> {
    let mut c = base.clone();
    let bad = |e: String| ConfigError::field(&format!("--values ({param})"), e);
    let real = || value.parse::<f64>().map_err(|e| bad(format!("`{value}`: {e}")));
    match param {
        "beta" => match &mut c.model {
            AnyModel::MaierStein(m) => m.beta = real()?,
            other => return Err(bad(format!("model `{}` has no beta", other.name()))),
        },
        "epsilon" => c.model.set_epsilon(real()?),
        "n_segments" => {
            c.solver.n_segments = value.parse().map_err(|e| bad(format!("`{value}`: {e}")))?
        }
        "ds" => c.solver.ds = Some(real()?),
        other => {
            return Err(ConfigError::field("--param", format!("`{other}` is not one of {}", PARAMS.join(", "))))
        }
    }
    c.output.dir = base.output.dir.join(format!("{param}-{value}"));
    Ok(c)
}

/// Runs every value independently in a worker pool. A failing run is
/// reported in its row and does not stop the others. The summary goes to
/// `<output.dir>/sweep-<param>.csv`.
pub fn sweep(base: &RunConfig, base_dir: &FsPath, param: &str, values: &[String]) -> Result<SweepOutcome, CliError> {
    let configs: Vec<RunConfig> =
        values.iter().map(|v| with_param(base, param, v)).collect::<Result<_, _>>()?;
    for c in &configs {
        c.prepare(base_dir)?;
    }
    let records: Vec<Result<RunRecord, String>> =
        configs.par_iter().map(|c| solve(c, base_dir).map_err(|e| e.to_string())).collect();
    let rows: Vec<SweepRow> = values
        .iter()
        .zip(&records)
        .map(|(v, r)| match r {
            Ok(rec) => SweepRow {
                value: v.clone(),
                status: status_name(rec),
                final_energy: Some(rec.final_energy),
                iterations: Some(rec.iterations),
            },
            Err(e) => SweepRow { value: v.clone(), status: format!("error: {e}"), final_energy: None, iterations: None },
        })
        .collect();
    let dir = &base.output.dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let file = dir.join(format!("sweep-{param}.csv"));
    if rows.is_empty() {
        fs::write(&file, "value,status,final_energy,iterations\n").map_err(|e| CliError::io(&file, e))?;
    } else {
        write_rows(&file, &rows).map_err(|e| CliError::io(&file, e.into()))?;
    }
    Ok(SweepOutcome { rows, records })
}

fn status_name(r: &RunRecord) -> String {
    serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}
