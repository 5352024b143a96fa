use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use egma::solver::run_with;

use crate::artifacts::{write_path_csv, EnergyWriter};
use crate::config::{Prepared, RunConfig};
use crate::record::{Artifacts, RunRecord, ENERGY_CSV, PATH_CSV, RECORD_JSON};
use crate::CliError;

/// Validates `config`, runs the solver and writes the path CSV, energy CSV
/// and run record into `config.output.dir`. Config errors leave the file
/// system untouched.
pub fn solve(config: &RunConfig, base_dir: &FsPath) -> Result<RunRecord, CliError> {
    let prepared = config.prepare(base_dir)?;
    solve_prepared(&prepared)
}

pub fn solve_file(file: &FsPath) -> Result<RunRecord, CliError> {
    let (config, base) = RunConfig::load(file)?;
    solve(&config, &base)
}

pub fn solve_prepared(p: &Prepared) -> Result<RunRecord, CliError> {
    let dir = p.config.output.dir.clone();
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let path_file = dir.join(PATH_CSV);
    let energy_file = dir.join(ENERGY_CSV);
    let mut energy = EnergyWriter::create(&energy_file).map_err(|e| CliError::io(&energy_file, e))?;
    let every = p.config.output.path_every;
    let mut io_error: Option<(PathBuf, std::io::Error)> = None;
    let clock = Instant::now();

    let trace = run_with(&p.model, &p.initial, &p.config.solver, |snap| {
        if io_error.is_some() {
            return;
        }
        if let Err(e) = energy.push(&snap.record) {
            io_error = Some((energy_file.clone(), e));
            return;
        }
        if snap.record.iter % every == 0 {
            let r = energy.flush().map_err(|e| (energy_file.clone(), e)).and_then(|_| {
                write_path_csv(&path_file, &p.model, snap.path).map_err(|e| (path_file.clone(), e))
            });
            if let Err(e) = r {
                io_error = Some(e);
            }
        }
    })?;
    if let Some((file, e)) = io_error {
        return Err(CliError::io(&file, e));
    }
    energy.flush().map_err(|e| CliError::io(&energy_file, e))?;
    write_path_csv(&path_file, &p.model, &trace.final_path).map_err(|e| CliError::io(&path_file, e))?;

    let record = RunRecord {
        config: p.config.clone(),
        status: trace.status,
        iterations: trace.iterations_run,
        final_energy: trace.final_energy(),
        final_residual: trace.final_residual(),
        divergence: trace.divergence.clone(),
        artifacts: Artifacts { path_csv: PATH_CSV.into(), energy_csv: ENERGY_CSV.into() },
        wall_seconds: clock.elapsed().as_secs_f64(),
        version: egma::VERSION.to_string(),
    };
    let json_file = dir.join(RECORD_JSON);
    fs::write(&json_file, record.to_json()).map_err(|e| CliError::io(&json_file, e))?;
    Ok(record)
}
