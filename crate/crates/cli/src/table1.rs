//! Energy convergence study for the Maier-Stein model at `eps = 0.1`,
//! `beta = 10`, `ds = 0.01`: `E_c - E_n` against the iteration count at
//! `N = 1000`, and `E_c - E*_N` against the resolution after at most 500
//! iterations.

use std::fs;
use std::path::Path as FsPath;

use egma::model::MaierStein;
use egma::oracle::ms_critical_point;
use egma::solver::{run, SolverConfig};
use egma::Path;
use rayon::prelude::*;
use serde::Serialize;

use crate::artifacts::write_rows;
use crate::CliError;

pub const EPSILON: f64 = 0.1;
pub const BETA: f64 = 10.0;
pub const DS: f64 = 0.01;
pub const ITERATIONS: usize = 500;
/// Transverse `sin(pi alpha)` bump that breaks the symmetry of the straight
/// initial path.
pub const BUMP: f64 = 0.1;
pub const ITERATION_COUNTS: [usize; 5] = [10, 20, 30, 50, 100];
pub const RESOLUTIONS: [usize; 5] = [100, 1000, 2000, 4000, 5000];
pub const PUBLISHED_ITERATION_ROW: [f64; 5] = [2.1e-3, 3.9e-4, 1.5e-4, 8.1e-5, 6.2e-5];
pub const PUBLISHED_RESOLUTION_ROW: [f64; 5] = [6.0e-5, 2.0e-5, 3.0e-6, 1.2e-7, 5.3e-9];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Entry {
    pub row: &'static str,
    pub param: usize,
    pub gap: f64,
    pub published: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub e_c: f64,
    pub iteration_row: Vec<Entry>,
    pub resolution_row: Vec<Entry>,
    /// Least-squares slope of `ln(E_c - E*_N)` against `ln(1/N)`.
    pub order: f64,
}

pub fn initial_path(n: usize) -> Path {
    let pts: Vec<[f64; 2]> = (0..=n)
        .map(|j| {
            let a = j as f64 / n as f64;
            [-1.0 + 2.0 * a, BUMP * (std::f64::consts::PI * a).sin()]
        })
        .collect();
    Path::from_nodes(&pts).expect("valid initial path")
}

pub fn solver_config(n: usize) -> SolverConfig {
    SolverConfig { n_segments: n, ds: Some(DS), max_iters: ITERATIONS, record_every: Some(1), ..Default::default() }
}

pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn compute() -> Result<Table1, CliError> {
    let model = MaierStein::new(EPSILON, BETA);
    let (_, e_c) = ms_critical_point(EPSILON)?;
    let traces: Vec<egma::Result<egma::Trace>> = RESOLUTIONS
        .par_iter()
        .map(|&n| run(&model, &initial_path(n), &solver_config(n)))
        .collect();
    let mut resolution_row = Vec::new();
    let mut iteration_row = Vec::new();
    for ((&n, trace), &published) in RESOLUTIONS.iter().zip(traces).zip(&PUBLISHED_RESOLUTION_ROW) {
        let trace = trace?;
        resolution_row.push(Entry { row: "resolution", param: n, gap: e_c - trace.final_energy(), published });
        if n == 1000 {
            for (&k, &published) in ITERATION_COUNTS.iter().zip(&PUBLISHED_ITERATION_ROW) {
                // a run that converged early keeps its final energy
                let e = trace.energy_at(k).unwrap_or_else(|| trace.final_energy());
                iteration_row.push(Entry { row: "iteration", param: k, gap: e_c - e, published });
            }
        }
    }
    let h: Vec<f64> = RESOLUTIONS.iter().map(|&n| 1.0 / n as f64).collect();
    let gaps: Vec<f64> = resolution_row.iter().map(|e| e.gap).collect();
    Ok(Table1 { e_c, iteration_row, resolution_row, order: log_log_slope(&h, &gaps) })
}

impl Table1 {
    pub fn render(&self) -> String {
        let mut s = format!("E_c = {:.12}\n", self.e_c);
        let line = |label: &str, entries: &[Entry]| {
            let mut l = format!("{label:>10}");
            for e in entries {
                l += &format!(" {:>10}", e.param);
            }
            l += &format!("\n{:>10}", "E_c - E");
            for e in entries {
                l += &format!(" {:>10.2e}", e.gap);
            }
            l += &format!("\n{:>10}", "published");
            for e in entries {
                l += &format!(" {:>10.2e}", e.published);
            }
            l + "\n"
        };
        s += &line("n", &self.iteration_row);
        s += &line("N", &self.resolution_row);
        s += &format!("order of E_c - E*_N in h: {:.3}\n", self.order);
        s
    }

    pub fn write_csv(&self, dir: &FsPath) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let file = dir.join("table1.csv");
        let rows: Vec<Entry> = self.iteration_row.iter().chain(&self.resolution_row).copied().collect();
        write_rows(&file, &rows).map_err(|e| CliError::io(&file, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_power_law() {
        let h = [0.1, 0.01, 0.001];
        let y: Vec<f64> = h.iter().map(|v: &f64| 3.0 * v.powf(2.3)).collect();
        assert!((log_log_slope(&h, &y) - 2.3).abs() < 1e-12);
    }

    #[test]
    fn published_resolution_row_has_order_near_two() {
        let h: Vec<f64> = RESOLUTIONS.iter().map(|&n| 1.0 / n as f64).collect();
        let p = log_log_slope(&h, &PUBLISHED_RESOLUTION_ROW);
        assert!((p - 2.05).abs() < 0.01, "{p}");
    }
}
