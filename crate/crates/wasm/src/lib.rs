//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes and returns JSON text so the page needs no glue
//! beyond `JSON.parse`.

use egma::action::{lambda_profile, path_potential_values};
use egma::oracle::ms_critical_point;
use egma::solver::{run, SolverConfig};
use egma::{AnyModel, Model, Path};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

#[derive(Debug, Deserialize)]
pub struct SolveRequest {
    pub model: AnyModel,
    pub start: [f64; 2],
    pub end: [f64; 2],
    /// Amplitude of the `sin(pi alpha)` bump added to `y`.
    #[serde(default)]
    pub bump: f64,
    pub solver: SolverConfig,
}

#[derive(Debug, Serialize)]
pub struct SolveResponse {
    pub status: egma::Status,
    pub iterations: usize,
    pub energy: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
    pub critical: Vec<usize>,
    pub energies: Vec<f64>,
}

#[derive(Debug, Deserialize)]
pub struct GridRequest {
    pub model: AnyModel,
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Serialize)]
pub struct GridResponse {
    /// Row-major, `ny` rows of `nx` values; `null` where `U` is undefined.
    pub u: Vec<Option<f64>>,
    pub min: f64,
    pub max: f64,
}

fn planar(model: &AnyModel) -> Result<(), String> {
    if model.dim() == 2 {
        Ok(())
    } else {
        Err(format!("model `{}` is not planar", model.name()))
    }
}

pub fn solve_request(req: &SolveRequest) -> Result<SolveResponse, String> {
    planar(&req.model)?;
    req.model.validate().map_err(|e| e.to_string())?;
    let n = req.solver.n_segments;
    let nodes: Vec<[f64; 2]> = (0..=n)
        .map(|j| {
            let a = j as f64 / n as f64;
            let bump = req.bump * (std::f64::consts::PI * a).sin();
            [req.start[0] + a * (req.end[0] - req.start[0]), req.start[1] + a * (req.end[1] - req.start[1]) + bump]
        })
        .collect();
    let initial = Path::from_nodes(&nodes).map_err(|e| e.to_string())?;
    let trace = run(&req.model, &initial, &req.solver).map_err(|e| e.to_string())?;
    let path = &trace.final_path;
    let u = path_potential_values(&req.model, path).unwrap_or_else(|_| vec![f64::NAN; n + 1]);
    let energy = trace.final_energy();
    let lam = lambda_profile(&req.model, path, energy).map_err(|e| e.to_string())?;
    Ok(SolveResponse {
        status: trace.status,
        iterations: trace.iterations_run,
        energy,
        x: path.nodes().map(|p| p[0]).collect(),
        y: path.nodes().map(|p| p[1]).collect(),
        u,
        lambda: lam.values,
        critical: lam.critical_indices,
        energies: trace.energies(),
    })
}

pub fn grid_request(req: &GridRequest) -> Result<GridResponse, String> {
    planar(&req.model)?;
    if req.nx < 2 || req.ny < 2 || req.nx * req.ny > 1 << 20 {
        return Err("grid must be at least 2x2 and at most 2^20 cells".into());
    }
    let mut u = Vec::with_capacity(req.nx * req.ny);
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for r in 0..req.ny {
        let y = req.y[0] + (req.y[1] - req.y[0]) * r as f64 / (req.ny - 1) as f64;
        for c in 0..req.nx {
            let x = req.x[0] + (req.x[1] - req.x[0]) * c as f64 / (req.nx - 1) as f64;
            let v = req.model.path_potential(&[x, y]).ok().filter(|v| v.is_finite());
            if let Some(v) = v {
                min = min.min(v);
                max = max.max(v);
            }
            u.push(v);
        }
    }
    Ok(GridResponse { u, min, max })
}

fn respond<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.map(|v| serde_json::to_string(&v).expect("responses serialize")).map_err(|e| JsError::new(&e))
}

fn parse<'a, T: Deserialize<'a>>(json: &'a str) -> Result<T, String> {
    serde_json::from_str(json).map_err(|e| e.to_string())
}

/// Relaxes a bumped straight path between two points; see [`SolveRequest`].
#[wasm_bindgen]
pub fn solve(request: &str) -> Result<String, JsError> {
    respond(parse(request).and_then(|r| solve_request(&r)))
}

/// Samples `U` on a regular grid for the background heat map.
#[wasm_bindgen]
pub fn potential_grid(request: &str) -> Result<String, JsError> {
    respond(parse(request).and_then(|r| grid_request(&r)))
}

/// `{"x_c": |x_c|, "E_c": E_c}` for the Maier-Stein model.
#[wasm_bindgen]
pub fn critical_point(epsilon: f64) -> Result<String, JsError> {
    respond(
        ms_critical_point(epsilon)
            .map(|(x_c, e_c)| serde_json::json!({ "x_c": x_c, "E_c": e_c }))
            .map_err(|e| e.to_string()),
    )
}
