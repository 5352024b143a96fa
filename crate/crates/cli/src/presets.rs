//! Named endpoint presets and the seven-atom cluster data files.
//!
//! `lj7-default` joins two copies of the hexagonal minimum that differ by
//! which atom sits in the centre: atom 0 in the start state, atom 1 in the
//! end state. The start state is the steepest-descent minimum of `V` from
//! the ideal hexagon; descent commutes with relabelling, so the end state
//! is the same minimum with atoms 0 and 1 swapped. Both are stored in
//! `data/` with the centre of mass at the origin.

use egma::model::LjCluster;
use egma::Model;
use serde::{Deserialize, Serialize};

use crate::ConfigError;

pub const LJ7_DEFAULT: &str = "lj7-default";

const LJ7_DATA: &str = include_str!("../../../data/lj7-default.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointPair {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
}

pub fn names() -> &'static [&'static str] {
    &[LJ7_DEFAULT]
}

pub fn endpoints(name: &str) -> Result<(Vec<f64>, Vec<f64>), ConfigError> {
    match name {
        LJ7_DEFAULT => {
            let pair: EndpointPair = toml::from_str(LJ7_DATA).expect("bundled preset parses");
            Ok((pair.start, pair.end))
        }
        other => Err(ConfigError::field(
            "endpoints.preset",
            format!("unknown preset `{other}` (known: {})", names().join(", ")),
        )),
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn free_gradient(model: &LjCluster, x: &[f64], frozen: &[usize]) -> Option<Vec<f64>> {
    let mut g = model.grad_potential(x).ok()?;
    for &k in frozen {
        g[k] = 0.0;
    }
    Some(g)
}

/// Steepest descent of `V` with a backtracking step; coordinates listed in
/// `frozen` are held fixed. Once `V` stops resolving the decrease, a step
/// is accepted when it lowers `|grad V|` instead.
pub fn descend(model: &LjCluster, mut x: Vec<f64>, frozen: &[usize], tol: f64) -> Vec<f64> {
    let mut v = model.potential(&x).expect("descent starts from a valid configuration");
    let mut g = free_gradient(model, &x, frozen).expect("descent starts from a valid configuration");
    let mut step = 1e-3;
    for _ in 0..200_000 {
        let gn = norm(&g);
        if gn < tol {
            break;
        }
        loop {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - step * b).collect();
            if let (Ok(vt), Some(gt)) = (model.potential(&trial), free_gradient(model, &trial, frozen)) {
                let flat = vt - v <= 8.0 * f64::EPSILON * v.abs();
                if vt < v || (flat && norm(&gt) < gn) {
                    x = trial;
                    v = vt;
                    g = gt;
                    step *= 1.2;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-18 {
                return x;
            }
        }
    }
    x
}

fn centre(mut x: Vec<f64>) -> Vec<f64> {
    let n = x.len() / 2;
    for k in 0..2 {
        let mean = (0..n).map(|i| x[2 * i + k]).sum::<f64>() / n as f64;
        (0..n).for_each(|i| x[2 * i + k] -= mean);
    }
    x
}

fn swap_atoms(x: &mut [f64], a: usize, b: usize) {
    x.swap(2 * a, 2 * b);
    x.swap(2 * a + 1, 2 * b + 1);
}

/// Recomputes the `lj7-default` endpoints.
pub fn lj7_minima() -> EndpointPair {
    let model = LjCluster::new(0.0, 7);
    let start = centre(descend(&model, model.hexagon(), &[], 1e-12));
    let mut end = start.clone();
    swap_atoms(&mut end, 0, 1);
    EndpointPair { start, end }
}

/// Rotates atoms `0` and `1` by `theta` about their midpoint.
fn rotate_pair(x: &[f64], theta: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    let (cx, cy) = (0.5 * (x[0] + x[2]), 0.5 * (x[1] + x[3]));
    let (s, c) = theta.sin_cos();
    for k in 0..2 {
        let (dx, dy) = (x[2 * k] - cx, x[2 * k + 1] - cy);
        y[2 * k] = cx + c * dx - s * dy;
        y[2 * k + 1] = cy + s * dx + c * dy;
    }
    y
}

/// Interior waypoints for the central-atom exchange: atoms 0 and 1 turn
/// through `pi` about their midpoint in `count + 1` equal steps while the
/// ring relaxes around them. Atom 4, opposite the pair, stays pinned so
/// the cluster cannot simply rotate.
pub fn lj7_waypoints(count: usize) -> Vec<Vec<f64>> {
    let model = LjCluster::new(0.0, 7);
    let start = lj7_minima().start;
    let frozen = [0, 1, 2, 3, 8, 9];
    let mut current = start.clone();
    let mut out = Vec::with_capacity(count);
    for i in 1..=count {
        let theta = std::f64::consts::PI * i as f64 / (count + 1) as f64;
        let mut guess = rotate_pair(&start, theta);
        guess[4..8].copy_from_slice(&current[4..8]);
        guess[10..].copy_from_slice(&current[10..]);
        current = descend(&model, guess, &frozen, 1e-10);
        out.push(current.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_minima_match_a_fresh_descent() {
        let fresh = lj7_minima();
        let (start, end) = endpoints(LJ7_DEFAULT).unwrap();
        for (a, b) in start.iter().zip(&fresh.start).chain(end.iter().zip(&fresh.end)) {
            assert!((a - b).abs() < 1e-9, "{a} {b}");
        }
    }

    #[test]
    fn minima_are_stationary_and_centred() {
        let m = LjCluster::new(0.0, 7);
        let (start, end) = endpoints(LJ7_DEFAULT).unwrap();
        for x in [&start, &end] {
            let g = norm(&m.grad_potential(x).unwrap());
            assert!(g < 1e-10, "{g}");
            let cx: f64 = x.iter().step_by(2).sum();
            let cy: f64 = x.iter().skip(1).step_by(2).sum();
            assert!(cx.abs() < 1e-12 && cy.abs() < 1e-12);
        }
        let vs = m.potential(&start).unwrap();
        assert!((vs - m.potential(&end).unwrap()).abs() < 1e-10);
        // the centre atom changes
        assert!(start[0].hypot(start[1]) < 1e-9 && end[2].hypot(end[3]) < 1e-9);
    }

    #[test]
    fn bundled_waypoints_match_a_regeneration() {
        let file = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/lj7-waypoints.csv");
        let bundled = crate::config::read_waypoints(&file, 14).unwrap();
        let fresh = lj7_waypoints(bundled.len());
        for (a, b) in bundled.iter().flatten().zip(fresh.iter().flatten()) {
            assert!((a - b).abs() < 1e-9, "{a} {b}");
        }
        let m = LjCluster::new(0.0, 7);
        assert!(bundled.iter().all(|x| m.potential(x).unwrap() < -9.0));
    }

    #[test]
    fn unknown_preset_is_a_config_error() {
        assert!(endpoints("lj8").is_err());
    }
}
