//! Action functionals evaluated on discrete paths.
//!
//! All integrals over `alpha in [0, 1]` use the composite trapezoid rule on
//! the node grid, with `phi'` taken from [`Path::velocity`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Model, ModelKind};
use crate::path::Path;

/// Slack allowed between `U` and `E` before a node counts as infeasible.
pub fn energy_tolerance(energy: f64) -> f64 {
    1e-12 * (1.0 + energy.abs())
}

/// `U` at every node.
pub fn path_potential_values<M: Model + ?Sized>(model: &M, path: &Path) -> Result<Vec<f64>> {
    path.nodes().map(|x| model.path_potential(x)).collect()
}

/// Largest value and its first index.
pub fn node_max(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) })
}

fn trapezoid(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len() - 1;
    let h = 1.0 / n as f64;
    values
        .enumerate()
        .map(|(j, v)| if j == 0 || j == n { 0.5 * h * v } else { h * v })
        .sum()
}

/// Kinetic term `2E - 2U`, clamped to zero inside the tolerance band.
/// `None` marks an infeasible node.
fn kinetic(energy: f64, u: f64) -> Option<f64> {
    let k2 = 2.0 * energy - 2.0 * u;
    if k2 >= 0.0 {
        Some(k2)
    } else if -k2 <= 2.0 * energy_tolerance(energy) {
        Some(0.0)
    } else {
        None
    }
}

fn geometric_integral<M: Model + ?Sized>(
    model: &M,
    path: &Path,
    energy: f64,
    potential: &[f64],
    with_drift: bool,
) -> Result<f64> {
    let mut root = Vec::with_capacity(potential.len());
    for &u in potential {
        match kinetic(energy, u) {
            Some(k2) => root.push(k2.sqrt()),
            None => return Ok(f64::INFINITY),
        }
    }
    let speed = path.speed();
    let velocity = path.velocity();
    let d = path.dim();
    let mut integrand = Vec::with_capacity(root.len());
    for (j, x) in path.nodes().enumerate() {
        let mut v = root[j] * speed[j];
        if with_drift {
            let b = model.drift(x)?;
            v -= b.iter().zip(&velocity[j * d..(j + 1) * d]).map(|(p, q)| p * q).sum::<f64>();
        }
        integrand.push(v);
    }
    Ok(trapezoid(integrand.into_iter()))
}

/// Geometric action at energy `E`:
/// `int sqrt(2E - 2U)|phi'|` for gradient systems, with `- b . phi'` added
/// for non-gradient ones. `+inf` when `U` exceeds `E` anywhere on the path.
pub fn geometric_action<M: Model + ?Sized>(model: &M, path: &Path, energy: f64) -> Result<f64> {
    let u = path_potential_values(model, path)?;
    geometric_integral(model, path, energy, &u, model.kind() == ModelKind::NonGradient)
}

/// Freidlin-Wentzell action in geometric form: the `E = 0` functional with
/// the noise-free potential `-|b|^2 / 2` and the drift term kept for every
/// model, `int |b||phi'| - b . phi'`.
pub fn fw_action<M: Model + ?Sized>(model: &M, path: &Path) -> Result<f64> {
    let u: Vec<f64> = path
        .nodes()
        .map(|x| model.drift(x).map(|b| -0.5 * b.iter().map(|c| c * c).sum::<f64>()))
        .collect::<Result<_>>()?;
    geometric_integral(model, path, 0.0, &u, true)
}

/// `lambda(alpha) = sqrt(2E - 2U) / |phi'|` along a path and its local minima.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaProfile {
    pub values: Vec<f64>,
    /// Strict local minima; a run of equal values counts once, at its middle.
    pub critical_indices: Vec<usize>,
}

pub fn lambda_profile<M: Model + ?Sized>(model: &M, path: &Path, energy: f64) -> Result<LambdaProfile> {
    let u = path_potential_values(model, path)?;
    let speed = path.speed();
    let values: Vec<f64> = u
        .iter()
        .zip(&speed)
        .map(|(&u, &s)| {
            let k = kinetic(energy, u).unwrap_or(0.0).sqrt();
            if k == 0.0 {
                0.0
            } else if s == 0.0 {
                f64::INFINITY
            } else {
                k / s
            }
        })
        .collect();
    let critical_indices = strict_local_minima(&values);
    Ok(LambdaProfile { values, critical_indices })
}

fn strict_local_minima(values: &[f64]) -> Vec<usize> {
    let scale = values.iter().filter(|v| v.is_finite()).fold(0.0_f64, |m, v| m.max(v.abs()));
    let same = |a: f64, b: f64| a == b || (a - b).abs() <= 1e-12 * scale;
    let mut minima = Vec::new();
    let mut start = 0;
    while start < values.len() {
        let mut end = start;
        while end + 1 < values.len() && same(values[end + 1], values[start]) {
            end += 1;
        }
        let v = values[start];
        let left = (start > 0).then(|| values[start - 1]);
        let right = (end + 1 < values.len()).then(|| values[end + 1]);
        let is_min = match (left, right) {
            (None, None) => false,
            (l, r) => l.map_or(true, |l| l > v) && r.map_or(true, |r| r > v),
        };
        if is_min {
            minima.push((start + end) / 2);
        }
        start = end + 1;
    }
    minima
}

/// `T = int |phi'| / sqrt(2E - 2U)`. `+inf` once any node reaches `U = E`;
/// an error when the energy is infeasible.
pub fn implied_transition_time<M: Model + ?Sized>(model: &M, path: &Path, energy: f64) -> Result<f64> {
    let u = path_potential_values(model, path)?;
    implied_time_from(&u, &path.speed(), energy)
}

fn implied_time_from(u: &[f64], speed: &[f64], energy: f64) -> Result<f64> {
    if speed.iter().all(|&s| s == 0.0) {
        return Ok(0.0);
    }
    let tol = energy_tolerance(energy);
    let mut integrand = Vec::with_capacity(u.len());
    for (&u, &s) in u.iter().zip(speed) {
        let k2 = kinetic(energy, u).ok_or(Error::InfeasibleEnergy {
            energy,
            max_u: node_max(&[u]).1,
        })?;
        if k2 <= tol {
            return Ok(f64::INFINITY);
        }
        integrand.push(s / k2.sqrt());
    }
    Ok(trapezoid(integrand.into_iter()))
}

/// All path functionals at `E = max_j U(phi_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionReport {
    #[serde(with = "extended_f64")]
    pub energy: f64,
    #[serde(with = "extended_f64")]
    pub geometric_action: f64,
    #[serde(with = "extended_f64")]
    pub fw_geometric_action: f64,
    #[serde(with = "extended_f64")]
    pub implied_time: f64,
    /// `S_T = S_E - E T`; `-inf` when `T` diverges at positive energy.
    #[serde(with = "extended_f64")]
    pub om_action: f64,
}

pub fn action_report<M: Model + ?Sized>(model: &M, path: &Path) -> Result<ActionReport> {
    let u = path_potential_values(model, path)?;
    let (_, energy) = node_max(&u);
    let geometric_action =
        geometric_integral(model, path, energy, &u, model.kind() == ModelKind::NonGradient)?;
    let fw_geometric_action = fw_action(model, path)?;
    let implied_time = implied_time_from(&u, &path.speed(), energy)?;
    let om_action = if implied_time.is_finite() {
        geometric_action - energy * implied_time
    } else if energy > 0.0 {
        f64::NEG_INFINITY
    } else if energy < 0.0 {
        f64::INFINITY
    } else {
        geometric_action
    };
    Ok(ActionReport { energy, geometric_action, fw_geometric_action, implied_time, om_action })
}

/// Serializes non-finite floats as the strings `"inf"`, `"-inf"` and `"nan"`
/// so they survive a JSON round trip.
pub mod extended_f64 {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}
