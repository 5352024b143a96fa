//! Energy-climbing relaxation of discrete paths.
//!
//! One iteration, from `phi^n` with `E_n = max_j U(phi^n_j)`:
//!
//! ```text
//! phi~_j = phi_j + ds [ 2 K_j D2phi_j + |Dphi_j|^2 grad U - (grad U . Dphi_j) Dphi_j + G_j ]
//! phi^{n+1} = equal-arclength resampling of phi~
//! ```
//!
//! with `K_j = max(E_n - U(phi_j), 0)` and, for non-gradient drifts,
//! `G_j = sqrt(2 K_j) |Dphi_j| (grad b^T - grad b) Dphi_j`. At the highest
//! node the bracket reduces to `|Dphi|^2 grad U`, a steepest-ascent step on
//! `U`, which is what drives `E_n` up to the critical value. The
//! semi-implicit scheme takes `D2phi` at the new level and solves one
//! tridiagonal system per coordinate.

use serde::{Deserialize, Serialize};

use crate::action::{energy_tolerance, node_max, path_potential_values};
use crate::error::{Error, Result};
use crate::model::{Model, ModelKind};
use crate::path::Path;
use crate::tridiag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Explicit,
    SemiImplicit,
}

/// How the updated nodes are redistributed after each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reparametrization {
    /// One interpolation pass at equal arclength targets ([`Path::reparametrized`]).
    Arclength,
    /// Equal chords on the updated polyline ([`Path::equalized`]).
    EqualChord,
}

impl Reparametrization {
    pub fn apply(self, path: &Path) -> Result<Path> {
        match self {
            Reparametrization::Arclength => path.reparametrized(),
            Reparametrization::EqualChord => path.equalized(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub n_segments: usize,
    /// Relaxation step. `None` selects 0.01 for the semi-implicit scheme and
    /// [`explicit_step_bound`] (re-evaluated every iteration) for the explicit one.
    pub ds: Option<f64>,
    pub tol: f64,
    pub max_iters: usize,
    pub scheme: Scheme,
    /// Trace stride. `None` records every iteration up to 1000, then every 10th.
    pub record_every: Option<usize>,
    pub divergence_radius: f64,
    pub divergence_energy: f64,
    pub reparametrization: Reparametrization,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n_segments: 100,
            ds: None,
            tol: 1e-6,
            max_iters: 10_000,
            scheme: Scheme::SemiImplicit,
            record_every: None,
            divergence_radius: 1e3,
            divergence_energy: 1e6,
            reparametrization: Reparametrization::Arclength,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.n_segments < 2 {
            return bad(format!("n_segments must be >= 2, got {}", self.n_segments));
        }
        if let Some(ds) = self.ds {
            if !(ds > 0.0) {
                return bad(format!("ds must be positive, got {ds}"));
            }
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive".into());
        }
        if self.record_every == Some(0) {
            return bad("record_every must be positive".into());
        }
        Ok(())
    }

    fn records(&self, iter: usize) -> bool {
        match self.record_every {
            Some(k) => iter % k == 0,
            None => iter <= 1000 || iter % 10 == 0,
        }
    }
}

/// Largest stable explicit step for the `2 K D2` term: `h^2 / (4 max K)`,
/// capped at 0.01.
pub fn explicit_step_bound(n_segments: usize, max_kinetic: f64) -> f64 {
    let h = 1.0 / n_segments as f64;
    (h * h / (4.0 * max_kinetic + f64::EPSILON)).min(0.01)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    MaxIters,
    Diverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    /// `E_n` of the path after `iter` iterations.
    pub energy: f64,
    /// `max |phi^n - phi^{n-1}| / ds`; absent for the initial path.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub status: Status,
    pub iterations_run: usize,
    pub final_path: Path,
    /// Why the run was declared diverged.
    pub divergence: Option<String>,
}

impl Trace {
    pub fn energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.energy).collect()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.residual).collect()
    }

    pub fn final_energy(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.energy)
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.residual)
    }

    /// Energy at iteration `n`, if it was recorded.
    pub fn energy_at(&self, n: usize) -> Option<f64> {
        self.records.iter().find(|r| r.iter == n).map(|r| r.energy)
    }

    /// First recorded step where the energy dropped by more than the
    /// rounding slack `1e-12 (1 + |E_n|)`.
    pub fn first_energy_decrease(&self) -> Option<usize> {
        self.records
            .windows(2)
            .find(|w| w[1].energy < w[0].energy - 1e-12 * (1.0 + w[0].energy.abs()))
            .map(|w| w[1].iter)
    }
}

/// State handed to a run observer at every recorded iteration.
pub struct Snapshot<'a> {
    pub record: TraceRecord,
    pub path: &'a Path,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Explicit part of the update at every interior node, flattened:
/// `|Dphi|^2 grad U - (grad U . Dphi) Dphi + G`, together with `K_j` at all
/// nodes.
fn forcing<M: Model + ?Sized>(model: &M, path: &Path, energy: f64, u: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = path.n_segments();
    let d = path.dim();
    let der = path.derivatives();
    let kinetic: Vec<f64> = u.iter().map(|&u| (energy - u).max(0.0)).collect();
    let non_gradient = model.kind() == ModelKind::NonGradient;
    let mut force = Vec::with_capacity(d * (n - 1));
    for j in 1..n {
        let x = path.node(j);
        let grad = model.grad_path_potential(x)?;
        let t = der.first_at(j);
        let t2 = dot(t, t);
        let gt = dot(&grad, t);
        let start = force.len();
        force.extend(grad.iter().zip(t).map(|(g, tk)| t2 * g - gt * tk));
        if non_gradient && kinetic[j] > 0.0 {
            let jac = model.drift_jacobian(x)?;
            let scale = (2.0 * kinetic[j]).sqrt() * t2.sqrt();
            for a in 0..d {
                let mut rot = 0.0;
                for b in 0..d {
                    rot += (jac[(b, a)] - jac[(a, b)]) * t[b];
                }
                force[start + a] += scale * rot;
            }
        }
    }
    Ok((force, kinetic))
}

fn check_finite(flat: &[f64], dim: usize) -> Result<()> {
    match flat.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i / dim)),
        None => Ok(()),
    }
}

fn energy_of<M: Model + ?Sized>(model: &M, path: &Path) -> Result<(Vec<f64>, f64)> {
    let u = path_potential_values(model, path)?;
    let e = node_max(&u).1;
    Ok((u, e))
}

/// `phi~` of the explicit scheme, before resampling.
pub fn explicit_update<M: Model + ?Sized>(model: &M, path: &Path, energy: f64, ds: f64) -> Result<Path> {
    let u = path_potential_values(model, path)?;
    explicit_update_with(model, path, energy, ds, &u)
}

fn explicit_update_with<M: Model + ?Sized>(
    model: &M,
    path: &Path,
    energy: f64,
    ds: f64,
    u: &[f64],
) -> Result<Path> {
    let n = path.n_segments();
    let d = path.dim();
    let (force, kinetic) = forcing(model, path, energy, u)?;
    let der = path.derivatives();
    let mut out = path.as_flat().to_vec();
    for j in 1..n {
        let curv = der.second_at(j);
        for k in 0..d {
            out[j * d + k] += ds * (2.0 * kinetic[j] * curv[k] + force[(j - 1) * d + k]);
        }
    }
    check_finite(&out, d)?;
    Path::from_flat(d, out)
}

/// `phi~` of the semi-implicit scheme, before resampling: solves
/// `(I - 2 ds K D2) phi~ = phi + ds F` per coordinate with the endpoints
/// held fixed.
pub fn semi_implicit_update<M: Model + ?Sized>(model: &M, path: &Path, energy: f64, ds: f64) -> Result<Path> {
    let u = path_potential_values(model, path)?;
    semi_implicit_update_with(model, path, energy, ds, &u)
}

fn semi_implicit_update_with<M: Model + ?Sized>(
    model: &M,
    path: &Path,
    energy: f64,
    ds: f64,
    u: &[f64],
) -> Result<Path> {
    let n = path.n_segments();
    let d = path.dim();
    let (force, kinetic) = forcing(model, path, energy, u)?;
    let inv_h2 = (n * n) as f64;
    let m = n - 1;
    let off: Vec<f64> = (1..n).map(|j| -2.0 * ds * kinetic[j] * inv_h2).collect();
    let diag: Vec<f64> = off.iter().map(|r| 1.0 - 2.0 * r).collect();
    let mut out = path.as_flat().to_vec();
    let mut rhs = vec![0.0; m];
    let mut scratch = vec![0.0; m];
    for k in 0..d {
        for (i, j) in (1..n).enumerate() {
            rhs[i] = path.node(j)[k] + ds * force[i * d + k];
        }
        rhs[0] -= off[0] * path.start()[k];
        rhs[m - 1] -= off[m - 1] * path.end()[k];
        tridiag::solve_in_place(&off, &diag, &off, &mut rhs, &mut scratch)?;
        for (i, v) in rhs.iter().enumerate() {
            out[(i + 1) * d + k] = *v;
        }
    }
    check_finite(&out, d)?;
    Path::from_flat(d, out)
}

/// One explicit iteration including the equal-arclength resampling.
pub fn step_explicit<M: Model + ?Sized>(model: &M, path: &Path, energy: f64, ds: f64) -> Result<Path> {
    explicit_update(model, path, energy, ds)?.reparametrized()
}

/// One semi-implicit iteration including the equal-arclength resampling.
pub fn step_semi_implicit<M: Model + ?Sized>(model: &M, path: &Path, energy: f64, ds: f64) -> Result<Path> {
    semi_implicit_update(model, path, energy, ds)?.reparametrized()
}

fn max_change(a: &Path, b: &Path) -> f64 {
    a.as_flat().iter().zip(b.as_flat()).fold(0.0, |m, (p, q)| m.max((p - q).abs()))
}

fn max_radius(path: &Path) -> f64 {
    path.nodes().map(|x| dot(x, x).sqrt()).fold(0.0, f64::max)
}

/// Runs the energy-climbing iteration from `initial` until the residual
/// drops below `tol`, `max_iters` is reached, or the path diverges.
pub fn run<M: Model + ?Sized>(model: &M, initial: &Path, config: &SolverConfig) -> Result<Trace> {
    run_with(model, initial, config, |_| {})
}

/// [`run`] with a callback invoked at every recorded iteration (including
/// iteration 0 and the final one).
pub fn run_with<M, F>(model: &M, initial: &Path, config: &SolverConfig, mut observe: F) -> Result<Trace>
where
    M: Model + ?Sized,
    F: FnMut(&Snapshot),
{
    config.validate()?;
    if initial.dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: initial.dim() });
    }
    if initial.n_segments() != config.n_segments {
        return Err(Error::InvalidArgument(format!(
            "initial path has {} segments, config asks for {}",
            initial.n_segments(),
            config.n_segments
        )));
    }
    let mut path = config.reparametrization.apply(initial)?;
    let (mut u, mut energy) = energy_of(model, &path)?;
    let mut records = Vec::new();
    let first = TraceRecord { iter: 0, energy, residual: None };
    records.push(first);
    observe(&Snapshot { record: first, path: &path });

    let mut status = Status::MaxIters;
    let mut divergence = None;
    let mut iter = 0;
    while iter < config.max_iters {
        let ds = match (config.ds, config.scheme) {
            (Some(ds), _) => ds,
            (None, Scheme::SemiImplicit) => 0.01,
            (None, Scheme::Explicit) => {
                let kmax = u.iter().map(|&v| energy - v).fold(0.0, f64::max);
                explicit_step_bound(config.n_segments, kmax)
            }
        };
        let stepped = match config.scheme {
            Scheme::Explicit => explicit_update_with(model, &path, energy, ds, &u),
            Scheme::SemiImplicit => semi_implicit_update_with(model, &path, energy, ds, &u),
        }
        .and_then(|p| config.reparametrization.apply(&p))
        .and_then(|p| energy_of(model, &p).map(|(u, e)| (p, u, e)));
        iter += 1;
        let (next, next_u, next_energy) = match stepped {
            Ok(v) => v,
            Err(e) => {
                status = Status::Diverged;
                divergence = Some(e.to_string());
                break;
            }
        };
        let residual = max_change(&path, &next) / ds;
        path = next;
        u = next_u;
        energy = next_energy;

        let radius = max_radius(&path);
        if radius > config.divergence_radius || energy > config.divergence_energy || !energy.is_finite() {
            status = Status::Diverged;
            divergence = Some(format!("radius {radius:.3e}, energy {energy:.3e}"));
        } else if residual < config.tol {
            status = Status::Converged;
        }
        let record = TraceRecord { iter, energy, residual: Some(residual) };
        let done = status != Status::MaxIters || iter == config.max_iters;
        if done || config.records(iter) {
            records.push(record);
            observe(&Snapshot { record, path: &path });
        }
        if status != Status::MaxIters {
            break;
        }
    }
    Ok(Trace { records, status, iterations_run: iter, final_path: path, divergence })
}

/// Largest residual of the discrete steady-state equation
/// `2 K D2phi + |Dphi|^2 grad U - (grad U . Dphi) Dphi + G` over interior
/// nodes, at `E = max_j U`.
pub fn euler_lagrange_residual<M: Model + ?Sized>(model: &M, path: &Path) -> Result<f64> {
    let (u, energy) = energy_of(model, path)?;
    let (force, kinetic) = forcing(model, path, energy, &u)?;
    let der = path.derivatives();
    let d = path.dim();
    let mut worst: f64 = 0.0;
    for j in 1..path.n_segments() {
        let curv = der.second_at(j);
        for k in 0..d {
            worst = worst.max((2.0 * kinetic[j] * curv[k] + force[(j - 1) * d + k]).abs());
        }
    }
    Ok(worst)
}

/// Whether `E_{n+1} >= E_n - tol(E_n)` holds over a recorded trace.
pub fn energy_is_monotone(trace: &Trace) -> bool {
    trace
        .records
        .windows(2)
        .all(|w| w[1].energy >= w[0].energy - energy_tolerance(w[0].energy))
}
