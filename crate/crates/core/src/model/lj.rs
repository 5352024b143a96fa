use serde::{Deserialize, Serialize};

use super::{central_gradient, fd_step, GradientSource, Model, ModelKind};
use crate::error::{Error, Result};

fn default_atoms() -> usize {
    7
}

fn one() -> f64 {
    1.0
}

fn numeric() -> GradientSource {
    GradientSource::Numeric
}

/// Planar Lennard-Jones cluster, coordinates packed as
/// `(x_1, y_1, x_2, y_2, ...)`.
///
/// `V = 2 delta sum_{i != j} [(sigma/r_ij)^12 - (sigma/r_ij)^6]`, i.e. each
/// unordered pair contributes `4 delta [(sigma/r)^12 - (sigma/r)^6]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LjCluster {
    pub epsilon: f64,
    #[serde(default = "default_atoms")]
    pub n_atoms: usize,
    #[serde(default = "one")]
    pub delta: f64,
    #[serde(default = "one")]
    pub sigma: f64,
    /// `Numeric` differentiates `U`; `Analytic` uses the pair-sum form of
    /// `eps grad lap V - H grad V`.
    #[serde(default = "numeric")]
    pub gradient: GradientSource,
}

/// Evaluations closer than this fraction of `sigma` are rejected.
pub const MIN_SEPARATION: f64 = 1e-8;

impl LjCluster {
    pub fn new(epsilon: f64, n_atoms: usize) -> Self {
        LjCluster { epsilon, n_atoms, delta: 1.0, sigma: 1.0, gradient: GradientSource::Numeric }
    }

    /// Pair energy and its first two radial derivatives.
    fn pair(&self, r: f64) -> (f64, f64, f64) {
        let s6 = (self.sigma / r).powi(6);
        let s12 = s6 * s6;
        let c = 4.0 * self.delta;
        (
            c * (s12 - s6),
            c * (-12.0 * s12 + 6.0 * s6) / r,
            c * (156.0 * s12 - 42.0 * s6) / (r * r),
        )
    }

    pub fn with_gradient(self, gradient: GradientSource) -> Self {
        LjCluster { gradient, ..self }
    }

    /// Third radial derivative of the pair energy.
    fn pair_third(&self, r: f64) -> f64 {
        let s6 = (self.sigma / r).powi(6);
        4.0 * self.delta * (-2184.0 * s6 * s6 + 336.0 * s6) / (r * r * r)
    }

    fn analytic_grad_u(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g = self.grad_potential(x)?;
        let mut out = vec![0.0; x.len()];
        self.for_pairs(x, |i, j, dx, dy, r| {
            let (_, d1, d2) = self.pair(r);
            let d3 = self.pair_third(r);
            let (ux, uy) = (dx / r, dy / r);
            // d/dr of the pair's Laplacian contribution 2 (phi'' + phi'/r)
            let dlap = 2.0 * (d3 + d2 / r - d1 / (r * r));
            // pair Hessian block K = phi'' u u^T + phi'/r (I - u u^T)
            let t = d1 / r;
            let (kxx, kxy, kyy) = (t + (d2 - t) * ux * ux, (d2 - t) * ux * uy, t + (d2 - t) * uy * uy);
            let (wx, wy) = (g[2 * i] - g[2 * j], g[2 * i + 1] - g[2 * j + 1]);
            let hx = kxx * wx + kxy * wy;
            let hy = kxy * wx + kyy * wy;
            out[2 * i] += self.epsilon * dlap * ux - hx;
            out[2 * i + 1] += self.epsilon * dlap * uy - hy;
            out[2 * j] -= self.epsilon * dlap * ux - hx;
            out[2 * j + 1] -= self.epsilon * dlap * uy - hy;
        })?;
        Ok(out)
    }

    /// Visits every unordered pair with `(i, j, dx, dy, r)`.
    fn for_pairs<F>(&self, x: &[f64], mut visit: F) -> Result<()>
    where
        F: FnMut(usize, usize, f64, f64, f64),
    {
        self.check_dim(x)?;
        let floor = MIN_SEPARATION * self.sigma;
        for i in 0..self.n_atoms {
            for j in (i + 1)..self.n_atoms {
                let dx = x[2 * i] - x[2 * j];
                let dy = x[2 * i + 1] - x[2 * j + 1];
                let r = dx.hypot(dy);
                if !(r >= floor) {
                    return Err(Error::CoincidentAtoms(i, j, floor));
                }
                visit(i, j, dx, dy, r);
            }
        }
        Ok(())
    }

    /// Global-minimum hexagon: atom 0 at the origin, atoms 1..=6 on the ring
    /// at the pair-potential minimum distance `2^(1/6) sigma`.
    pub fn hexagon(&self) -> Vec<f64> {
        let a = 2f64.powf(1.0 / 6.0) * self.sigma;
        let mut x = vec![0.0; 2 * self.n_atoms];
        for k in 1..self.n_atoms.min(7) {
            let theta = std::f64::consts::FRAC_PI_3 * (k - 1) as f64;
            x[2 * k] = a * theta.cos();
            x[2 * k + 1] = a * theta.sin();
        }
        x
    }
}

impl Model for LjCluster {
    fn dim(&self) -> usize {
        2 * self.n_atoms
    }
    fn epsilon(&self) -> f64 {
        self.epsilon
    }
    fn kind(&self) -> ModelKind {
        ModelKind::Gradient
    }
    fn gradient_source(&self) -> GradientSource {
        self.gradient
    }

    fn potential(&self, x: &[f64]) -> Result<f64> {
        let mut v = 0.0;
        self.for_pairs(x, |_, _, _, _, r| v += self.pair(r).0)?;
        Ok(v)
    }

    fn grad_potential(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut g = vec![0.0; x.len()];
        self.for_pairs(x, |i, j, dx, dy, r| {
            let f = self.pair(r).1 / r;
            g[2 * i] += f * dx;
            g[2 * i + 1] += f * dy;
            g[2 * j] -= f * dx;
            g[2 * j + 1] -= f * dy;
        })?;
        Ok(g)
    }

    fn laplacian_potential(&self, x: &[f64]) -> Result<f64> {
        let mut lap = 0.0;
        self.for_pairs(x, |_, _, _, _, r| {
            let (_, d1, d2) = self.pair(r);
            // radial Laplacian in the plane, once per atom of the pair
            lap += 2.0 * (d2 + d1 / r);
        })?;
        Ok(lap)
    }

    fn grad_path_potential(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self.gradient {
            GradientSource::Analytic => self.analytic_grad_u(x),
            GradientSource::Numeric => {
                self.check_dim(x)?;
                central_gradient(|p| self.path_potential(p), x, fd_step(x))
            }
        }
    }
}
