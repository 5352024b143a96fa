//! Dynamical systems `dx = b(x) dt + sqrt(2 eps) dW` and their path potentials.
//!
//! Every model exposes the drift `b`, the path potential
//! `U = -eps div b - |b|^2 / 2` and its gradient. Gradient systems
//! (`b = -grad V`) additionally expose `V`, `grad V` and `lap V`; non-gradient
//! systems expose the drift Jacobian. New models plug in by implementing
//! [`Model`]; the four built-ins are collected in [`AnyModel`].

mod lj;
mod maier_stein;
mod quadratic;
mod two_channel;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lj::LjCluster;
pub use maier_stein::MaierStein;
pub use quadratic::Quadratic;
pub use two_channel::TwoChannel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Gradient,
    NonGradient,
}

/// How [`Model::grad_path_potential`] is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientSource {
    Analytic,
    /// Central differences of `U` with step [`fd_step`].
    Numeric,
}

/// Finite-difference step used for numeric gradients of `U` at `x`.
pub fn fd_step(x: &[f64]) -> f64 {
    let sup = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    1e-5 * (1.0 + sup)
}

/// Central-difference gradient of `f` at `x` with step `h`.
pub fn central_gradient<F>(f: F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        probe[k] = x[k] + h;
        let up = f(&probe)?;
        probe[k] = x[k] - h;
        let down = f(&probe)?;
        probe[k] = x[k];
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

/// A diffusion model with drift `b` and noise intensity `eps`.
///
/// Implementations must be pure functions of their parameters and `x`.
pub trait Model: Send + Sync {
    fn dim(&self) -> usize;

    fn epsilon(&self) -> f64;

    fn kind(&self) -> ModelKind;

    fn gradient_source(&self) -> GradientSource;

    fn potential(&self, _x: &[f64]) -> Result<f64> {
        Err(Error::Unsupported("a potential V"))
    }

    fn grad_potential(&self, _x: &[f64]) -> Result<Vec<f64>> {
        Err(Error::Unsupported("grad V"))
    }

    fn laplacian_potential(&self, _x: &[f64]) -> Result<f64> {
        Err(Error::Unsupported("lap V"))
    }

    /// Drift `b(x)`; `-grad V` unless overridden.
    fn drift(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut g = self.grad_potential(x)?;
        g.iter_mut().for_each(|v| *v = -*v);
        Ok(g)
    }

    /// `(grad b)_{ij} = d b_i / d x_j`.
    fn drift_jacobian(&self, _x: &[f64]) -> Result<DMatrix<f64>> {
        Err(Error::Unsupported("a drift Jacobian"))
    }

    /// `U(x) = -eps div b - |b|^2 / 2`, which is `eps lap V - |grad V|^2 / 2`
    /// for gradient systems.
    fn path_potential(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        match self.kind() {
            ModelKind::Gradient => {
                let g = self.grad_potential(x)?;
                let lap = self.laplacian_potential(x)?;
                Ok(self.epsilon() * lap - 0.5 * norm_sq(&g))
            }
            ModelKind::NonGradient => {
                let b = self.drift(x)?;
                let div = self.drift_jacobian(x)?.trace();
                Ok(-self.epsilon() * div - 0.5 * norm_sq(&b))
            }
        }
    }

    /// `grad U(x)`; central differences of [`Model::path_potential`] unless
    /// overridden with a closed form.
    fn grad_path_potential(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        central_gradient(|p| self.path_potential(p), x, fd_step(x))
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() })
        }
    }
}

/// The built-in models, selectable by name from configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum AnyModel {
    Quadratic(Quadratic),
    TwoChannel(TwoChannel),
    LjCluster(LjCluster),
    MaierStein(MaierStein),
}

impl AnyModel {
    pub fn name(&self) -> &'static str {
        match self {
            AnyModel::Quadratic(_) => "quadratic",
            AnyModel::TwoChannel(_) => "two-channel",
            AnyModel::LjCluster(_) => "lj-cluster",
            AnyModel::MaierStein(_) => "maier-stein",
        }
    }

    fn inner(&self) -> &dyn Model {
        match self {
            AnyModel::Quadratic(m) => m,
            AnyModel::TwoChannel(m) => m,
            AnyModel::LjCluster(m) => m,
            AnyModel::MaierStein(m) => m,
        }
    }

    pub fn set_epsilon(&mut self, epsilon: f64) {
        match self {
            AnyModel::Quadratic(m) => m.epsilon = epsilon,
            AnyModel::TwoChannel(m) => m.epsilon = epsilon,
            AnyModel::LjCluster(m) => m.epsilon = epsilon,
            AnyModel::MaierStein(m) => m.epsilon = epsilon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        if !(self.epsilon() >= 0.0) {
            return bad("epsilon must be >= 0");
        }
        match self {
            AnyModel::LjCluster(m) if m.n_atoms == 0 => bad("n_atoms must be positive"),
            AnyModel::LjCluster(m) if !(m.delta > 0.0 && m.sigma > 0.0) => {
                bad("delta and sigma must be positive")
            }
            AnyModel::MaierStein(m) if !(m.beta > 0.0) => bad("beta must be positive"),
            _ => Ok(()),
        }
    }
}

impl Model for AnyModel {
    fn dim(&self) -> usize {
        self.inner().dim()
    }
    fn epsilon(&self) -> f64 {
        self.inner().epsilon()
    }
    fn kind(&self) -> ModelKind {
        self.inner().kind()
    }
    fn gradient_source(&self) -> GradientSource {
        self.inner().gradient_source()
    }
    fn potential(&self, x: &[f64]) -> Result<f64> {
        self.inner().potential(x)
    }
    fn grad_potential(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.inner().grad_potential(x)
    }
    fn laplacian_potential(&self, x: &[f64]) -> Result<f64> {
        self.inner().laplacian_potential(x)
    }
    fn drift(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.inner().drift(x)
    }
    fn drift_jacobian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.inner().drift_jacobian(x)
    }
    fn path_potential(&self, x: &[f64]) -> Result<f64> {
        self.inner().path_potential(x)
    }
    fn grad_path_potential(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.inner().grad_path_potential(x)
    }
}

pub(crate) fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum()
}
