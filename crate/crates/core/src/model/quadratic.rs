use serde::{Deserialize, Serialize};

use super::{GradientSource, Model, ModelKind};
use crate::error::Result;

/// `V(x) = |x|^2 / 2` in the plane, so `U(x) = 2 eps - |x|^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadratic {
    pub epsilon: f64,
}

impl Quadratic {
    pub fn new(epsilon: f64) -> Self {
        Quadratic { epsilon }
    }
}

impl Model for Quadratic {
    fn dim(&self) -> usize {
        2
    }
    fn epsilon(&self) -> f64 {
        self.epsilon
    }
    fn kind(&self) -> ModelKind {
        ModelKind::Gradient
    }
    fn gradient_source(&self) -> GradientSource {
        GradientSource::Analytic
    }

    fn potential(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(0.5 * (x[0] * x[0] + x[1] * x[1]))
    }

    fn grad_potential(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(x.to_vec())
    }

    fn laplacian_potential(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(2.0)
    }

    fn grad_path_potential(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(vec![-x[0], -x[1]])
    }
}
