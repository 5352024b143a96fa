use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{GradientSource, Model, ModelKind};
use crate::error::Result;

/// Maier-Stein drift `b = (x - x^3 - beta x y^2, -(1 + x^2) y)`.
///
/// Fixed points at `(+-1, 0)` (stable) and `(0, 0)` (saddle) for every
/// `beta > 0`; gradient type only when `beta = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaierStein {
    pub epsilon: f64,
    pub beta: f64,
}

impl MaierStein {
    pub fn new(epsilon: f64, beta: f64) -> Self {
        MaierStein { epsilon, beta }
    }
}

impl Model for MaierStein {
    fn dim(&self) -> usize {
        2
    }
    fn epsilon(&self) -> f64 {
        self.epsilon
    }
    fn kind(&self) -> ModelKind {
        ModelKind::NonGradient
    }
    fn gradient_source(&self) -> GradientSource {
        GradientSource::Analytic
    }

    fn drift(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(p)?;
        let (x, y) = (p[0], p[1]);
        Ok(vec![x - x * x * x - self.beta * x * y * y, -(1.0 + x * x) * y])
    }

    fn drift_jacobian(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        self.check_dim(p)?;
        let (x, y) = (p[0], p[1]);
        let beta = self.beta;
        Ok(DMatrix::from_row_slice(
            2,
            2,
            &[
                1.0 - 3.0 * x * x - beta * y * y,
                -2.0 * beta * x * y,
                -2.0 * x * y,
                -(1.0 + x * x),
            ],
        ))
    }

    fn path_potential(&self, p: &[f64]) -> Result<f64> {
        self.check_dim(p)?;
        let (x, y) = (p[0], p[1]);
        let (eps, beta) = (self.epsilon, self.beta);
        let f = x - x * x * x - beta * x * y * y;
        let g = (1.0 + x * x) * y;
        Ok(4.0 * eps * x * x + eps * beta * y * y - 0.5 * (f * f + g * g))
    }

    fn grad_path_potential(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(p)?;
        let (x, y) = (p[0], p[1]);
        let (eps, beta) = (self.epsilon, self.beta);
        let f = x - x * x * x - beta * x * y * y;
        let g = (1.0 + x * x) * y;
        let fx = 1.0 - 3.0 * x * x - beta * y * y;
        let fy = -2.0 * beta * x * y;
        let gx = 2.0 * x * y;
        let gy = 1.0 + x * x;
        Ok(vec![
            8.0 * eps * x - (f * fx + g * gx),
            2.0 * eps * beta * y - (f * fy + g * gy),
        ])
    }
}
