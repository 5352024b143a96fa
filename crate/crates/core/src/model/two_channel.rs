use serde::{Deserialize, Serialize};

use super::{GradientSource, Model, ModelKind};
use crate::error::Result;

fn default_gamma() -> f64 {
    12.16
}

/// Planar potential with minima near `(+-1, 0)` joined by a straight channel
/// through a lower saddle and a circular channel through an upper saddle.
///
/// ```text
/// V = 4 (x^2 + y^2 - 1)^2 y^2 - exp(-4((x-1)^2 + y^2)) - exp(-4((x+1)^2 + y^2))
///   + exp(8(x - 1.5)) + exp(-8(x + 1.5)) + exp(-gamma (y + 0.25)) + 0.2 exp(-8 x^2)
/// ```
///
/// `gamma` trades the heights of the two saddles against each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoChannel {
    pub epsilon: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

impl TwoChannel {
    pub fn new(epsilon: f64) -> Self {
        TwoChannel { epsilon, gamma: default_gamma() }
    }

    pub fn with_gamma(epsilon: f64, gamma: f64) -> Self {
        TwoChannel { epsilon, gamma }
    }

    /// `(V, grad V, lap V)` evaluated together.
    fn eval(&self, p: &[f64]) -> (f64, [f64; 2], f64) {
        let (x, y) = (p[0], p[1]);
        let gamma = self.gamma;
        let mut v = 0.0;
        let mut g = [0.0; 2];
        let mut lap = 0.0;

        let s = x * x + y * y - 1.0;
        v += 4.0 * s * s * y * y;
        g[0] += 16.0 * x * s * y * y;
        g[1] += 16.0 * s * y * y * y + 8.0 * s * s * y;
        lap += 96.0 * s * y * y + 32.0 * x * x * y * y + 32.0 * y.powi(4) + 8.0 * s * s;

        for c in [1.0, -1.0] {
            let r2 = (x - c) * (x - c) + y * y;
            let e = (-4.0 * r2).exp();
            v -= e;
            g[0] += 8.0 * (x - c) * e;
            g[1] += 8.0 * y * e;
            lap -= (64.0 * r2 - 16.0) * e;
        }

        let e = (8.0 * (x - 1.5)).exp();
        v += e;
        g[0] += 8.0 * e;
        lap += 64.0 * e;

        let e = (-8.0 * (x + 1.5)).exp();
        v += e;
        g[0] -= 8.0 * e;
        lap += 64.0 * e;

        let e = (-gamma * (y + 0.25)).exp();
        v += e;
        g[1] -= gamma * e;
        lap += gamma * gamma * e;

        let e = 0.2 * (-8.0 * x * x).exp();
        v += e;
        g[0] -= 16.0 * x * e;
        lap += (256.0 * x * x - 16.0) * e;

        (v, g, lap)
    }
}

impl Model for TwoChannel {
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
        GradientSource::Numeric
    }

    fn potential(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.eval(x).0)
    }

    fn grad_potential(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self.eval(x).1.to_vec())
    }

    fn laplacian_potential(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.eval(x).2)
    }

    fn path_potential(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let (_, g, lap) = self.eval(x);
        Ok(self.epsilon * lap - 0.5 * (g[0] * g[0] + g[1] * g[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::central_gradient;

    #[test]
    fn derivatives_match_finite_differences() {
        let m = TwoChannel::new(0.05);
        for p in [[0.3, 0.4], [-0.9, 0.1], [1.1, -0.3], [0.0, 1.0], [-0.5, 0.8]] {
            let h = 1e-5;
            let fd = central_gradient(|q| m.potential(q), &p, h).unwrap();
            let g = m.grad_potential(&p).unwrap();
            for k in 0..2 {
                assert!((fd[k] - g[k]).abs() <= 1e-6 * (1.0 + g[k].abs()), "{p:?} {fd:?} {g:?}");
            }
            let h = 1e-4;
            let v0 = m.potential(&p).unwrap();
            let mut lap = 0.0;
            for k in 0..2 {
                let mut a = p;
                let mut b = p;
                a[k] += h;
                b[k] -= h;
                lap += (m.potential(&a).unwrap() - 2.0 * v0 + m.potential(&b).unwrap()) / (h * h);
            }
            let exact = m.laplacian_potential(&p).unwrap();
            assert!((lap - exact).abs() <= 1e-4 * (1.0 + exact.abs()), "{p:?} {lap} {exact}");
        }
    }

    #[test]
    fn wells_near_plus_minus_one() {
        let m = TwoChannel::new(0.0);
        for start in [[1.0, 0.0], [-1.0, 0.0]] {
            let mut x = start;
            for _ in 0..20000 {
                let g = m.grad_potential(&x).unwrap();
                x[0] -= 1e-3 * g[0];
                x[1] -= 1e-3 * g[1];
            }
            let g = m.grad_potential(&x).unwrap();
            assert!(g[0].hypot(g[1]) < 1e-8, "{g:?}");
            assert!((x[0] - start[0]).hypot(x[1]) < 0.1, "{x:?}");
            assert!(m.potential(&x).unwrap() < m.potential(&[0.0, 0.0]).unwrap());
        }
    }
}
