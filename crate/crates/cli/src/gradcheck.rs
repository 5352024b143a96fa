//! Compares `grad U` of a model with a fourth-order central difference of
//! `U` at random points.

use egma::model::{LjCluster, MaierStein, Quadratic, TwoChannel};
use egma::{AnyModel, GradientSource, Model};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ConfigError;

pub const TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub model: String,
    pub gradient: GradientSource,
    pub points: usize,
    pub seed: u64,
    /// `max |g - g_fd| / (1 + |g_fd|)` over the sample points.
    pub max_deviation: f64,
    pub passed: bool,
}

/// The variants checked for a model name: the default model, plus the
/// closed-form gradient where it is optional.
pub fn variants(name: &str, epsilon: Option<f64>) -> Result<Vec<AnyModel>, ConfigError> {
    let eps = epsilon.unwrap_or(0.1);
    Ok(match name {
        "quadratic" => vec![AnyModel::Quadratic(Quadratic::new(eps))],
        "two-channel" => vec![AnyModel::TwoChannel(TwoChannel::new(eps))],
        "maier-stein" => vec![AnyModel::MaierStein(MaierStein::new(eps, 10.0))],
        "lj-cluster" => {
            let m = LjCluster::new(eps, 7);
            vec![AnyModel::LjCluster(m), AnyModel::LjCluster(m.with_gradient(GradientSource::Analytic))]
        }
        other => {
            return Err(ConfigError::field(
                "--model",
                format!("unknown model `{other}` (quadratic, two-channel, lj-cluster, maier-stein)"),
            ))
        }
    })
}

/// Random evaluation point inside the model's region of interest.
pub fn sample(model: &AnyModel, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match model {
        AnyModel::LjCluster(m) => m.hexagon().iter().map(|v| v + rng.gen_range(-0.08..0.08)).collect(),
        AnyModel::TwoChannel(_) => vec![rng.gen_range(-1.8..1.8), rng.gen_range(-0.5..1.5)],
        _ => (0..model.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect(),
    }
}

/// Fourth-order central difference of `U` with `h = 1e-3 (1 + |x|_inf)`.
pub fn fd_gradient(model: &dyn Model, x: &[f64]) -> egma::Result<Vec<f64>> {
    let h = 1e-3 * (1.0 + x.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
    let mut g = vec![0.0; x.len()];
    let mut y = x.to_vec();
    for k in 0..x.len() {
        let mut at = |s: f64| {
            y[k] = x[k] + s * h;
            let u = model.path_potential(&y);
            y[k] = x[k];
            u
        };
        g[k] = (at(-2.0)? - 8.0 * at(-1.0)? + 8.0 * at(1.0)? - at(2.0)?) / (12.0 * h);
    }
    Ok(g)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn check(model: &AnyModel, points: usize, seed: u64) -> egma::Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..points {
        let x = sample(model, &mut rng);
        let g = model.grad_path_potential(&x)?;
        let fd = fd_gradient(model, &x)?;
        let diff: Vec<f64> = g.iter().zip(&fd).map(|(a, b)| a - b).collect();
        worst = worst.max(norm(&diff) / (1.0 + norm(&fd)));
    }
    Ok(Check {
        model: model.name().to_string(),
        gradient: model.gradient_source(),
        points,
        seed,
        max_deviation: worst,
        passed: worst <= TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_exact() {
        let m = &variants("quadratic", None).unwrap()[0];
        assert!(check(m, 20, 1).unwrap().max_deviation <= 1e-10);
    }

    #[test]
    fn fd_oracle_is_fourth_order() {
        let m = AnyModel::MaierStein(MaierStein::new(0.1, 10.0));
        let x = [0.7, -0.4];
        let exact = m.grad_path_potential(&x).unwrap();
        let fd = fd_gradient(&m, &x).unwrap();
        for k in 0..2 {
            assert!((exact[k] - fd[k]).abs() < 1e-8 * (1.0 + exact[k].abs()));
        }
    }

    #[test]
    fn unknown_model() {
        assert!(variants("ising", None).is_err());
    }
}
