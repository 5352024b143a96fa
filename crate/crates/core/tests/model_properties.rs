use egma::model::{LjCluster, MaierStein, Quadratic, TwoChannel};
use egma::{GradientSource, Model, ModelKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Fourth-order central differences of `U`, independent of the crate's FD helper.
fn reference_gradient(m: &dyn Model, x: &[f64]) -> Vec<f64> {
    let h = 1e-3 * (1.0 + x.iter().fold(0.0_f64, |a, v| a.max(v.abs())));
    let mut g = vec![0.0; x.len()];
    let mut y = x.to_vec();
    for k in 0..x.len() {
        let mut at = |s: f64| {
            y[k] = x[k] + s * h;
            let u = m.path_potential(&y).unwrap();
            y[k] = x[k];
            u
        };
        g[k] = (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h);
    }
    g
}

fn samples(model: &str, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match model {
        "lj" => {
            let base = LjCluster::new(0.1, 7).hexagon();
            base.iter().map(|v| v + rng.gen_range(-0.08..0.08)).collect()
        }
        "two-channel" => vec![rng.gen_range(-1.8..1.8), rng.gen_range(-0.5..1.5)],
        _ => vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
    }
}

fn all_models() -> Vec<(&'static str, Box<dyn Model>)> {
    vec![
        ("quadratic", Box::new(Quadratic::new(0.1))),
        ("two-channel", Box::new(TwoChannel::new(0.1))),
        ("lj", Box::new(LjCluster::new(0.1, 7))),
        ("lj", Box::new(LjCluster::new(0.01, 7).with_gradient(GradientSource::Analytic))),
        ("maier-stein", Box::new(MaierStein::new(0.1, 10.0))),
        ("maier-stein", Box::new(MaierStein::new(1.0, 3.4))),
    ]
}

#[test]
fn drift_is_minus_grad_v_for_gradient_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, m) in all_models() {
        if m.kind() != ModelKind::Gradient {
            continue;
        }
        for _ in 0..100 {
            let x = samples(name, &mut rng);
            let b = m.drift(&x).unwrap();
            let g = m.grad_potential(&x).unwrap();
            let diff: Vec<f64> = b.iter().zip(&g).map(|(b, g)| b + g).collect();
            assert!(norm(&diff) <= 1e-12 * (1.0 + norm(&g)), "{name} at {x:?}");
        }
    }
}

#[test]
fn grad_path_potential_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (name, m) in all_models() {
        for _ in 0..100 {
            let x = samples(name, &mut rng);
            let got = m.grad_path_potential(&x).unwrap();
            let want = reference_gradient(m.as_ref(), &x);
            let diff: Vec<f64> = got.iter().zip(&want).map(|(a, b)| a - b).collect();
            assert!(
                norm(&diff) <= 1e-5 * (1.0 + norm(&want)),
                "{name} at {x:?}: {got:?} vs {want:?}"
            );
        }
    }
}

#[test]
fn maier_stein_is_gradient_type_at_beta_one() {
    let m = MaierStein::new(0.3, 1.0);
    let grad_vms = |x: f64, y: f64| [-x + x.powi(3) + x * y * y, (1.0 + x * x) * y];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (x, y) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let b = m.drift(&[x, y]).unwrap();
        let g = grad_vms(x, y);
        assert!((b[0] + g[0]).abs() <= 1e-12 * (1.0 + g[0].abs()));
        assert!((b[1] + g[1]).abs() <= 1e-12 * (1.0 + g[1].abs()));
    }
}

#[test]
fn maier_stein_jacobian_matches_finite_differences() {
    let m = MaierStein::new(0.1, 10.0);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let jac = m.drift_jacobian(&x).unwrap();
        for col in 0..2 {
            let h = 1e-6;
            let mut p = x;
            let mut q = x;
            p[col] += h;
            q[col] -= h;
            let bp = m.drift(&p).unwrap();
            let bq = m.drift(&q).unwrap();
            for row in 0..2 {
                let fd = (bp[row] - bq[row]) / (2.0 * h);
                assert!((jac[(row, col)] - fd).abs() < 1e-6 * (1.0 + fd.abs()));
            }
        }
    }
}

#[test]
fn lj_potential_is_translation_invariant() {
    let m = LjCluster::new(0.1, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let x = samples("lj", &mut rng);
        let (cx, cy) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let shifted: Vec<f64> =
            x.iter().enumerate().map(|(k, v)| v + if k % 2 == 0 { cx } else { cy }).collect();
        let a = m.potential(&x).unwrap();
        let b = m.potential(&shifted).unwrap();
        assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
        let ua = m.path_potential(&x).unwrap();
        let ub = m.path_potential(&shifted).unwrap();
        assert!((ua - ub).abs() <= 1e-10 * ua.abs().max(1.0));
    }
}

#[test]
fn zero_noise_reduces_u_to_minus_half_grad_squared() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let models: Vec<(&str, Box<dyn Model>)> = vec![
        ("quadratic", Box::new(Quadratic::new(0.0))),
        ("two-channel", Box::new(TwoChannel::new(0.0))),
        ("lj", Box::new(LjCluster::new(0.0, 7))),
    ];
    for (name, m) in models {
        for _ in 0..20 {
            let x = samples(name, &mut rng);
            let g = m.grad_potential(&x).unwrap();
            let u = m.path_potential(&x).unwrap();
            let want = -0.5 * norm(&g).powi(2);
            assert!((u - want).abs() <= 1e-12 * (1.0 + want.abs()), "{name}");
        }
    }
}
