//! Closed-form reference solutions.
//!
//! For `V = |x|^2 / 2` the fixed-time minimizer is `psi(t) = A e^t + B e^-t`
//! and every quantity of interest has a closed form. For the Maier-Stein
//! drift the maximizer of `U` on the x-axis is explicit as well.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::Path;

/// Fixed-time minimizer of the quadratic model between `x_s` and `x_f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadSolution {
    pub epsilon: f64,
    pub time: f64,
    pub a: [f64; 2],
    pub b: [f64; 2],
    /// `A e^T`, kept separately so that sampling never overflows.
    a_scaled: [f64; 2],
    /// `E(T) = 2 eps - 2 A.B`.
    pub energy: f64,
    pub om_action: f64,
    /// Time of closest approach to the origin, when it falls inside `[0, T]`.
    pub turning_time: Option<f64>,
    /// `2|A||B| + 2 A.B`.
    pub min_distance_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSample {
    pub t: f64,
    pub position: [f64; 2],
    pub velocity: [f64; 2],
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: [f64; 2]) -> f64 {
    dot(a, a).sqrt()
}

pub fn quad_solution(epsilon: f64, start: [f64; 2], end: [f64; 2], time: f64) -> Result<QuadSolution> {
    if !(time > 0.0) || !time.is_finite() {
        return Err(Error::InvalidArgument(format!("transition time must be positive, got {time}")));
    }
    let em = (-time).exp();
    let denom = 1.0 - em * em;
    let mut a = [0.0; 2];
    let mut a_scaled = [0.0; 2];
    let mut b = [0.0; 2];
    for k in 0..2 {
        a_scaled[k] = (end[k] - start[k] * em) / denom;
        a[k] = em * a_scaled[k];
        b[k] = (start[k] - end[k] * em) / denom;
    }
    let ab = dot(a, b);
    let energy = 2.0 * epsilon - 2.0 * ab;
    let om_action = 0.5 * dot(end, end) - 0.5 * dot(start, start) - 2.0 * epsilon * time
        + 0.5 * (dot(a_scaled, a_scaled) - dot(a, a))
        + 0.5 * dot(b, b) * (1.0 - em * em);
    let (na, nb) = (norm(a), norm(b));
    let turning_time = if na > 0.0 && nb > 0.0 {
        let t = 0.5 * (nb / na).ln();
        (0.0..=time).contains(&t).then_some(t)
    } else {
        None
    };
    Ok(QuadSolution {
        epsilon,
        time,
        a,
        b,
        a_scaled,
        energy,
        om_action,
        turning_time,
        min_distance_sq: 2.0 * na * nb + 2.0 * ab,
    })
}

impl QuadSolution {
    /// `psi` and `psi'` on `n + 1` equally spaced times in `[0, T]`.
    pub fn sample(&self, n: usize) -> Vec<QuadSample> {
        (0..=n)
            .map(|i| {
                let t = self.time * i as f64 / n.max(1) as f64;
                let up = (t - self.time).exp();
                let down = (-t).exp();
                let mut position = [0.0; 2];
                let mut velocity = [0.0; 2];
                for k in 0..2 {
                    let grow = self.a_scaled[k] * up;
                    let decay = self.b[k] * down;
                    position[k] = grow + decay;
                    velocity[k] = grow - decay;
                }
                QuadSample { t, position, velocity }
            })
            .collect()
    }

    /// `|psi'|^2 / 2 + U(psi)` at a sample.
    pub fn energy_at(&self, s: &QuadSample) -> f64 {
        0.5 * dot(s.velocity, s.velocity) + 2.0 * self.epsilon - 0.5 * dot(s.position, s.position)
    }
}

/// Long-time graph limit on the positive axis: `x_s -> 0 -> x_f`, turning at
/// `alpha* = x_s / (x_s + x_f)`, embedded in the plane with `y = 0`.
pub fn quad_graph_limit(start: f64, end: f64, n_segments: usize) -> Result<Path> {
    if !(start > 0.0 && end > start) {
        return Err(Error::InvalidArgument(format!("need 0 < x_s < x_f, got {start}, {end}")));
    }
    let len = start + end;
    let turn = start / len;
    let mut nodes = Vec::with_capacity(2 * (n_segments + 1));
    for j in 0..=n_segments {
        let alpha = j as f64 / n_segments as f64;
        let x = if j == n_segments {
            end
        } else if alpha <= turn {
            start - len * alpha
        } else {
            len * alpha - start
        };
        nodes.extend([x, 0.0]);
    }
    Path::from_flat(2, nodes)
}

/// `(T_a, T_b)` with `f(T_a) = 0` and `f(T_b) = 1` for
/// `f(T) = (x_s e^T - x_f) / (x_f - x_s e^-T)`.
pub fn quad_fw_times(start: f64, end: f64) -> Result<(f64, f64)> {
    if !(start > 0.0 && end > start) {
        return Err(Error::InvalidArgument(format!("need 0 < x_s < x_f, got {start}, {end}")));
    }
    let ta = (end / start).ln();
    let f = |t: f64| (start * t.exp() - end) / (end - start * (-t).exp());
    let (mut lo, mut hi) = (ta, ta + 50.0);
    while hi - lo > 1e-13 * (1.0 + hi) {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((ta, 0.5 * (lo + hi)))
}

/// Freidlin-Wentzell optimum for two points on the circle of radius `R`:
/// `(T_c, action, min |psi|^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcFw {
    pub time: f64,
    pub action: f64,
    pub min_distance_sq: f64,
}

pub fn quad_case2_fw(radius: f64, theta1: f64, theta2: f64) -> Result<ArcFw> {
    let dtheta = theta2 - theta1;
    if !(dtheta > 0.0 && dtheta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!(
            "angle difference must lie in (0, pi/2), got {dtheta}"
        )));
    }
    Ok(ArcFw {
        time: (1.0 / dtheta.cos()).acosh(),
        action: radius * radius * dtheta.sin(),
        min_distance_sq: radius * radius * dtheta.cos(),
    })
}

/// Maximizer of the Maier-Stein `U` on the x-axis: `(|x_c|, E_c)` with
/// `x_c^2 = (2 + sqrt(1 + 24 eps)) / 3`. The points sit at `(+-|x_c|, 0)`.
pub fn ms_critical_point(epsilon: f64) -> Result<(f64, f64)> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument("epsilon must be >= 0".into()));
    }
    let xc2 = (2.0 + (1.0 + 24.0 * epsilon).sqrt()) / 3.0;
    let xc = xc2.sqrt();
    let f = xc - xc * xc2;
    Ok((xc, 4.0 * epsilon * xc2 - 0.5 * f * f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MaierStein, Model};
    use approx::assert_abs_diff_eq;

    #[test]
    fn boundary_values() {
        for t in [0.1, 1.0, 5.0, 30.0] {
            let q = quad_solution(0.1, [1.0, 0.5], [-0.3, 2.0], t).unwrap();
            let s = q.sample(10);
            for k in 0..2 {
                assert_abs_diff_eq!(s[0].position[k], [1.0, 0.5][k], epsilon = 1e-12);
                assert_abs_diff_eq!(s[10].position[k], [-0.3, 2.0][k], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn long_time_limit_on_the_axis() {
        let q = quad_solution(0.1, [1.0, 0.0], [2.0, 0.0], 40.0).unwrap();
        assert_abs_diff_eq!(q.energy, 0.2, epsilon = 1e-12);
        // turning point x_c = 2 sqrt(AB) -> 0
        assert!(2.0 * (q.a[0] * q.b[0]).sqrt() < 1e-8);
        let q = quad_solution(0.1, [1.0, 0.0], [2.0, 0.0], 700.0).unwrap();
        assert!(q.energy.is_finite() && q.om_action.is_finite());
        assert!(q.sample(7).iter().all(|s| s.position[0].is_finite()));
    }

    #[test]
    fn symmetric_endpoints_turn_at_half_time() {
        let q = quad_solution(0.1, [1.5, 0.2], [1.5, 0.2], 3.0).unwrap();
        assert_abs_diff_eq!(q.turning_time.unwrap(), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn energy_is_conserved_along_samples() {
        let q = quad_solution(0.1, [3.0, 0.0], [0.0, 3.0], 2.5).unwrap();
        for s in q.sample(50) {
            let e = q.energy_at(&s);
            assert!((e - q.energy).abs() <= 1e-10 * q.energy.abs().max(1.0));
        }
    }

    #[test]
    fn action_slope_is_minus_energy() {
        for t in [0.5, 1.0, 2.0, 4.0] {
            let h = 1e-5;
            let s = |t| quad_solution(0.1, [1.0, 0.0], [2.0, 0.0], t).unwrap().om_action;
            let slope = (s(t + h) - s(t - h)) / (2.0 * h);
            let e = quad_solution(0.1, [1.0, 0.0], [2.0, 0.0], t).unwrap().energy;
            assert!(((slope + e) / e).abs() < 1e-6, "T={t}: {slope} vs {}", -e);
        }
    }

    #[test]
    fn graph_limit_nodes() {
        let p = quad_graph_limit(1.0, 2.0, 6).unwrap();
        let xs: Vec<f64> = p.nodes().map(|n| n[0]).collect();
        let expected = [1.0, 0.5, 0.0, 0.5, 1.0, 1.5, 2.0];
        for (a, b) in xs.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert!(quad_graph_limit(1.0, 1.0, 6).is_err());
    }

    #[test]
    fn fw_times() {
        let (ta, tb) = quad_fw_times(1.0, 2.0).unwrap();
        assert_abs_diff_eq!(ta, 2f64.ln(), epsilon = 1e-15);
        let f = (tb.exp() - 2.0) / (2.0 - (-tb).exp());
        assert!((f - 1.0).abs() <= 1e-12);
        // f(T) = 1 reduces to cosh T = x_f / x_s
        assert_abs_diff_eq!(tb, 2f64.acosh(), epsilon = 1e-11);
        let (ta, _) = quad_fw_times(1.0, 1.0 + 1e-9).unwrap();
        assert!(ta > 0.0 && ta < 1e-8);
    }

    #[test]
    fn arc_fw_closed_forms() {
        use std::f64::consts::PI;
        let c = quad_case2_fw(3.0, PI / 12.0, 5.0 * PI / 12.0).unwrap();
        assert_abs_diff_eq!(c.min_distance_sq, 4.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.action, 4.5 * 3f64.sqrt(), epsilon = 1e-12);
        let tiny = quad_case2_fw(3.0, 0.3, 0.3 + 1e-8).unwrap();
        assert!(tiny.time < 1e-7 && tiny.action < 1e-6);
        assert!(quad_case2_fw(3.0, 0.0, PI / 2.0).is_err());
        assert!(quad_case2_fw(3.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn arc_fw_matches_fixed_time_solution() {
        // At T_c the zero-noise fixed-time action and closest approach reproduce
        // the closed forms.
        use std::f64::consts::PI;
        let (r, t1, t2) = (3.0, PI / 12.0, 5.0 * PI / 12.0);
        let c = quad_case2_fw(r, t1, t2).unwrap();
        let q = quad_solution(0.0, [r * t1.cos(), r * t1.sin()], [r * t2.cos(), r * t2.sin()], c.time)
            .unwrap();
        assert_abs_diff_eq!(q.min_distance_sq, c.min_distance_sq, epsilon = 1e-10);
        assert_abs_diff_eq!(q.energy, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(q.om_action, c.action, epsilon = 1e-9);
    }

    #[test]
    fn ms_critical_point_is_stationary() {
        let (xc, ec) = ms_critical_point(0.0).unwrap();
        assert_abs_diff_eq!(xc, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ec, 0.0, epsilon = 1e-15);
        for eps in [0.0, 0.05, 0.1, 0.5] {
            let (xc, ec) = ms_critical_point(eps).unwrap();
            let m = MaierStein::new(eps, 10.0);
            for x in [xc, -xc] {
                let g = m.grad_path_potential(&[x, 0.0]).unwrap();
                assert!(g[0].abs() < 1e-10 && g[1].abs() < 1e-10, "{eps}: {g:?}");
                assert_abs_diff_eq!(m.path_potential(&[x, 0.0]).unwrap(), ec, epsilon = 1e-14);
            }
        }
    }
}
