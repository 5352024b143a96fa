use egma::model::TwoChannel;
use egma::Model;

/// Local maximum of `U` by gradient ascent with a backtracking step.
fn ascend(m: &TwoChannel, start: [f64; 2]) -> ([f64; 2], f64) {
    let mut x = start;
    let mut u = m.path_potential(&x).unwrap();
    let mut step = 1e-3;
    for _ in 0..200_000 {
        let g = m.grad_path_potential(&x).unwrap();
        if g[0].hypot(g[1]) < 1e-8 {
            break;
        }
        loop {
            let trial = [x[0] + step * g[0], x[1] + step * g[1]];
            let ut = m.path_potential(&trial).unwrap();
            if ut > u {
                x = trial;
                u = ut;
                step *= 1.2;
                break;
            }
            step *= 0.5;
            if step < 1e-16 {
                return (x, u);
            }
        }
    }
    (x, u)
}

#[test]
fn low_noise_maxima_of_u() {
    let m = TwoChannel::new(0.05);
    let (top, e_top) = ascend(&m, [0.0, 1.0]);
    assert!((e_top - 1.5516).abs() < 5e-4, "{e_top}");
    assert!(top[0].abs() < 1e-3 && (top[1] - 1.0).abs() < 0.05, "{top:?}");
    for a in [[1.0, 0.0], [-1.0, 0.0]] {
        let (p, e) = ascend(&m, a);
        assert!((e - 1.0849).abs() < 5e-4, "{e}");
        assert!((p[0] - a[0]).abs() < 0.05 && p[1].abs() < 0.05);
    }
}

#[test]
fn high_noise_maximum_splits_away_from_the_upper_saddle() {
    let m = TwoChannel::new(0.5);
    let (left, e_left) = ascend(&m, [-0.3, 1.0]);
    let (right, e_right) = ascend(&m, [0.3, 1.0]);
    assert!((e_left - 23.9939).abs() < 1e-3, "{e_left}");
    assert!((e_right - 23.9939).abs() < 1e-3, "{e_right}");
    assert!(left[0] < -0.2 && right[0] > 0.2);
    let centre = m.path_potential(&[0.0, 1.0]).unwrap();
    assert!(centre < e_left - 1.0);
}
