use crate::error::{Error, Result};

/// Solves `a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i` by forward elimination
/// and back substitution. `a[0]` and `c[n-1]` are ignored. `d` is
/// overwritten with the solution; `scratch` must hold `n` values.
pub(crate) fn solve_in_place(
    a: &[f64],
    b: &[f64],
    c: &[f64],
    d: &mut [f64],
    scratch: &mut [f64],
) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    if b[0] == 0.0 {
        return Err(Error::SingularPivot(0));
    }
    scratch[0] = c[0] / b[0];
    d[0] /= b[0];
    for i in 1..n {
        let pivot = b[i] - a[i] * scratch[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularPivot(i));
        }
        scratch[i] = if i + 1 < n { c[i] / pivot } else { 0.0 };
        d[i] = (d[i] - a[i] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= scratch[i] * d[i + 1];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn multiply(a: &[f64], b: &[f64], c: &[f64], x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut v = b[i] * x[i];
                if i > 0 {
                    v += a[i] * x[i - 1];
                }
                if i + 1 < n {
                    v += c[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    #[test]
    fn identity_system() {
        let mut d = vec![1.0, -2.0, 3.0];
        let mut s = vec![0.0; 3];
        solve_in_place(&[0.0; 3], &[1.0; 3], &[0.0; 3], &mut d, &mut s).unwrap();
        assert_eq!(d, vec![1.0, -2.0, 3.0]);
    }

    #[test]
    fn zero_pivot() {
        let mut d = vec![1.0, 1.0];
        let mut s = vec![0.0; 2];
        let r = solve_in_place(&[0.0, 1.0], &[1.0, 1.0], &[1.0, 0.0], &mut d, &mut s);
        assert_eq!(r, Err(Error::SingularPivot(1)));
    }

    proptest! {
        #[test]
        fn diagonally_dominant_systems_are_solved(
            coeffs in prop::collection::vec((0.0f64..5.0, 0.0f64..5.0, -3.0f64..3.0), 1..60)
        ) {
            let n = coeffs.len();
            let a: Vec<f64> = coeffs.iter().map(|c| -c.0).collect();
            let c: Vec<f64> = coeffs.iter().map(|c| -c.1).collect();
            let b: Vec<f64> = coeffs.iter().map(|c| 1.0 + c.0 + c.1).collect();
            let x: Vec<f64> = coeffs.iter().map(|c| c.2).collect();
            let mut d = multiply(&a, &b, &c, &x);
            let mut s = vec![0.0; n];
            solve_in_place(&a, &b, &c, &mut d, &mut s).unwrap();
            for i in 0..n {
                prop_assert!((d[i] - x[i]).abs() < 1e-10);
            }
        }
    }
}
