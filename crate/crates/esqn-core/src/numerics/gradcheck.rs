//! Central-difference gradients, the oracle the readout backward pass is
//! checked against.

use super::Vector;
use crate::error::{Error, Result};

/// Gradient of a scalar function by central differences:
/// `(f(v + h e_i) - f(v - h e_i)) / 2h` per coordinate.
pub fn finite_diff_grad<F>(mut f: F, v: &Vector, h: f64) -> Result<Vector>
where
    F: FnMut(&Vector) -> f64,
{
    if h <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let mut probe = v.clone();
    let mut grad = Vector::zeros(v.len());
    for i in 0..v.len() {
        let orig = probe[i];
        probe[i] = orig + h;
        let plus = f(&probe);
        probe[i] = orig - h;
        let minus = f(&probe);
        probe[i] = orig;
        grad[i] = (plus - minus) / (2.0 * h);
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_gradient() {
        // f(v) = v . v has gradient 2v.
        let v = Vector::from_vec(vec![1.0, 2.0]).unwrap();
        let g = finite_diff_grad(|x| x.dot(x), &v, 1e-5).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-8);
        assert!((g[1] - 4.0).abs() < 1e-8);
    }

    #[test]
    fn constant_function_has_zero_gradient() {
        let v = Vector::from_vec(vec![0.3, -0.7, 2.0]).unwrap();
        let g = finite_diff_grad(|_| 42.0, &v, 1e-5).unwrap();
        assert!(g.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn tanh_sum_gradient() {
        // d/dx sum(tanh(v)) = sech^2(v_i) = 1 / cosh^2(v_i).
        let v = Vector::from_vec(vec![0.5, -0.5]).unwrap();
        let g = finite_diff_grad(|x| x.iter().map(|&t| t.tanh()).sum(), &v, 1e-5).unwrap();
        let sech2 = 1.0 / (0.5f64.cosh() * 0.5f64.cosh());
        assert!((g[0] - sech2).abs() < 1e-8);
        assert!((g[1] - sech2).abs() < 1e-8);
    }

    #[test]
    fn rejects_non_positive_step() {
        let v = Vector::zeros(1);
        assert!(finite_diff_grad(|_| 0.0, &v, 0.0).is_err());
    }
}
