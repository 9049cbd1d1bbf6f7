//! Generalized Laguerre polynomials of complex argument and real order, and
//! generalized factorials `eps_n! = eps_1 eps_2 ... eps_n`.
//!
//! Evaluation uses the ascending three-term recurrence. It is stable for the
//! moderate degrees used here (n up to about 30); large-n asymptotics are not
//! handled.

mod series;

pub use series::{Scalar, Series, JET};

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::pseudoboson::EpsilonSequence;

/// `L_n^(gamma)(z)` by the recurrence
/// `(k+1) L_{k+1} = (2k+1+gamma-z) L_k - (k+gamma) L_{k-1}`.
pub fn laguerre(n: usize, gamma: f64, z: Complex64) -> Result<Complex64> {
    check_finite(gamma, z)?;
    Ok(laguerre_in(n, gamma, z))
}

/// `d/dz L_n^(gamma)(z) = -L_{n-1}^(gamma+1)(z)`, zero for `n = 0`.
pub fn laguerre_derivative(n: usize, gamma: f64, z: Complex64) -> Result<Complex64> {
    check_finite(gamma, z)?;
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(-laguerre_in(n - 1, gamma + 1.0, z))
}

/// The Laguerre recurrence over any [`Scalar`]. With a [`Series`] argument
/// this yields every derivative of `L_n(u(x))` at once.
pub fn laguerre_in<T: Scalar>(n: usize, gamma: f64, z: T) -> T {
    let one = Complex64::new(1.0, 0.0);
    let mut prev = T::from_complex(one);
    if n == 0 {
        return prev;
    }
    // L_1 = 1 + gamma - z
    let mut curr = z * Complex64::new(-1.0, 0.0) + Complex64::new(1.0 + gamma, 0.0);
    for k in 1..n {
        let kf = k as f64;
        let lin = z * Complex64::new(-1.0, 0.0) + Complex64::new(2.0 * kf + 1.0 + gamma, 0.0);
        let next = (lin * curr - prev * Complex64::new(kf + gamma, 0.0))
            * Complex64::new(1.0 / (kf + 1.0), 0.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// `eps_n! = eps_1 * ... * eps_n`, with `eps_0! = 1`.
pub fn epsilon_factorial(n: usize, eps: &EpsilonSequence) -> Result<f64> {
    if n >= eps.len() {
        return Err(invalid(format!(
            "index {n} out of range for a sequence of length {}",
            eps.len()
        )));
    }
    Ok(eps.values()[1..=n].iter().product())
}

fn check_finite(gamma: f64, z: Complex64) -> Result<()> {
    if !gamma.is_finite() {
        return Err(invalid(format!("Laguerre order must be finite, got {gamma}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(invalid(format!("Laguerre argument must be finite, got {z}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn low_degree_values() {
        assert_eq!(laguerre(0, 3.7, Complex64::new(1.0, 2.0)).unwrap(), re(1.0));
        assert!((laguerre(1, 0.5, re(2.0)).unwrap() - re(-0.5)).norm() < 1e-15);
        // (g+1)(g+2)/2 - (g+2) z + z^2/2 at g = 0.5, z = 2
        let g: f64 = 0.5;
        let z: f64 = 2.0;
        let q = (g + 1.0) * (g + 2.0) / 2.0 - (g + 2.0) * z + z * z / 2.0;
        assert!((q - (-1.125)).abs() < 1e-15);
        assert!((laguerre(2, g, re(z)).unwrap() - re(q)).norm() < 1e-14);
    }

    #[test]
    fn low_degree_derivatives() {
        assert_eq!(laguerre_derivative(0, 0.5, re(2.0)).unwrap(), re(0.0));
        assert!((laguerre_derivative(1, 0.5, re(2.0)).unwrap() - re(-1.0)).norm() < 1e-15);
        // d/dz of the quadratic: -(g+2) + z
        let d = -(0.5 + 2.0) + 2.0;
        assert!((laguerre_derivative(2, 0.5, re(2.0)).unwrap() - re(d)).norm() < 1e-14);
        assert!((d - (-0.5)).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(laguerre(2, f64::NAN, re(1.0)).is_err());
        assert!(laguerre(2, 0.0, Complex64::new(f64::INFINITY, 0.0)).is_err());
        assert!(laguerre_derivative(2, f64::INFINITY, re(1.0)).is_err());
    }

    #[test]
    fn series_argument_reproduces_derivative() {
        let z0 = Complex64::new(1.2, -0.7);
        let s = laguerre_in(5, 0.3, Series::variable(z0));
        assert!((s.value() - laguerre(5, 0.3, z0).unwrap()).norm() < 1e-13);
        let d = laguerre_derivative(5, 0.3, z0).unwrap();
        assert!((s.derivative_value(1) - d).norm() < 1e-12);
    }

    #[test]
    fn factorials() {
        let bosonic = EpsilonSequence::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(epsilon_factorial(0, &bosonic).unwrap(), 1.0);
        assert_eq!(epsilon_factorial(3, &bosonic).unwrap(), 6.0);
        assert!(epsilon_factorial(4, &bosonic).is_err());

        let g = 0.3;
        let model = EpsilonSequence::new((0..4).map(|n| 16.0 * n as f64 * (n as f64 + g)).collect())
            .unwrap();
        assert!((epsilon_factorial(2, &model).unwrap() - 20.8 * 73.6).abs() < 1e-9);
        assert!((20.8_f64 * 73.6 - 1530.88).abs() < 1e-9);
    }
}
