//! Truncated Taylor series in one real variable.
//!
//! A [`Series`] at a node `x0` stores `f^(k)(x0) / k!` for `k < JET`. Closed-form
//! functions are built from the variable with ring operations plus `exp`,
//! `powc` and `recip`, and derivatives are read off exactly; there is no step
//! size anywhere.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Number of stored Taylor coefficients.
///
/// Each derivative consumes one coefficient. The deepest chains used here
/// (a second-order operator applied after another second-order operator)
/// need four, so eight leaves headroom.
pub const JET: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Series {
    c: [Complex64; JET],
}

impl Series {
    pub fn constant(value: Complex64) -> Self {
        let mut c = [ZERO; JET];
        c[0] = value;
        Series { c }
    }

    /// The identity function `t -> t` expanded at a point whose value is
    /// `at` (complex, so `x - ic` is expressed directly).
    pub fn variable(at: Complex64) -> Self {
        let mut c = [ZERO; JET];
        c[0] = at;
        c[1] = Complex64::new(1.0, 0.0);
        Series { c }
    }

    pub fn zero() -> Self {
        Series { c: [ZERO; JET] }
    }

    pub fn from_coefficients(c: [Complex64; JET]) -> Self {
        Series { c }
    }

    pub fn coefficients(&self) -> &[Complex64; JET] {
        &self.c
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    /// The `k`-th derivative at the expansion point.
    pub fn derivative_value(&self, k: usize) -> Complex64 {
        assert!(k < JET, "derivative order {k} exceeds the jet length");
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.c[k] * fact
    }

    /// Series of `f'`. The top coefficient becomes zero, so the result is
    /// exact to one order less.
    pub fn derivative(&self) -> Self {
        let mut c = [ZERO; JET];
        for k in 0..JET - 1 {
            c[k] = self.c[k + 1] * (k + 1) as f64;
        }
        Series { c }
    }

    /// Pointwise complex conjugate. Valid because the expansion variable is
    /// real.
    pub fn conj(&self) -> Self {
        let mut c = self.c;
        for v in c.iter_mut() {
            *v = v.conj();
        }
        Series { c }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut c = self.c;
        for v in c.iter_mut() {
            *v *= s;
        }
        Series { c }
    }

    pub fn recip(&self) -> Self {
        let a0 = self.c[0];
        let inv = a0.inv();
        let mut b = [ZERO; JET];
        b[0] = inv;
        for k in 1..JET {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.c[j] * b[k - j];
            }
            b[k] = -acc * inv;
        }
        Series { c: b }
    }

    pub fn exp(&self) -> Self {
        let mut b = [ZERO; JET];
        b[0] = self.c[0].exp();
        for k in 1..JET {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.c[j] * b[k - j] * j as f64;
            }
            b[k] = acc / k as f64;
        }
        Series { c: b }
    }

    /// `self^s` on the principal branch of the leading coefficient.
    ///
    /// Uses `k a0 b_k = sum_{j=1..k} ((s+1) j - k) a_j b_{k-j}`, which follows
    /// from `a b' = s a' b`.
    pub fn powc(&self, s: Complex64) -> Self {
        let a0 = self.c[0];
        let mut b = [ZERO; JET];
        b[0] = a0.powc(s);
        for k in 1..JET {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.c[j] * b[k - j] * ((s + 1.0) * j as f64 - k as f64);
            }
            b[k] = acc / (a0 * k as f64);
        }
        Series { c: b }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl Add for Series {
    type Output = Series;
    fn add(mut self, rhs: Series) -> Series {
        for k in 0..JET {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(mut self, rhs: Series) -> Series {
        for k in 0..JET {
            self.c[k] -= rhs.c[k];
        }
        self
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        let mut c = [ZERO; JET];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in rhs.c[..JET - i].iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Series { c }
    }
}

impl Div for Series {
    type Output = Series;
    fn div(self, rhs: Series) -> Series {
        self * rhs.recip()
    }
}

impl Add<Complex64> for Series {
    type Output = Series;
    fn add(mut self, rhs: Complex64) -> Series {
        self.c[0] += rhs;
        self
    }
}

impl Sub<Complex64> for Series {
    type Output = Series;
    fn sub(mut self, rhs: Complex64) -> Series {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<Complex64> for Series {
    type Output = Series;
    fn mul(self, rhs: Complex64) -> Series {
        self.scale(rhs)
    }
}

impl Mul<f64> for Series {
    type Output = Series;
    fn mul(self, rhs: f64) -> Series {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

/// Minimal ring interface shared by [`Complex64`] and [`Series`], so that
/// polynomial recurrences are written once.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<Complex64, Output = Self>
    + Add<Complex64, Output = Self>
{
    fn from_complex(c: Complex64) -> Self;
}

impl Scalar for Complex64 {
    fn from_complex(c: Complex64) -> Self {
        c
    }
}

impl Scalar for Series {
    fn from_complex(c: Complex64) -> Self {
        Series::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exp_of_variable_has_factorial_coefficients() {
        let s = Series::variable(c(0.0, 0.0)).exp();
        let mut fact = 1.0;
        for k in 0..JET {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((s.coefficients()[k] - c(1.0 / fact, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn powc_matches_binomial_series() {
        // (1 + t)^s = sum binom(s, k) t^k at t0 = 0
        let s = c(0.7, 0.2);
        let p = Series::variable(c(1.0, 0.0)).powc(s);
        let mut binom = c(1.0, 0.0);
        for k in 0..JET {
            assert!((p.coefficients()[k] - binom).norm() < 1e-14, "k={k}");
            binom = binom * (s - k as f64) / (k + 1) as f64;
        }
    }

    #[test]
    fn recip_times_self_is_one() {
        let z = Series::variable(c(0.3, -1.0));
        let f = z * z + z.exp();
        let one = f * f.recip();
        assert!((one.value() - c(1.0, 0.0)).norm() < 1e-14);
        for k in 1..JET {
            assert!(one.coefficients()[k].norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_cube() {
        let x0 = c(1.5, 0.0);
        let z = Series::variable(x0);
        let f = z * z * z;
        assert!((f.derivative_value(1) - x0 * x0 * 3.0).norm() < 1e-14);
        assert!((f.derivative_value(2) - x0 * 6.0).norm() < 1e-14);
        assert!((f.derivative_value(3) - c(6.0, 0.0)).norm() < 1e-14);
        assert!(f.derivative_value(4).norm() < 1e-14);
        assert!((f.derivative().value() - f.derivative_value(1)).norm() < 1e-14);
    }

    #[test]
    fn powc_of_gaussian_argument_matches_chain_rule() {
        // g(x) = (x - i)^s, g' = s (x - i)^(s-1)
        let s = c(1.8, 0.0);
        let x0 = 0.4;
        let z0 = c(x0, -1.0);
        let g = Series::variable(z0).powc(s);
        let expect = s * z0.powc(s - 1.0);
        assert!((g.derivative_value(1) - expect).norm() < 1e-14);
        let expect2 = s * (s - 1.0) * z0.powc(s - 2.0);
        assert!((g.derivative_value(2) - expect2).norm() < 1e-13);
    }
}
