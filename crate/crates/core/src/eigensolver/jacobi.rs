use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::CMatrix;

const MAX_SWEEPS: usize = 60;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns ascending eigenvalues and the unitary matrix whose
/// columns are the matching eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = square(m)?;
    let scale = m.norm();
    if !scale.is_finite() {
        return Err(invalid("matrix has non-finite entries"));
    }
    let skew = (m - m.adjoint()).norm();
    if scale > 0.0 && skew / scale >= 1e-10 {
        return Err(invalid(format!(
            "matrix is not Hermitian: relative skew part {:e}",
            skew / scale
        )));
    }
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let mut a = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut v = CMatrix::identity(n, n);
    let target = f64::EPSILON * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::Convergence {
            iterations: MAX_SWEEPS,
            partial: Vec::new(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Positive square root of a Hermitian positive-definite matrix.
pub fn sqrt_pd(m: &CMatrix) -> Result<CMatrix> {
    Ok(pd_roots(m)?.sqrt)
}

/// `m^{1/2}` and `m^{-1/2}` from one eigendecomposition.
#[derive(Debug, Clone)]
pub struct PdRoots {
    pub sqrt: CMatrix,
    pub inv_sqrt: CMatrix,
    pub eigenvalues: Vec<f64>,
}

pub fn pd_roots(m: &CMatrix) -> Result<PdRoots> {
    let (values, vectors) = hermitian_eigen(m)?;
    if let Some(&min) = values.first() {
        if min <= 0.0 {
            return Err(Error::DegenerateGram { min_eigenvalue: min });
        }
    }
    let sqrt = spectral_function(&values, &vectors, f64::sqrt);
    let inv_sqrt = spectral_function(&values, &vectors, |x| 1.0 / x.sqrt());
    Ok(PdRoots {
        sqrt,
        inv_sqrt,
        eigenvalues: values,
    })
}

/// `V diag(f(values)) V^H`.
fn spectral_function(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let mut scaled = vectors.clone();
    for (j, &lam) in values.iter().enumerate() {
        let s = Complex64::new(f(lam), 0.0);
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= s;
        }
    }
    let out = &scaled * vectors.adjoint();
    (&out + out.adjoint()) * Complex64::new(0.5, 0.0)
}

fn square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(invalid(format!(
            "matrix must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi step annihilating `a[p][q]`: a phase rotation makes the pivot
/// real, then a real rotation zeroes it.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    // signum(0) = 1, so the equal-diagonal case rotates by pi/4
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = phase.conj() * -s;
    let gqq = phase.conj() * c;

    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn diagonal_input() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![re(3.0), re(1.0), re(2.0)]));
        let (vals, vecs) = hermitian_eigen(&m).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
        assert_eq!(vecs[(1, 0)], re(1.0));
        assert_eq!(vecs[(2, 1)], re(1.0));
        assert_eq!(vecs[(0, 2)], re(1.0));
    }

    #[test]
    fn two_by_two() {
        let m = CMatrix::from_row_slice(2, 2, &[re(2.0), re(1.0), re(1.0), re(2.0)]);
        let (vals, _) = hermitian_eigen(&m).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-15);
        assert!((vals[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn complex_pivot() {
        let i = Complex64::new(0.0, 1.0);
        let m = CMatrix::from_row_slice(2, 2, &[re(1.0), i, -i, re(1.0)]);
        let (vals, vecs) = hermitian_eigen(&m).unwrap();
        assert!((vals[0]).abs() < 1e-15 && (vals[1] - 2.0).abs() < 1e-15);
        let recon = &vecs * CMatrix::from_diagonal(&vals.iter().map(|&x| re(x)).collect::<Vec<_>>().into()) * vecs.adjoint();
        assert!((recon - m).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = CMatrix::from_row_slice(2, 2, &[re(1.0), re(2.0), re(0.0), re(1.0)]);
        assert!(matches!(hermitian_eigen(&m), Err(Error::InvalidArgument(_))));
        assert!(hermitian_eigen(&CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn square_roots() {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![re(4.0), re(9.0)]));
        let r = sqrt_pd(&d).unwrap();
        assert!((r[(0, 0)] - re(2.0)).norm() < 1e-15);
        assert!((r[(1, 1)] - re(3.0)).norm() < 1e-15);
        assert!(r[(0, 1)].norm() < 1e-15);
        let id = CMatrix::identity(3, 3);
        assert!((sqrt_pd(&id).unwrap() - &id).norm() < 1e-15);
        let neg = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![re(1.0), re(-1.0)]));
        assert!(matches!(sqrt_pd(&neg), Err(Error::DegenerateGram { .. })));
    }
}
