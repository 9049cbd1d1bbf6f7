use num_complex::Complex64;

use super::EpsilonSequence;
use crate::error::{invalid, Result};
use crate::CMatrix;

/// Lowering and raising matrices in the coordinates of `Phi_0 .. Phi_{N-1}`.
///
/// `a` has `sqrt(eps_n)` at `(n-1, n)` and `b` has `sqrt(eps_{n+1})` at
/// `(n+1, n)`. Raising out of the span is dropped, so the last column of `b`
/// is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedLadder {
    pub a: CMatrix,
    pub b: CMatrix,
    pub eps: EpsilonSequence,
}

impl TruncatedLadder {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }
}

pub fn build_ladder_matrices(eps: &EpsilonSequence, n: usize) -> Result<TruncatedLadder> {
    if n < 2 {
        return Err(invalid(format!("truncation must be at least 2, got {n}")));
    }
    if eps.len() < n + 1 {
        return Err(invalid(format!(
            "truncation {n} needs {} epsilon values, got {}",
            n + 1,
            eps.len()
        )));
    }
    let e = eps.values();
    let mut a = CMatrix::zeros(n, n);
    let mut b = CMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new(e[k].sqrt(), 0.0);
        b[(k, k - 1)] = Complex64::new(e[k].sqrt(), 0.0);
    }
    Ok(TruncatedLadder {
        a,
        b,
        eps: eps.clone(),
    })
}

/// `(M_0, N_0) = (b a, a b)`.
///
/// `M_0 = diag(eps_0, ..., eps_{N-1})`. `N_0 = diag(eps_1, ..., eps_{N-1}, 0)`;
/// its last entry is a truncation artifact and must be left out of checks.
pub fn number_operators(ladder: &TruncatedLadder) -> (CMatrix, CMatrix) {
    (&ladder.b * &ladder.a, &ladder.a * &ladder.b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bosonic_ladder() {
        let eps = EpsilonSequence::linear(4);
        let l = build_ladder_matrices(&eps, 3).unwrap();
        assert_eq!(l.a[(0, 1)].re, 1.0);
        assert!((l.a[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(l.b[(1, 0)].re, 1.0);
        assert!(l.b.column(2).iter().all(|v| v.norm() == 0.0));
        let (m0, n0) = number_operators(&l);
        for k in 0..3 {
            assert!((m0[(k, k)].re - k as f64).abs() < 1e-14);
        }
        assert!((n0[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((n0[(1, 1)].re - 2.0).abs() < 1e-14);
        assert_eq!(n0[(2, 2)].re, 0.0);
    }

    #[test]
    fn rejects_short_sequences() {
        let eps = EpsilonSequence::linear(3);
        assert!(build_ladder_matrices(&eps, 3).is_err());
        assert!(build_ladder_matrices(&eps, 1).is_err());
    }
}
