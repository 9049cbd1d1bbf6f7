//! The cubic superpotential `W^(±)(x) = ±[1/(x ± iε) - i(x ± iε)²]` and its
//! antilinear refactorization.

use num_complex::Complex64;

use super::field::{DerivativeMode, Field};
use super::ladder_ops::{apply_factor, FactorKind};
use crate::contour::{norm, relative_residual, ContourGrid};
use crate::error::{invalid, Result};
use crate::special::Series;
use crate::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicParams {
    epsilon_shift: f64,
}

impl CubicParams {
    pub fn new(epsilon_shift: f64) -> Result<Self> {
        if !(epsilon_shift.is_finite() && epsilon_shift > 0.0) {
            return Err(invalid(format!("epsilon shift must be positive, got {epsilon_shift}")));
        }
        Ok(CubicParams { epsilon_shift })
    }

    pub fn epsilon_shift(&self) -> f64 {
        self.epsilon_shift
    }
}

fn check_sign(sign: i32) -> Result<f64> {
    match sign {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(invalid(format!("branch sign must be +1 or -1, got {sign}"))),
    }
}

fn series(s: f64, eps: f64, x: Series) -> Series {
    let u = x + Complex64::new(0.0, s * eps);
    (u.recip() - (u * u).scale(Complex64::new(0.0, 1.0))) * s
}

pub fn cubic_superpotential(sign: i32, eps_shift: f64, x: f64) -> Result<Complex64> {
    let s = check_sign(sign)?;
    CubicParams::new(eps_shift)?;
    Ok(series(s, eps_shift, Series::constant(Complex64::new(x, 0.0))).value())
}

pub fn cubic_superpotential_field(
    sign: i32,
    eps_shift: f64,
    grid: &ContourGrid,
    mode: DerivativeMode,
) -> Result<Field> {
    let s = check_sign(sign)?;
    CubicParams::new(eps_shift)?;
    Ok(Field::from_fn(grid, mode, |x| series(s, eps_shift, x)))
}

/// `M^(+) = B^(+) A^(+)` against `T A^(-) B^(-) T`, where `T` is pointwise
/// conjugation.
pub fn refactorization_residual(
    eps_shift: f64,
    tests: &[Field],
    grid: &ContourGrid,
    mode: DerivativeMode,
) -> Result<VerificationReport> {
    let wp = cubic_superpotential_field(1, eps_shift, grid, DerivativeMode::Analytic)?;
    let wm = cubic_superpotential_field(-1, eps_shift, grid, DerivativeMode::Analytic)?;
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for f in tests {
        let f = f.in_mode(mode)?;
        if norm(&f.samples(), grid)? == 0.0 {
            skipped += 1;
            continue;
        }
        let lhs = apply_factor(FactorKind::B, &wp, &apply_factor(FactorKind::A, &wp, &f, grid)?, grid)?;
        let tf = f.conj();
        let rhs = apply_factor(FactorKind::A, &wm, &apply_factor(FactorKind::B, &wm, &tf, grid)?, grid)?.conj();
        worst = worst.max(relative_residual(&lhs.samples(), &rhs.samples(), grid)?);
    }
    let tol = match mode {
        DerivativeMode::Analytic => 1e-6,
        DerivativeMode::Fd => 1e-4,
    };
    let mut report = VerificationReport::new("cubic_refactorization", worst, tol)
        .with_param("epsilon_shift", eps_shift)
        .with_param("derivative_mode", mode.name())
        .with_param("test_functions", tests.len());
    if skipped > 0 {
        report = report.with_note(format!("warning: {skipped} zero test function(s) skipped"));
    }
    Ok(report)
}

/// Conjugation structure of the two branches at the given points:
/// `conj(W^(-)(x)) = W^(+)(x) - 2/(x + iε)` and
/// `conj(W^(±)(-x)) = -W^(±)(x)`.
///
/// The gap of the naive relation `conj(W^(+)) = -W^(-)` is recorded, not
/// asserted.
pub fn conjugation_residual(eps_shift: f64, points: &[f64]) -> Result<VerificationReport> {
    CubicParams::new(eps_shift)?;
    if points.is_empty() {
        return Err(invalid("no sample points"));
    }
    let mut worst: f64 = 0.0;
    let mut naive: f64 = 0.0;
    for &x in points {
        let wp = cubic_superpotential(1, eps_shift, x)?;
        let wm = cubic_superpotential(-1, eps_shift, x)?;
        let u = Complex64::new(x, eps_shift);
        let scale = wp.norm().max(wm.norm()).max(1.0);
        let gap = (wm.conj() - (wp - u.inv() * 2.0)).norm();
        let pt_p = (cubic_superpotential(1, eps_shift, -x)?.conj() + wp).norm();
        let pt_m = (cubic_superpotential(-1, eps_shift, -x)?.conj() + wm).norm();
        worst = worst.max(gap.max(pt_p).max(pt_m) / scale);
        naive = naive.max((wp.conj() + wm).norm() / scale);
    }
    Ok(VerificationReport::new("cubic_conjugation", worst, 1e-12)
        .with_param("epsilon_shift", eps_shift)
        .with_param("points", points.len())
        .with_note(format!("relative gap of conj(W+) = -W-: {naive:.3e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{make_grid, GridScheme};
    use crate::models::ladder_ops::gaussian_test_functions;

    #[test]
    fn values() {
        assert!(cubic_superpotential(1, 1.0, 0.0).unwrap().norm() < 1e-15);
        let wm = cubic_superpotential(-1, 1.0, 0.0).unwrap();
        assert!((wm - Complex64::new(0.0, -2.0)).norm() < 1e-15);
        // leading growth -+ i x²
        let x = 1e4;
        let w = cubic_superpotential(1, 1.0, x).unwrap();
        assert!((w / (x * x) + Complex64::new(0.0, 1.0)).norm() < 1e-3);
        assert!(cubic_superpotential(2, 1.0, 0.0).is_err());
        assert!(cubic_superpotential(1, 0.0, 0.0).is_err());
    }

    #[test]
    fn conjugation_relations() {
        let pts: Vec<f64> = (0..100).map(|k| -5.0 + 0.1 * k as f64 + 0.013).collect();
        let r = conjugation_residual(1.0, &pts).unwrap();
        assert!(r.pass, "{r}");
        assert!(r.metadata[0].contains("e"));
    }

    #[test]
    fn refactorization_holds() {
        let g = make_grid(10.0, 800, GridScheme::GaussLegendre).unwrap();
        let tests = gaussian_test_functions(&g, DerivativeMode::Analytic);
        for &e in &[1.0, 0.3, 2.5] {
            let r = refactorization_residual(e, &tests, &g, DerivativeMode::Analytic).unwrap();
            assert!(r.residual < 1e-12, "{r}");
        }
        let u = make_grid(10.0, 1000, GridScheme::Uniform).unwrap();
        let tu = gaussian_test_functions(&u, DerivativeMode::Fd);
        assert!(refactorization_residual(1.0, &tu, &u, DerivativeMode::Fd).unwrap().pass);
    }

    #[test]
    fn conjugation_twice_is_identity() {
        let g = make_grid(6.0, 64, GridScheme::GaussLegendre).unwrap();
        let f = Field::from_fn(&g, DerivativeMode::Analytic, |x| {
            (x * x * -0.5).exp() * Complex64::new(1.0, 2.0)
        });
        assert_eq!(f.conj().conj(), f);
    }
}
