//! Finite-difference spectrum of the Kratzer Hamiltonian and eigenfunction
//! residuals of the closed-form family.

use num_complex::Complex64;

use super::field::{DerivativeMode, Field};
use super::kratzer::{kratzer_energy, kratzer_potential, raw_eigenfunction, KratzerParams};
use super::ladder_ops::SecondOrderOp;
use crate::contour::{relative_residual, ContourGrid};
use crate::eigensolver::{discretize_schrodinger, general_complex_eigen};
use crate::error::Result;
use crate::VerificationReport;

/// Absolute eigenvalue tolerance of the finite-difference spectrum.
pub const SPECTRUM_TOLERANCE: f64 = 1e-3;

/// Eigenvalues of the discretized `-d² + V` on a uniform grid.
pub fn kratzer_spectrum(p: &KratzerParams, grid: &ContourGrid) -> Result<Vec<Complex64>> {
    let h = discretize_schrodinger(|x| kratzer_potential(x, p), grid)?;
    Ok(general_complex_eigen(&h)?.eigenvalues)
}

/// For each quasi-parity and `n < levels`, the distance from `4n + 2 + 2q alpha`
/// to the nearest computed eigenvalue.
pub fn spectrum_reports(p: &KratzerParams, grid: &ContourGrid, levels: usize) -> Result<Vec<VerificationReport>> {
    let values = kratzer_spectrum(p, grid)?;
    let mut out = Vec::with_capacity(2 * levels);
    for q in [1, -1] {
        for n in 0..levels {
            let target = kratzer_energy(q, n, p.alpha());
            let nearest = values
                .iter()
                .copied()
                .min_by(|a, b| {
                    let da = (a - target).norm();
                    let db = (b - target).norm();
                    da.total_cmp(&db)
                })
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            out.push(
                VerificationReport::new("spectrum", (nearest - target).norm(), SPECTRUM_TOLERANCE)
                    .with_param("q", q as i64)
                    .with_param("n", n)
                    .with_param("alpha", p.alpha())
                    .with_param("c", p.c())
                    .with_param("grid_points", grid.count())
                    .with_note(format!("computed {:.12}{:+.3e}i, target {target:.12}", nearest.re, nearest.im)),
            );
        }
    }
    Ok(out)
}

/// `H Phi_n = E_n Phi_n` and `H† conj(Phi_n) = E_n conj(Phi_n)` for the
/// family of `p`, `n < levels`.
pub fn eigenfunction_reports(
    p: &KratzerParams,
    grid: &ContourGrid,
    mode: DerivativeMode,
    levels: usize,
) -> Result<Vec<VerificationReport>> {
    p.check_normalizable()?;
    let h = SecondOrderOp::hamiltonian(p.alpha(), p.c(), grid);
    let hd = h.adjoint();
    let tol = match mode {
        DerivativeMode::Analytic => 1e-6,
        DerivativeMode::Fd => 1e-4,
    };
    let (mut direct, mut dual) = (0.0f64, 0.0f64);
    for n in 0..levels {
        let phi = Field::from_fn(grid, mode, |x| raw_eigenfunction(n, p.gamma(), p.c(), x));
        let e = Complex64::new(kratzer_energy(p.q(), n, p.alpha()), 0.0);
        let lhs = h.apply(&phi, grid)?.samples();
        direct = direct.max(relative_residual(&lhs, &phi.samples().scale(e), grid)?);
        let eta = phi.conj();
        let lhs = hd.apply(&eta, grid)?.samples();
        dual = dual.max(relative_residual(&lhs, &eta.samples().scale(e), grid)?);
    }
    Ok([("eigenfunction", direct), ("dual_eigenfunction", dual)]
        .into_iter()
        .map(|(name, r)| {
            VerificationReport::new(name, r, tol)
                .with_param("q", p.q() as i64)
                .with_param("alpha", p.alpha())
                .with_param("c", p.c())
                .with_param("levels", levels)
                .with_param("derivative_mode", mode.name())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{make_grid, GridScheme};

    #[test]
    fn small_grid_spectrum_is_close() {
        // coarse grid: only the ground levels are resolved
        let p = KratzerParams::new(1.3, 1.0, 1).unwrap();
        let g = make_grid(8.0, 200, GridScheme::Uniform).unwrap();
        let r = spectrum_reports(&p, &g, 1).unwrap();
        assert_eq!(r.len(), 2);
        for rep in &r {
            assert!(rep.residual < 1e-2, "{rep}");
        }
    }

    #[test]
    fn eigenfunctions_in_both_modes() {
        for &c in &[0.5, 1.0, 2.0] {
            let p = KratzerParams::new(1.3, c, 1).unwrap();
            let g = make_grid(12.0, 1200, GridScheme::GaussLegendre).unwrap();
            for r in eigenfunction_reports(&p, &g, DerivativeMode::Analytic, 5).unwrap() {
                assert!(r.residual < 1e-10, "{r}");
            }
            let u = make_grid(12.0, 1200, GridScheme::Uniform).unwrap();
            for r in eigenfunction_reports(&p, &u, DerivativeMode::Fd, 5).unwrap() {
                assert!(r.pass, "{r}");
            }
        }
    }
}
