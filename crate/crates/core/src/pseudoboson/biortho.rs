use num_complex::Complex64;

use crate::contour::{inner_product, ContourGrid, SampledFunction};
use crate::eigensolver::hermitian_eigen;
use crate::error::{invalid, Error, Result};
use crate::CMatrix;

/// Default bound on `max |<Phi_n, eta_m> - delta_nm|`.
pub const BIORTHO_TOLERANCE: f64 = 1e-8;

/// Truncated biorthogonal families `Phi_0..Phi_{N-1}` and `eta_0..eta_{N-1}`
/// on a common grid.
#[derive(Debug, Clone)]
pub struct BiorthogonalSystem {
    phi: Vec<SampledFunction>,
    eta: Vec<SampledFunction>,
    grid: ContourGrid,
    normalizations: Vec<Complex64>,
    deviation: f64,
}

impl BiorthogonalSystem {
    /// Validates `<Phi_n, eta_m> = delta_nm` to [`BIORTHO_TOLERANCE`].
    pub fn new(
        phi: Vec<SampledFunction>,
        eta: Vec<SampledFunction>,
        grid: ContourGrid,
        normalizations: Vec<Complex64>,
    ) -> Result<Self> {
        Self::with_tolerance(phi, eta, grid, normalizations, BIORTHO_TOLERANCE)
    }

    pub fn with_tolerance(
        phi: Vec<SampledFunction>,
        eta: Vec<SampledFunction>,
        grid: ContourGrid,
        normalizations: Vec<Complex64>,
        tolerance: f64,
    ) -> Result<Self> {
        if phi.is_empty() || phi.len() != eta.len() {
            return Err(invalid(format!(
                "families must be non-empty and equally long, got {} and {}",
                phi.len(),
                eta.len()
            )));
        }
        if normalizations.len() != phi.len() {
            return Err(invalid("one normalization constant per level is required"));
        }
        if phi.iter().chain(&eta).any(|f| f.len() != grid.count()) {
            return Err(invalid("samples are not aligned with the grid"));
        }
        let mut sys = BiorthogonalSystem {
            phi,
            eta,
            grid,
            normalizations,
            deviation: 0.0,
        };
        let b = biorthogonality_matrix(&sys);
        let deviation = deviation_from_identity(&b);
        if !(deviation <= tolerance) {
            return Err(Error::NotBiorthogonal {
                deviation,
                tolerance,
            });
        }
        sys.deviation = deviation;
        Ok(sys)
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn phi(&self) -> &[SampledFunction] {
        &self.phi
    }

    pub fn eta(&self) -> &[SampledFunction] {
        &self.eta
    }

    pub fn grid(&self) -> &ContourGrid {
        &self.grid
    }

    pub fn normalizations(&self) -> &[Complex64] {
        &self.normalizations
    }

    /// `max |<Phi_n, eta_m> - delta_nm|` measured at construction.
    pub fn deviation(&self) -> f64 {
        self.deviation
    }

    /// The system with the roles of the two families exchanged.
    pub fn swapped(&self) -> Self {
        BiorthogonalSystem {
            phi: self.eta.clone(),
            eta: self.phi.clone(),
            grid: self.grid.clone(),
            normalizations: self.normalizations.clone(),
            deviation: self.deviation,
        }
    }

    /// The first `n` levels.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(invalid(format!("cannot truncate {} levels to {n}", self.len())));
        }
        Ok(BiorthogonalSystem {
            phi: self.phi[..n].to_vec(),
            eta: self.eta[..n].to_vec(),
            grid: self.grid.clone(),
            normalizations: self.normalizations[..n].to_vec(),
            deviation: self.deviation,
        })
    }

    /// Replaces `eta` by the unique dual family inside the span of `Phi`,
    /// `eta_n = sum_k Phi_k (g_phi^{-1})_{kn}`.
    ///
    /// In truncation the model's own dual family spans a different subspace,
    /// so the Gram matrices of `Phi` and `eta` are only inverse to each other
    /// for this span dual.
    pub fn span_dual(&self) -> Result<Self> {
        let g = gram(&self.phi, &self.grid)?;
        check_positive(&g)?;
        let chol = g
            .clone()
            .cholesky()
            .ok_or(Error::DegenerateGram { min_eigenvalue: 0.0 })?;
        let ginv = chol.inverse();
        let eta = combine(&self.phi, &ginv);
        BiorthogonalSystem::with_tolerance(
            self.phi.clone(),
            eta,
            self.grid.clone(),
            self.normalizations.clone(),
            f64::INFINITY,
        )
    }
}

/// `sum_k family_k c_{kn}` for each column `n` of `c`.
pub fn combine(family: &[SampledFunction], c: &CMatrix) -> Vec<SampledFunction> {
    let m = family.first().map_or(0, |f| f.len());
    (0..c.ncols())
        .map(|n| {
            let mut out = vec![Complex64::new(0.0, 0.0); m];
            for (k, f) in family.iter().enumerate() {
                let ck = c[(k, n)];
                if ck == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (o, v) in out.iter_mut().zip(f.values()) {
                    *o += v * ck;
                }
            }
            SampledFunction::new(out)
        })
        .collect()
}

/// Coordinate matrices of the metric operators: `g_phi = <Phi_m, Phi_n>`
/// represents `S_Phi`, `g_eta = <eta_m, eta_n>` represents `S_eta`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramPair {
    pub g_phi: CMatrix,
    pub g_eta: CMatrix,
}

/// Both Gram matrices, checked for positive definiteness.
pub fn gram_matrices(sys: &BiorthogonalSystem) -> Result<GramPair> {
    let g_phi = gram(&sys.phi, &sys.grid)?;
    let g_eta = gram(&sys.eta, &sys.grid)?;
    check_positive(&g_phi)?;
    check_positive(&g_eta)?;
    Ok(GramPair { g_phi, g_eta })
}

/// `B_nm = <Phi_n, eta_m>`.
pub fn biorthogonality_matrix(sys: &BiorthogonalSystem) -> CMatrix {
    let n = sys.len();
    CMatrix::from_fn(n, n, |i, j| {
        inner_product(&sys.phi[i], &sys.eta[j], &sys.grid).expect("aligned at construction")
    })
}

/// `max |B_ij - delta_ij|`.
pub fn deviation_from_identity(b: &CMatrix) -> f64 {
    let mut d: f64 = 0.0;
    for j in 0..b.ncols() {
        for i in 0..b.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            d = d.max((b[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    d
}

/// Hermitian Gram matrix of a family.
pub fn gram(family: &[SampledFunction], grid: &ContourGrid) -> Result<CMatrix> {
    let n = family.len();
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = inner_product(&family[i], &family[j], grid)?;
            if i == j {
                g[(i, i)] = Complex64::new(v.re, 0.0);
            } else {
                g[(i, j)] = v;
                g[(j, i)] = v.conj();
            }
        }
    }
    Ok(g)
}

/// Spectral condition number `lambda_max / lambda_min` of a Hermitian
/// positive-definite matrix.
pub fn condition_number(g: &CMatrix) -> Result<f64> {
    let (values, _) = hermitian_eigen(g)?;
    let min = values.first().copied().unwrap_or(1.0);
    let max = values.last().copied().unwrap_or(1.0);
    if min <= 0.0 {
        return Err(Error::DegenerateGram { min_eigenvalue: min });
    }
    Ok(max / min)
}

fn check_positive(g: &CMatrix) -> Result<()> {
    let (values, _) = hermitian_eigen(g)?;
    match values.first() {
        Some(&min) if min <= 0.0 => Err(Error::DegenerateGram { min_eigenvalue: min }),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{make_grid, GridScheme};

    /// Normalized Hermite functions, orthonormal on the real line.
    pub(crate) fn hermite_family(n: usize, grid: &ContourGrid) -> Vec<SampledFunction> {
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(grid.sample(|x| {
                let mut h0 = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
                let mut h1 = 2f64.sqrt() * x * h0;
                if k == 0 {
                    return Complex64::new(h0, 0.0);
                }
                for j in 1..k {
                    let h2 = ((2.0 / (j as f64 + 1.0)).sqrt()) * x * h1
                        - (j as f64 / (j as f64 + 1.0)).sqrt() * h0;
                    h0 = h1;
                    h1 = h2;
                }
                Complex64::new(h1, 0.0)
            }));
        }
        out
    }

    fn self_dual(n: usize) -> BiorthogonalSystem {
        let grid = make_grid(12.0, 400, GridScheme::GaussLegendre).unwrap();
        let f = hermite_family(n, &grid);
        BiorthogonalSystem::new(f.clone(), f, grid, vec![Complex64::new(1.0, 0.0); n]).unwrap()
    }

    #[test]
    fn orthonormal_family_has_identity_grams() {
        let sys = self_dual(6);
        let gp = gram_matrices(&sys).unwrap();
        let id = CMatrix::identity(6, 6);
        assert!((&gp.g_phi - &id).norm() < 1e-12);
        assert!((&gp.g_eta - &id).norm() < 1e-12);
        assert!(deviation_from_identity(&biorthogonality_matrix(&sys)) < 1e-12);
        assert!((condition_number(&gp.g_phi).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_biorthogonal_input() {
        let grid = make_grid(12.0, 400, GridScheme::GaussLegendre).unwrap();
        let f = hermite_family(3, &grid);
        let mut g = f.clone();
        g[1] = g[1].scale(Complex64::new(2.0, 0.0));
        let err = BiorthogonalSystem::new(f, g, grid, vec![Complex64::new(1.0, 0.0); 3]);
        assert!(matches!(err, Err(Error::NotBiorthogonal { .. })));
    }

    #[test]
    fn span_dual_inverts_the_gram() {
        let grid = make_grid(12.0, 400, GridScheme::GaussLegendre).unwrap();
        let h = hermite_family(5, &grid);
        // a non-orthogonal but independent family
        let mix = CMatrix::from_fn(5, 5, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else if i < j {
                Complex64::new(0.3, 0.1 * (i + j) as f64)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let phi = combine(&h, &mix);
        let dual = BiorthogonalSystem::with_tolerance(
            phi.clone(),
            phi.clone(),
            grid,
            vec![Complex64::new(1.0, 0.0); 5],
            f64::INFINITY,
        )
        .unwrap()
        .span_dual()
        .unwrap();
        assert!(dual.deviation() < 1e-12);
        let gp = gram_matrices(&dual).unwrap();
        let prod = &gp.g_phi * &gp.g_eta;
        assert!((prod - CMatrix::identity(5, 5)).norm() < 1e-11);
    }
}
