use num_complex::Complex64;

use super::BiorthogonalSystem;
use crate::contour::{ContourGrid, SampledFunction};
use crate::error::{invalid, Result};
use crate::CMatrix;

/// A dense operator on grid samples.
///
/// The `L²` adjoint on a weighted grid is `A‡ = W⁻¹ Aᴴ W`; the plain
/// conjugate transpose is only an adjoint when all weights agree.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOperator {
    matrix: CMatrix,
    grid: ContourGrid,
}

impl GridOperator {
    pub fn new(matrix: CMatrix, grid: ContourGrid) -> Result<Self> {
        let m = grid.count();
        if matrix.nrows() != m || matrix.ncols() != m {
            return Err(invalid(format!(
                "operator is {}x{} but the grid has {m} nodes",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(GridOperator { matrix, grid })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn grid(&self) -> &ContourGrid {
        &self.grid
    }

    pub fn apply(&self, f: &SampledFunction) -> SampledFunction {
        let m = self.grid.count();
        assert_eq!(f.len(), m, "sample length does not match the operator");
        let v = f.values();
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        // column-major storage: accumulate column by column
        for (j, &vj) in v.iter().enumerate() {
            if vj == Complex64::new(0.0, 0.0) {
                continue;
            }
            let col = self.matrix.column(j);
            for (o, a) in out.iter_mut().zip(col.iter()) {
                *o += a * vj;
            }
        }
        SampledFunction::new(out)
    }

    /// `W⁻¹ Aᴴ W`.
    pub fn adjoint(&self) -> GridOperator {
        let w = self.grid.weights();
        let m = w.len();
        let matrix = CMatrix::from_fn(m, m, |i, j| self.matrix[(j, i)].conj() * (w[j] / w[i]));
        GridOperator {
            matrix,
            grid: self.grid.clone(),
        }
    }

    pub fn compose(&self, other: &GridOperator) -> GridOperator {
        GridOperator {
            matrix: &self.matrix * &other.matrix,
            grid: self.grid.clone(),
        }
    }

    pub fn sub(&self, other: &GridOperator) -> GridOperator {
        GridOperator {
            matrix: &self.matrix - &other.matrix,
            grid: self.grid.clone(),
        }
    }

    /// Hilbert-Schmidt norm for the weighted inner product,
    /// `||W^{1/2} A W^{-1/2}||_F`.
    pub fn norm(&self) -> f64 {
        let w = self.grid.weights();
        let m = w.len();
        let mut s = 0.0;
        for j in 0..m {
            for i in 0..m {
                s += self.matrix[(i, j)].norm_sqr() * w[i] / w[j];
            }
        }
        s.sqrt()
    }
}

/// `sum_n c_n |left_n><right_n|` on the grid, with matrix entries
/// `c_n left_n[i] conj(right_n[j]) w_j`.
pub fn dyadic_operator(
    coeffs: &[Complex64],
    left: &[SampledFunction],
    right: &[SampledFunction],
    grid: &ContourGrid,
) -> Result<GridOperator> {
    if coeffs.len() != left.len() || coeffs.len() != right.len() {
        return Err(invalid(format!(
            "dyadic sum needs equal lengths, got {} coefficients, {} left and {} right",
            coeffs.len(),
            left.len(),
            right.len()
        )));
    }
    let m = grid.count();
    if left.iter().chain(right).any(|f| f.len() != m) {
        return Err(invalid("dyadic factors are not aligned with the grid"));
    }
    let w = grid.weights();
    let mut matrix = CMatrix::zeros(m, m);
    let mut row = vec![Complex64::new(0.0, 0.0); m];
    for ((c, l), r) in coeffs.iter().zip(left).zip(right) {
        for ((slot, rv), wj) in row.iter_mut().zip(r.values()).zip(w) {
            *slot = rv.conj() * (c * wj);
        }
        for (j, &rj) in row.iter().enumerate() {
            let mut col = matrix.column_mut(j);
            for (a, lv) in col.iter_mut().zip(l.values()) {
                *a += lv * rj;
            }
        }
    }
    GridOperator::new(matrix, grid.clone())
}

/// `X = sum_n |Phi_n><eta_n|`, an oblique projector onto the span of `Phi`.
pub fn oblique_projector(sys: &BiorthogonalSystem) -> Result<GridOperator> {
    let ones = vec![Complex64::new(1.0, 0.0); sys.len()];
    dyadic_operator(&ones, sys.phi(), sys.eta(), sys.grid())
}
