//! Real-line grids on `[-L, L]`, the weighted `L²` pairing and finite
//! differences.
//!
//! The complex shift of the models lives in the sampled functions
//! (`x - ic`), never in the grid: nodes are real.

mod gauss;

pub use gauss::gauss_legendre;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Points per composite Gauss-Legendre panel.
pub const PANEL: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridScheme {
    /// Composite 8-point Gauss-Legendre panels; spectral accuracy for
    /// smooth decaying integrands.
    #[default]
    GaussLegendre,
    /// Midpoint rule on equispaced nodes; required by finite differences.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    extent: f64,
    scheme: GridScheme,
}

impl ContourGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn count(&self) -> usize {
        self.nodes.len()
    }

    pub fn scheme(&self) -> GridScheme {
        self.scheme
    }

    /// Node spacing of a uniform grid.
    pub fn spacing(&self) -> Result<f64> {
        match self.scheme {
            GridScheme::Uniform => Ok(2.0 * self.extent / self.count() as f64),
            GridScheme::GaussLegendre => Err(Error::UnsupportedGrid(
                "finite differences need a uniform grid".into(),
            )),
        }
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> Complex64) -> SampledFunction {
        SampledFunction::new(self.nodes.iter().map(|&x| f(x)).collect())
    }

    fn check(&self, f: &SampledFunction) -> Result<()> {
        if f.len() != self.count() {
            return Err(invalid(format!(
                "sample length {} does not match grid count {}",
                f.len(),
                self.count()
            )));
        }
        Ok(())
    }
}

pub fn make_grid(extent: f64, count: usize, scheme: GridScheme) -> Result<ContourGrid> {
    if !(extent.is_finite() && extent > 0.0) {
        return Err(invalid(format!("grid extent must be positive, got {extent}")));
    }
    if count < 8 {
        return Err(invalid(format!("grid needs at least 8 points, got {count}")));
    }
    let (nodes, weights) = match scheme {
        GridScheme::Uniform => {
            let h = 2.0 * extent / count as f64;
            let nodes = (0..count).map(|i| -extent + (i as f64 + 0.5) * h).collect();
            (nodes, vec![h; count])
        }
        GridScheme::GaussLegendre => {
            if count % PANEL != 0 {
                return Err(invalid(format!(
                    "composite Gauss-Legendre needs a multiple of {PANEL} points, got {count}"
                )));
            }
            let panels = count / PANEL;
            let width = 2.0 * extent / panels as f64;
            let (x, w) = gauss_legendre(PANEL);
            let mut nodes = Vec::with_capacity(count);
            let mut weights = Vec::with_capacity(count);
            for p in 0..panels {
                let mid = -extent + (p as f64 + 0.5) * width;
                for (xk, wk) in x.iter().zip(&w) {
                    nodes.push(mid + 0.5 * width * xk);
                    weights.push(0.5 * width * wk);
                }
            }
            (nodes, weights)
        }
    };
    Ok(ContourGrid {
        nodes,
        weights,
        extent,
        scheme,
    })
}

/// Complex samples `f(x_i)` aligned with a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        SampledFunction { values }
    }

    pub fn zeros(len: usize) -> Self {
        SampledFunction::new(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn conj(&self) -> Self {
        SampledFunction::new(self.values.iter().map(|v| v.conj()).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        SampledFunction::new(self.values.iter().map(|v| v * s).collect())
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: Complex64, other: &SampledFunction) -> Self {
        assert_eq!(self.len(), other.len());
        SampledFunction::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &SampledFunction) -> Self {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &SampledFunction) -> Self {
        assert_eq!(self.len(), other.len());
        SampledFunction::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }
}

/// `sum_i w_i conj(f_i) g_i`, antilinear in the first slot.
pub fn inner_product(f: &SampledFunction, g: &SampledFunction, grid: &ContourGrid) -> Result<Complex64> {
    grid.check(f)?;
    grid.check(g)?;
    Ok(f.values
        .iter()
        .zip(&g.values)
        .zip(&grid.weights)
        .map(|((a, b), w)| a.conj() * b * w)
        .sum())
}

/// Quadrature-weighted `L²` norm.
pub fn norm(f: &SampledFunction, grid: &ContourGrid) -> Result<f64> {
    grid.check(f)?;
    Ok(f.values
        .iter()
        .zip(&grid.weights)
        .map(|(a, w)| a.norm_sqr() * w)
        .sum::<f64>()
        .sqrt())
}

/// `||f - g|| / max(||f||, ||g||, 1e-300)`.
pub fn relative_residual(f: &SampledFunction, g: &SampledFunction, grid: &ContourGrid) -> Result<f64> {
    grid.check(f)?;
    grid.check(g)?;
    let diff = norm(&f.sub(g), grid)?;
    let scale = norm(f, grid)?.max(norm(g, grid)?).max(1e-300);
    Ok(diff / scale)
}

/// Fourth-order finite-difference derivative of order 1 or 2.
///
/// Interior nodes use the centered five-point stencils; the two nodes at
/// each end use one-sided stencils of the same order.
pub fn derivative(f: &SampledFunction, grid: &ContourGrid, order: u8) -> Result<SampledFunction> {
    grid.check(f)?;
    let h = grid.spacing()?;
    let m = grid.count();
    if m < 9 {
        return Err(invalid(format!("finite differences need at least 9 points, got {m}")));
    }
    let v = &f.values;
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    match order {
        1 => {
            let s = 1.0 / (12.0 * h);
            for i in 2..m - 2 {
                out[i] = (v[i - 2] - v[i - 1] * 8.0 + v[i + 1] * 8.0 - v[i + 2]) * s;
            }
            let left0 = [-25.0, 48.0, -36.0, 16.0, -3.0];
            let left1 = [-3.0, -10.0, 18.0, -6.0, 1.0];
            // both left stencils start at node 0; mirrored ones flip sign
            out[0] = stencil(v, 0, &left0, 1.0) * s;
            out[1] = stencil(v, 0, &left1, 1.0) * s;
            out[m - 1] = stencil(v, m - 1, &left0, -1.0) * -s;
            out[m - 2] = stencil(v, m - 1, &left1, -1.0) * -s;
        }
        2 => {
            let s = 1.0 / (12.0 * h * h);
            for i in 2..m - 2 {
                out[i] = (-v[i - 2] + v[i - 1] * 16.0 - v[i] * 30.0 + v[i + 1] * 16.0 - v[i + 2]) * s;
            }
            let left0 = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
            let left1 = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
            out[0] = stencil(v, 0, &left0, 1.0) * s;
            out[1] = stencil(v, 0, &left1, 1.0) * s;
            out[m - 1] = stencil(v, m - 1, &left0, -1.0) * s;
            out[m - 2] = stencil(v, m - 1, &left1, -1.0) * s;
        }
        _ => return Err(invalid(format!("derivative order must be 1 or 2, got {order}"))),
    }
    Ok(SampledFunction::new(out))
}

/// How a differential operator is realized as a dense grid matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DifferentiationScheme {
    /// The stencils of [`derivative`], boundary rows included.
    FiniteDifference,
    /// Periodic sinc (Fourier) differentiation on `[-L, L]`; spectrally
    /// accurate for functions negligible near `±L`. Needs an even count.
    Fourier,
}

/// Dense matrix `D` with `D f = f^(order)` on a uniform grid.
pub fn differentiation_matrix(
    grid: &ContourGrid,
    order: u8,
    scheme: DifferentiationScheme,
) -> Result<crate::CMatrix> {
    grid.spacing()?;
    let m = grid.count();
    if order != 1 && order != 2 {
        return Err(invalid(format!("derivative order must be 1 or 2, got {order}")));
    }
    match scheme {
        DifferentiationScheme::FiniteDifference => {
            let mut d = crate::CMatrix::zeros(m, m);
            let mut unit = SampledFunction::zeros(m);
            for j in 0..m {
                unit.values[j] = Complex64::new(1.0, 0.0);
                let col = derivative(&unit, grid, order)?;
                for (i, v) in col.values.iter().enumerate() {
                    d[(i, j)] = *v;
                }
                unit.values[j] = Complex64::new(0.0, 0.0);
            }
            Ok(d)
        }
        DifferentiationScheme::Fourier => {
            if m % 2 != 0 {
                return Err(invalid(format!(
                    "Fourier differentiation needs an even count, got {m}"
                )));
            }
            // period-2pi formulas, rescaled by pi / L per derivative
            let ht = 2.0 * std::f64::consts::PI / m as f64;
            let scale = std::f64::consts::PI / grid.extent;
            let mut d = crate::CMatrix::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    let k = i as isize - j as isize;
                    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    let v = if order == 1 {
                        if k == 0 {
                            0.0
                        } else {
                            0.5 * sign / (k as f64 * ht / 2.0).tan() * scale
                        }
                    } else if k == 0 {
                        (-std::f64::consts::PI.powi(2) / (3.0 * ht * ht) - 1.0 / 6.0) * scale * scale
                    } else {
                        let s = (k as f64 * ht / 2.0).sin();
                        -0.5 * sign / (s * s) * scale * scale
                    };
                    d[(i, j)] = Complex64::new(v, 0.0);
                }
            }
            Ok(d)
        }
    }
}

/// `sum_k c_k v[base + dir k]`.
fn stencil(v: &[Complex64], base: usize, coeffs: &[f64], dir: f64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let idx = if dir > 0.0 { base + k } else { base - k };
            v[idx] * *c
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn uniform_weights() {
        let g = make_grid(1.0, 16, GridScheme::Uniform).unwrap();
        assert_eq!(g.count(), 16);
        assert!(g.weights().iter().all(|&w| (w - 0.125).abs() < 1e-15));
        assert!((g.nodes()[0] + 0.9375).abs() < 1e-15);
    }

    #[test]
    fn single_panel_is_plain_gauss_legendre() {
        let g = make_grid(1.0, 8, GridScheme::GaussLegendre).unwrap();
        let (x, w) = gauss_legendre(8);
        assert_eq!(g.nodes(), &x[..]);
        assert_eq!(g.weights(), &w[..]);
        assert!((g.weights().iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(make_grid(0.0, 16, GridScheme::Uniform).is_err());
        assert!(make_grid(-1.0, 16, GridScheme::Uniform).is_err());
        assert!(make_grid(1.0, 4, GridScheme::Uniform).is_err());
        assert!(make_grid(1.0, 20, GridScheme::GaussLegendre).is_err());
    }

    #[test]
    fn gaussian_integral() {
        let g = make_grid(12.0, 256, GridScheme::GaussLegendre).unwrap();
        let f = g.sample(|x| re((-x * x / 2.0).exp()));
        let ip = inner_product(&f, &f, &g).unwrap();
        assert!((ip.re - std::f64::consts::PI.sqrt()).abs() < 1e-10);
        let one = g.sample(|_| re(1.0));
        let ip = inner_product(&one, &f, &g).unwrap();
        assert!((ip.re - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn odd_integrand_vanishes() {
        for scheme in [GridScheme::Uniform, GridScheme::GaussLegendre] {
            let g = make_grid(3.0, 64, scheme).unwrap();
            let one = g.sample(|_| re(1.0));
            let x = g.sample(re);
            assert!(inner_product(&one, &x, &g).unwrap().norm() < 1e-14);
            assert!((inner_product(&one, &one, &g).unwrap().re - 6.0).abs() < 1e-13);
        }
    }

    #[test]
    fn misaligned_samples_rejected() {
        let g = make_grid(1.0, 16, GridScheme::Uniform).unwrap();
        let f = SampledFunction::zeros(15);
        assert!(inner_product(&f, &f, &g).is_err());
        assert!(norm(&f, &g).is_err());
    }

    #[test]
    fn first_derivative_exact_on_quadratics() {
        let g = make_grid(2.0, 40, GridScheme::Uniform).unwrap();
        let f = g.sample(|x| re(x * x));
        let d = derivative(&f, &g, 1).unwrap();
        for (x, v) in g.nodes().iter().zip(d.values()) {
            assert!((v - re(2.0 * x)).norm() < 1e-11, "x={x}");
        }
        // the one-sided stencils are exact on quartics
        let f4 = g.sample(|x| re(x.powi(4) - x.powi(3)));
        let d4 = derivative(&f4, &g, 1).unwrap();
        for (x, v) in g.nodes().iter().zip(d4.values()) {
            assert!((v - re(4.0 * x.powi(3) - 3.0 * x * x)).norm() < 1e-9, "x={x}");
        }
        let d2 = derivative(&f4, &g, 2).unwrap();
        for (x, v) in g.nodes().iter().zip(d2.values()) {
            assert!((v - re(12.0 * x * x - 6.0 * x)).norm() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn second_derivative_of_sine() {
        let m = 600;
        let g = make_grid(3.0, m, GridScheme::Uniform).unwrap();
        assert!((g.spacing().unwrap() - 0.01).abs() < 1e-15);
        let f = g.sample(|x| re(x.sin()));
        let d = derivative(&f, &g, 2).unwrap();
        let err = g
            .nodes()
            .iter()
            .zip(d.values())
            .map(|(x, v)| (v + re(x.sin())).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-7, "err={err}");
    }

    #[test]
    fn constant_has_zero_derivative() {
        let g = make_grid(1.0, 32, GridScheme::Uniform).unwrap();
        let f = g.sample(|_| Complex64::new(2.0, -1.0));
        for order in [1, 2] {
            let d = derivative(&f, &g, order).unwrap();
            assert!(d.values().iter().all(|v| v.norm() < 1e-10));
        }
        assert!(derivative(&f, &g, 3).is_err());
    }

    #[test]
    fn derivative_needs_uniform_grid() {
        let g = make_grid(1.0, 32, GridScheme::GaussLegendre).unwrap();
        let f = g.sample(re);
        assert!(matches!(derivative(&f, &g, 1), Err(Error::UnsupportedGrid(_))));
    }

    #[test]
    fn differentiation_matrices() {
        let g = make_grid(10.0, 256, GridScheme::Uniform).unwrap();
        let f = g.sample(|x| Complex64::new((-x * x / 2.0).exp(), 0.0));
        let d1 = g.sample(|x| Complex64::new(-x * (-x * x / 2.0).exp(), 0.0));
        let d2 = g.sample(|x| Complex64::new((x * x - 1.0) * (-x * x / 2.0).exp(), 0.0));
        let apply = |d: &crate::CMatrix| {
            let v = nalgebra::DVector::from_vec(f.values().to_vec());
            SampledFunction::new((d * v).iter().copied().collect())
        };
        let fourier1 = differentiation_matrix(&g, 1, DifferentiationScheme::Fourier).unwrap();
        let fourier2 = differentiation_matrix(&g, 2, DifferentiationScheme::Fourier).unwrap();
        assert!(relative_residual(&apply(&fourier1), &d1, &g).unwrap() < 1e-12);
        assert!(relative_residual(&apply(&fourier2), &d2, &g).unwrap() < 1e-12);
        let fd1 = differentiation_matrix(&g, 1, DifferentiationScheme::FiniteDifference).unwrap();
        assert!(relative_residual(&apply(&fd1), &derivative(&f, &g, 1).unwrap(), &g).unwrap() < 1e-13);
        let odd = make_grid(10.0, 255, GridScheme::Uniform).unwrap();
        assert!(differentiation_matrix(&odd, 1, DifferentiationScheme::Fourier).is_err());
    }

    #[test]
    fn residual_cases() {
        let g = make_grid(1.0, 16, GridScheme::Uniform).unwrap();
        let f = g.sample(|x| re(1.0 + x));
        let zero = SampledFunction::zeros(16);
        assert_eq!(relative_residual(&f, &f, &g).unwrap(), 0.0);
        assert!((relative_residual(&f, &zero, &g).unwrap() - 1.0).abs() < 1e-15);
        let scaled = f.scale(re(1.0 + 1e-8));
        let r = relative_residual(&scaled, &f, &g).unwrap();
        assert!((r - 1e-8).abs() < 1e-12);
        assert_eq!(relative_residual(&zero, &zero, &g).unwrap(), 0.0);
    }
}
