//! The regularized Kratzer oscillator `H = -d² + G/z² + z²` on the shifted
//! line `z = x - ic`.

use num_complex::Complex64;

use super::field::{DerivativeMode, Field};
use crate::contour::{ContourGrid, SampledFunction};
use crate::error::{invalid, Error, Result};
use crate::pseudoboson::EpsilonSequence;
use crate::special::{laguerre_in, Series};

/// Smallest admissible distance of `alpha` from an integer.
pub const INTEGER_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KratzerParams {
    alpha: f64,
    c: f64,
    q: i32,
}

impl KratzerParams {
    pub fn new(alpha: f64, c: f64, q: i32) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(invalid(format!("alpha must be positive, got {alpha}")));
        }
        if (alpha - alpha.round()).abs() <= INTEGER_GAP {
            return Err(invalid(format!("alpha must not be an integer, got {alpha}")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(invalid(format!("c must be positive, got {c}")));
        }
        if q != 1 && q != -1 {
            return Err(invalid(format!("quasi-parity must be +1 or -1, got {q}")));
        }
        Ok(KratzerParams { alpha, c, q })
    }

    /// Parameters whose Laguerre order is `gamma`: `alpha = |gamma|`,
    /// `q = sign(gamma)`.
    pub fn from_gamma(gamma: f64, c: f64) -> Result<Self> {
        let q = if gamma < 0.0 { -1 } else { 1 };
        KratzerParams::new(gamma.abs(), c, q)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn q(&self) -> i32 {
        self.q
    }

    /// Laguerre order of the quasi-parity family, `q * alpha`.
    pub fn gamma(&self) -> f64 {
        self.q as f64 * self.alpha
    }

    /// `G = alpha² - 1/4`.
    pub fn g_coupling(&self) -> f64 {
        self.alpha * self.alpha - 0.25
    }

    /// Fails with [`Error::NonNormalizable`] unless `gamma > -1`.
    pub fn check_normalizable(&self) -> Result<()> {
        check_order(self.gamma())
    }
}

fn check_order(gamma: f64) -> Result<()> {
    if gamma > -1.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::NonNormalizable { gamma })
    }
}

fn shifted(x: f64, c: f64) -> Complex64 {
    Complex64::new(x, -c)
}

/// `G/(x-ic)² + x² - 2icx - c²`.
pub fn kratzer_potential(x: f64, p: &KratzerParams) -> Complex64 {
    let z = shifted(x, p.c);
    p.g_coupling() / (z * z) + z * z
}

/// The potential of `H†` on the real line: the pointwise conjugate.
pub fn kratzer_dual_potential(x: f64, p: &KratzerParams) -> Complex64 {
    kratzer_potential(x, p).conj()
}

/// `E = 4n + 2 + 2 q alpha`.
pub fn kratzer_energy(q: i32, n: usize, alpha: f64) -> f64 {
    4.0 * n as f64 + 2.0 + 2.0 * q as f64 * alpha
}

/// `z^{gamma+1/2} e^{-z²/2} L_n^(gamma)(z²)` with `z = x - ic`, for a real
/// expansion variable `x`.
pub fn raw_eigenfunction(n: usize, gamma: f64, c: f64, x: Series) -> Series {
    let z = x + Complex64::new(0.0, -c);
    let z2 = z * z;
    z.powc(Complex64::new(gamma + 0.5, 0.0)) * (z2 * -0.5).exp() * laguerre_in(n, gamma, z2)
}

/// The unnormalized level `n` of the family with Laguerre order `gamma`.
pub fn kratzer_eigenfunction_field(
    n: usize,
    gamma: f64,
    c: f64,
    grid: &ContourGrid,
    mode: DerivativeMode,
) -> Result<Field> {
    check_order(gamma)?;
    if !(c.is_finite() && c > 0.0) {
        return Err(invalid(format!("c must be positive, got {c}")));
    }
    Ok(Field::from_fn(grid, mode, |x| raw_eigenfunction(n, gamma, c, x)))
}

pub fn kratzer_eigenfunction(
    n: usize,
    p: &KratzerParams,
    grid: &ContourGrid,
    normalization: Complex64,
) -> Result<SampledFunction> {
    let f = kratzer_eigenfunction_field(n, p.gamma(), p.c, grid, DerivativeMode::Fd)?;
    Ok(f.samples().scale(normalization))
}

/// `normalization * conj(Phi_n)`, the eigenfunction of `H†`.
pub fn kratzer_dual_eigenfunction(
    n: usize,
    p: &KratzerParams,
    grid: &ContourGrid,
    normalization: Complex64,
) -> Result<SampledFunction> {
    let f = kratzer_eigenfunction_field(n, p.gamma(), p.c, grid, DerivativeMode::Fd)?;
    Ok(f.samples().conj().scale(normalization))
}

/// `W = z - (gamma + 1/2)/z`.
pub fn superpotential_w(gamma: f64, c: f64, x: f64) -> Complex64 {
    superpotential_series(gamma, c, Series::constant(Complex64::new(x, 0.0))).value()
}

pub fn superpotential_series(gamma: f64, c: f64, x: Series) -> Series {
    let z = x + Complex64::new(0.0, -c);
    z - z.recip() * (gamma + 0.5)
}

/// `c5(n, gamma) = -4 sqrt((n+1)(n+gamma+1))`.
pub fn c5(n: i64, gamma: f64) -> Result<f64> {
    if n < -1 {
        return Err(invalid(format!("c5 is defined for n >= -1, got {n}")));
    }
    let r = (n as f64 + 1.0) * (n as f64 + gamma + 1.0);
    if r < 0.0 || !r.is_finite() {
        return Err(invalid(format!("c5({n}, {gamma}) has negative radicand {r}")));
    }
    Ok(-4.0 * r.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderConstant {
    pub n: i64,
    pub gamma: f64,
    pub value: f64,
}

impl LadderConstant {
    pub fn new(n: i64, gamma: f64) -> Result<Self> {
        Ok(LadderConstant {
            n,
            gamma,
            value: c5(n, gamma)?,
        })
    }
}

/// `eps_n = c5(n-1, gamma)² = 16 n (n + gamma)`.
pub fn epsilon_sequence_from_model(gamma: f64, length: usize) -> Result<EpsilonSequence> {
    check_order(gamma)?;
    let values = (0..length)
        .map(|n| {
            let v = c5(n as i64 - 1, gamma)?;
            Ok(v * v)
        })
        .collect::<Result<Vec<_>>>()?;
    EpsilonSequence::new(values)
}

/// `c5(n+1, gamma)²`, the unshifted form, kept for comparison in reports.
pub fn unshifted_epsilon(n: usize, gamma: f64) -> Result<f64> {
    let v = c5(n as i64 + 1, gamma)?;
    Ok(v * v)
}

/// Largest phase jump of `(x - ic)^{gamma+1/2}` between neighbouring nodes.
pub fn max_phase_increment(gamma: f64, c: f64, grid: &ContourGrid) -> f64 {
    let s = Complex64::new(gamma + 0.5, 0.0);
    let v: Vec<Complex64> = grid.nodes().iter().map(|&x| shifted(x, c).powc(s)).collect();
    v.windows(2)
        .map(|w| (w[1] / w[0]).arg().abs())
        .fold(0.0, f64::max)
}
