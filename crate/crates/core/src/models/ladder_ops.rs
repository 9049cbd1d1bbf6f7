//! First-order factors, second-order ladders and the `sl(2,R)` relations of
//! the Kratzer model.

use num_complex::Complex64;

use super::field::{DerivativeMode, Field};
use super::kratzer::{kratzer_eigenfunction_field, kratzer_energy, superpotential_series};
use crate::contour::{
    differentiation_matrix, norm, relative_residual, ContourGrid, DifferentiationScheme,
};
use crate::error::{invalid, Result};
use crate::pseudoboson::GridOperator;
use crate::special::Series;
use crate::VerificationReport;

/// Eigenfunctions used by [`partner_shift_residual`].
pub const PARTNER_LEVELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// `d/dx + W`
    A,
    /// `-d/dx + W`
    B,
}

/// Which of the two equivalent factorizations builds a second-order ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Composition {
    /// `A^(-a-1) A^(a)` and `B^(-a) B^(a-1)`.
    #[default]
    First,
    /// `A^(a-1) A^(-a)` and `B^(a) B^(-a-1)`.
    Second,
}

fn shift(c: f64) -> Complex64 {
    Complex64::new(0.0, -c)
}

fn check_c(c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("c must be positive, got {c}")))
    }
}

/// `W` for Laguerre order `gamma` in the representation of `mode`.
pub fn superpotential_field(gamma: f64, c: f64, grid: &ContourGrid, mode: DerivativeMode) -> Field {
    Field::from_fn(grid, mode, |x| superpotential_series(gamma, c, x))
}

/// `A f = f' + W f`, `B f = -f' + W f`.
pub fn apply_factor(kind: FactorKind, w: &Field, f: &Field, grid: &ContourGrid) -> Result<Field> {
    if w.len() != f.len() {
        return Err(invalid("superpotential and function are not aligned"));
    }
    let df = f.derivative(grid)?;
    let wf = w.mul(f);
    Ok(match kind {
        FactorKind::A => df.add(&wf),
        FactorKind::B => wf.sub(&df),
    })
}

fn factor(kind: FactorKind, gamma: f64, c: f64, f: &Field, grid: &ContourGrid) -> Result<Field> {
    let w = superpotential_field(gamma, c, grid, DerivativeMode::Analytic);
    apply_factor(kind, &w, f, grid)
}

/// `A(alpha)` or `B(alpha)` as a product of two first-order factors.
pub fn second_order_ladder(
    kind: FactorKind,
    alpha: f64,
    c: f64,
    f: &Field,
    grid: &ContourGrid,
    mode: DerivativeMode,
    composition: Composition,
) -> Result<Field> {
    check_c(c)?;
    let f = f.in_mode(mode)?;
    let (inner, outer) = match (kind, composition) {
        (FactorKind::A, Composition::First) => (alpha, -alpha - 1.0),
        (FactorKind::A, Composition::Second) => (-alpha, alpha - 1.0),
        (FactorKind::B, Composition::First) => (alpha - 1.0, -alpha),
        (FactorKind::B, Composition::Second) => (-alpha - 1.0, alpha),
    };
    let g = factor(kind, inner, c, &f, grid)?;
    factor(kind, outer, c, &g, grid)
}

/// `lead f'' + p f' + q f` with closed-form coefficients.
#[derive(Debug, Clone)]
pub struct SecondOrderOp {
    lead: Complex64,
    p: Vec<Series>,
    q: Vec<Series>,
}

impl SecondOrderOp {
    pub fn from_fns(
        grid: &ContourGrid,
        lead: Complex64,
        p: impl Fn(Series) -> Series,
        q: impl Fn(Series) -> Series,
    ) -> Self {
        let jets = |f: &dyn Fn(Series) -> Series| match Field::from_fn(grid, DerivativeMode::Analytic, f) {
            Field::Jets(j) => j,
            Field::Samples(_) => unreachable!("analytic fields hold jets"),
        };
        SecondOrderOp {
            lead,
            p: jets(&p),
            q: jets(&q),
        }
    }

    /// Expanded `A(alpha) = d² + 2z d + z² + 1 - G/z²` or
    /// `B(alpha) = d² - 2z d + z² - 1 - G/z²`.
    pub fn ladder(kind: FactorKind, alpha: f64, c: f64, grid: &ContourGrid) -> Self {
        let g = alpha * alpha - 0.25;
        let s = match kind {
            FactorKind::A => 1.0,
            FactorKind::B => -1.0,
        };
        SecondOrderOp::from_fns(
            grid,
            Complex64::new(1.0, 0.0),
            |x| (x + shift(c)) * (2.0 * s),
            |x| {
                let z = x + shift(c);
                z * z + Complex64::new(s, 0.0) - (z * z).recip() * g
            },
        )
    }

    /// `H = -d² + G/z² + z²`.
    pub fn hamiltonian(alpha: f64, c: f64, grid: &ContourGrid) -> Self {
        let g = alpha * alpha - 0.25;
        SecondOrderOp::from_fns(
            grid,
            Complex64::new(-1.0, 0.0),
            |_| Series::zero(),
            |x| {
                let z = x + shift(c);
                (z * z).recip() * g + z * z
            },
        )
    }

    /// `-d² + W² ∓ W'`: the expanded form of `B^(g) A^(g)` (upper sign) or
    /// `A^(g) B^(g)`.
    pub fn partner(gamma: f64, c: f64, kind: FactorKind, grid: &ContourGrid) -> Self {
        let s = match kind {
            FactorKind::A => -1.0,
            FactorKind::B => 1.0,
        };
        SecondOrderOp::from_fns(
            grid,
            Complex64::new(-1.0, 0.0),
            |_| Series::zero(),
            |x| {
                let w = superpotential_series(gamma, c, x);
                w * w + w.derivative() * s
            },
        )
    }

    pub fn apply(&self, f: &Field, grid: &ContourGrid) -> Result<Field> {
        if f.len() != self.p.len() {
            return Err(invalid("operator and function are not aligned"));
        }
        let d1 = f.derivative(grid)?;
        let d2 = f.second_derivative(grid)?;
        let p = Field::Jets(self.p.clone());
        let q = Field::Jets(self.q.clone());
        Ok(d2.scale(self.lead).add(&p.mul(&d1)).add(&q.mul(f)))
    }

    /// The formal `L²` adjoint `conj(lead) d² - conj(p) d + conj(q) - conj(p)'`.
    pub fn adjoint(&self) -> Self {
        SecondOrderOp {
            lead: self.lead.conj(),
            p: self.p.iter().map(|s| -s.conj()).collect(),
            q: self
                .q
                .iter()
                .zip(&self.p)
                .map(|(q, p)| q.conj() - p.conj().derivative())
                .collect(),
        }
    }

    /// Dense realization `lead D2 + diag(p) D1 + diag(q)` on a uniform grid.
    pub fn to_matrix(&self, grid: &ContourGrid, scheme: DifferentiationScheme) -> Result<GridOperator> {
        let m = grid.count();
        if self.p.len() != m {
            return Err(invalid("operator and grid are not aligned"));
        }
        let d1 = differentiation_matrix(grid, 1, scheme)?;
        let d2 = differentiation_matrix(grid, 2, scheme)?;
        let mut out = d2 * self.lead;
        for i in 0..m {
            let p = self.p[i].value();
            let mut row = out.row_mut(i);
            row += d1.row(i) * p;
            row[i] += self.q[i].value();
        }
        GridOperator::new(out, grid.clone())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        SecondOrderOp {
            lead: self.lead * s,
            p: self.p.iter().map(|v| v.scale(s)).collect(),
            q: self.q.iter().map(|v| v.scale(s)).collect(),
        }
    }
}

/// `x^k e^{-x²/2}` for `k = 0, ..., 4`.
pub fn gaussian_test_functions(grid: &ContourGrid, mode: DerivativeMode) -> Vec<Field> {
    (0..5)
        .map(|k| {
            Field::from_fn(grid, mode, move |x| {
                let mut p = Series::constant(Complex64::new(1.0, 0.0));
                for _ in 0..k {
                    p = p * x;
                }
                p * (x * x * -0.5).exp()
            })
        })
        .collect()
}

fn is_zero(f: &Field, grid: &ContourGrid) -> Result<bool> {
    Ok(norm(&f.samples(), grid)? == 0.0)
}

fn rel(lhs: &Field, rhs: &Field, grid: &ContourGrid) -> Result<f64> {
    relative_residual(&lhs.samples(), &rhs.samples(), grid)
}

/// `||lhs - rhs|| / max(||rhs||, scale)`; `scale` guards targets that vanish.
pub fn scaled_residual(lhs: &Field, rhs: &Field, scale: f64, grid: &ContourGrid) -> Result<f64> {
    let diff = norm(&lhs.sub(rhs).samples(), grid)?;
    Ok(diff / norm(&rhs.samples(), grid)?.max(scale).max(1e-300))
}

fn mode_tolerance(mode: DerivativeMode) -> f64 {
    match mode {
        DerivativeMode::Analytic => 1e-6,
        DerivativeMode::Fd => 1e-4,
    }
}

/// Both orders of each second-order ladder, and each against its expanded
/// form.
pub fn factorization_order_residual(
    alpha: f64,
    c: f64,
    tests: &[Field],
    grid: &ContourGrid,
    mode: DerivativeMode,
) -> Result<VerificationReport> {
    check_c(c)?;
    let mut worst: f64 = 0.0;
    for kind in [FactorKind::A, FactorKind::B] {
        let expanded = SecondOrderOp::ladder(kind, alpha, c, grid);
        for f in tests {
            let f = f.in_mode(mode)?;
            if is_zero(&f, grid)? {
                continue;
            }
            let one = second_order_ladder(kind, alpha, c, &f, grid, mode, Composition::First)?;
            let two = second_order_ladder(kind, alpha, c, &f, grid, mode, Composition::Second)?;
            let ex = expanded.apply(&f, grid)?;
            worst = worst.max(rel(&one, &two, grid)?).max(rel(&one, &ex, grid)?);
        }
    }
    Ok(VerificationReport::new("ladder_factorization_order", worst, mode_tolerance(mode))
        .with_param("alpha", alpha)
        .with_param("c", c)
        .with_param("derivative_mode", mode.name())
        .with_param("test_functions", tests.len()))
}

/// Factored partner Hamiltonians `B A` and `A B` against
/// `-d² + W² ∓ W'`.
pub fn partner_expansion_residual(
    gamma: f64,
    c: f64,
    tests: &[Field],
    grid: &ContourGrid,
    mode: DerivativeMode,
) -> Result<VerificationReport> {
    check_c(c)?;
    let left = SecondOrderOp::partner(gamma, c, FactorKind::A, grid);
    let right = SecondOrderOp::partner(gamma, c, FactorKind::B, grid);
    let mut worst: f64 = 0.0;
    for f in tests {
        let f = f.in_mode(mode)?;
        if is_zero(&f, grid)? {
            continue;
        }
        let ba = factor(FactorKind::B, gamma, c, &factor(FactorKind::A, gamma, c, &f, grid)?, grid)?;
        let ab = factor(FactorKind::A, gamma, c, &factor(FactorKind::B, gamma, c, &f, grid)?, grid)?;
        worst = worst
            .max(rel(&ba, &left.apply(&f, grid)?, grid)?)
            .max(rel(&ab, &right.apply(&f, grid)?, grid)?);
    }
    Ok(VerificationReport::new("partner_expansion", worst, mode_tolerance(mode))
        .with_param("gamma", gamma)
        .with_param("c", c)
        .with_param("derivative_mode", mode.name()))
}

/// A normalizable family for `H^[|g|]`: whichever of `±g` exceeds `-1`.
fn family_order(g: f64) -> f64 {
    if g > -1.0 {
        g
    } else {
        -g
    }
}

/// `B^(g) A^(g) = H^[|g|] - 2g - 2` and `A^(g) B^(g) = H^[|g+1|] - 2g` on the
/// first [`PARTNER_LEVELS`] eigenfunctions of each target Hamiltonian.
///
/// Both sides are applied numerically; the energy bookkeeping
/// `(E_n - shift) Phi_n` is checked as well. Residuals are relative to
/// `||H Phi_n||` so that a vanishing ground-state target stays meaningful.
pub fn partner_shift_residual(
    gamma: f64,
    c: f64,
    grid: &ContourGrid,
    mode: DerivativeMode,
) -> Result<VerificationReport> {
    check_c(c)?;
    let mut worst: f64 = 0.0;
    let mut ground = Vec::new();
    for (kind, target, shift) in [
        (FactorKind::A, gamma, 2.0 * gamma + 2.0),
        (FactorKind::B, gamma + 1.0, 2.0 * gamma),
    ] {
        let alpha = target.abs();
        let order = family_order(target);
        let h = SecondOrderOp::hamiltonian(alpha, c, grid);
        for n in 0..PARTNER_LEVELS {
            let phi = kratzer_eigenfunction_field(n, order, c, grid, mode)?;
            let partner = match kind {
                FactorKind::A => {
                    factor(FactorKind::B, gamma, c, &factor(FactorKind::A, gamma, c, &phi, grid)?, grid)?
                }
                FactorKind::B => {
                    factor(FactorKind::A, gamma, c, &factor(FactorKind::B, gamma, c, &phi, grid)?, grid)?
                }
            };
            let hphi = h.apply(&phi, grid)?;
            let scale = norm(&hphi.samples(), grid)?;
            let shifted = hphi.sub(&phi.scale(Complex64::new(shift, 0.0)));
            let energy = kratzer_energy(1, n, order) - shift;
            let booked = phi.scale(Complex64::new(energy, 0.0));
            worst = worst
                .max(scaled_residual(&partner, &shifted, scale, grid)?)
                .max(scaled_residual(&partner, &booked, scale, grid)?);
            if n == 0 {
                ground.push(energy);
            }
        }
    }
    Ok(VerificationReport::new("partner_shift", worst, mode_tolerance(mode))
        .with_param("gamma", gamma)
        .with_param("c", c)
        .with_param("levels", PARTNER_LEVELS)
        .with_param("derivative_mode", mode.name())
        .with_note(format!(
            "ground levels: H_L {:.12}, H_R {:.12}",
            ground[0], ground[1]
        )))
}

/// `[A, B] = 8H`, `[A, H] = 4A` and `[H, B] = 4B` on each test function.
pub fn sl2_commutator_residuals(
    alpha: f64,
    c: f64,
    tests: &[Field],
    grid: &ContourGrid,
    mode: DerivativeMode,
) -> Result<VerificationReport> {
    check_c(c)?;
    let a = SecondOrderOp::ladder(FactorKind::A, alpha, c, grid);
    let b = SecondOrderOp::ladder(FactorKind::B, alpha, c, grid);
    let h = SecondOrderOp::hamiltonian(alpha, c, grid);
    let mut worst = [0.0f64; 3];
    let mut skipped = 0;
    for f in tests {
        let f = f.in_mode(mode)?;
        if is_zero(&f, grid)? {
            skipped += 1;
            continue;
        }
        let af = a.apply(&f, grid)?;
        let bf = b.apply(&f, grid)?;
        let hf = h.apply(&f, grid)?;
        let comm_ab = a.apply(&bf, grid)?.sub(&b.apply(&af, grid)?);
        let comm_ah = a.apply(&hf, grid)?.sub(&h.apply(&af, grid)?);
        let comm_hb = h.apply(&bf, grid)?.sub(&b.apply(&hf, grid)?);
        let four = Complex64::new(4.0, 0.0);
        worst[0] = worst[0].max(rel(&comm_ab, &hf.scale(four * 2.0), grid)?);
        worst[1] = worst[1].max(rel(&comm_ah, &af.scale(four), grid)?);
        worst[2] = worst[2].max(rel(&comm_hb, &bf.scale(four), grid)?);
    }
    let residual = worst.iter().copied().fold(0.0, f64::max);
    let mut report = VerificationReport::new("sl2_commutators", residual, mode_tolerance(mode))
        .with_param("alpha", alpha)
        .with_param("c", c)
        .with_param("derivative_mode", mode.name())
        .with_note(format!(
            "[A,B]-8H {:.3e}, [A,H]-4A {:.3e}, [H,B]-4B {:.3e}",
            worst[0], worst[1], worst[2]
        ));
    if skipped > 0 {
        report = report.with_note(format!("warning: {skipped} zero test function(s) skipped"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{inner_product, make_grid, GridScheme, SampledFunction};

    fn gl() -> ContourGrid {
        make_grid(12.0, 800, GridScheme::GaussLegendre).unwrap()
    }

    #[test]
    fn oscillator_ground_state_is_annihilated() {
        // W = x in the limit c -> 0, gamma = -1/2
        let g = gl();
        let w = Field::from_fn(&g, DerivativeMode::Analytic, |x| x);
        let f = Field::from_fn(&g, DerivativeMode::Analytic, |x| (x * x * -0.5).exp());
        let af = apply_factor(FactorKind::A, &w, &f, &g).unwrap();
        assert!(norm(&af.samples(), &g).unwrap() < 1e-14);
        let bf = apply_factor(FactorKind::B, &w, &f, &g).unwrap();
        let twice = f.mul(&w).scale(Complex64::new(2.0, 0.0));
        assert!(rel(&bf, &twice, &g).unwrap() < 1e-14);
    }

    #[test]
    fn factors_are_linear() {
        let g = gl();
        let tests = gaussian_test_functions(&g, DerivativeMode::Analytic);
        let w = superpotential_field(0.8, 1.0, &g, DerivativeMode::Analytic);
        let s = Complex64::new(0.3, -1.2);
        let combo = tests[1].add(&tests[2].scale(s));
        for kind in [FactorKind::A, FactorKind::B] {
            let lhs = apply_factor(kind, &w, &combo, &g).unwrap();
            let rhs = apply_factor(kind, &w, &tests[1], &g)
                .unwrap()
                .add(&apply_factor(kind, &w, &tests[2], &g).unwrap().scale(s));
            assert!(rel(&lhs, &rhs, &g).unwrap() < 1e-14);
        }
    }

    #[test]
    fn both_factorizations_agree_with_the_expansion() {
        let g = gl();
        let tests = gaussian_test_functions(&g, DerivativeMode::Analytic);
        let r = factorization_order_residual(1.3, 1.0, &tests, &g, DerivativeMode::Analytic).unwrap();
        assert!(r.pass, "{r}");
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn partner_forms() {
        let g = gl();
        let tests = gaussian_test_functions(&g, DerivativeMode::Analytic);
        let r = partner_expansion_residual(0.3, 1.0, &tests, &g, DerivativeMode::Analytic).unwrap();
        assert!(r.residual < 1e-12, "{r}");
        let u = make_grid(12.0, 1200, GridScheme::Uniform).unwrap();
        let s = partner_shift_residual(0.3, 1.0, &u, DerivativeMode::Fd).unwrap();
        assert!(s.pass, "{s}");
        let a = partner_shift_residual(0.3, 1.0, &g, DerivativeMode::Analytic).unwrap();
        assert!(a.residual < 1e-10, "{a}");
        // oscillator limit
        let o = partner_shift_residual(-0.5, 1e-3, &g, DerivativeMode::Analytic).unwrap();
        assert!(o.residual < 1e-10, "{o}");
        assert!(partner_shift_residual(0.3, 1.0, &g, DerivativeMode::Fd).is_err());
    }

    #[test]
    fn sl2_algebra_holds() {
        let g = gl();
        let tests = gaussian_test_functions(&g, DerivativeMode::Analytic);
        for &(alpha, c) in &[(1.3, 1.0), (0.5, 1e-3), (0.7, 2.0)] {
            let r = sl2_commutator_residuals(alpha, c, &tests, &g, DerivativeMode::Analytic).unwrap();
            assert!(r.residual < 1e-8, "{r}");
        }
        let u = make_grid(12.0, 1200, GridScheme::Uniform).unwrap();
        let tu = gaussian_test_functions(&u, DerivativeMode::Fd);
        let r = sl2_commutator_residuals(1.3, 1.0, &tu, &u, DerivativeMode::Fd).unwrap();
        assert!(r.pass, "{r}");
    }

    #[test]
    fn zero_test_functions_are_skipped() {
        let g = gl();
        let zero = Field::Samples(SampledFunction::zeros(g.count()));
        let r = sl2_commutator_residuals(1.3, 1.0, &[zero.clone()], &g, DerivativeMode::Fd).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!(r.metadata.iter().any(|m| m.contains("skipped")));
        // samples cannot be promoted to analytic jets
        assert!(sl2_commutator_residuals(1.3, 1.0, &[zero], &g, DerivativeMode::Analytic).is_err());
    }

    #[test]
    fn formal_adjoint_matches_inner_products() {
        let g = gl();
        let tests = gaussian_test_functions(&g, DerivativeMode::Analytic);
        let b = SecondOrderOp::ladder(FactorKind::B, 1.3, 1.0, &g);
        let bd = b.adjoint();
        let f = tests[1].add(&tests[2].scale(Complex64::new(0.0, 0.5)));
        let h = tests[3].clone();
        let lhs = inner_product(&f.samples(), &b.apply(&h, &g).unwrap().samples(), &g).unwrap();
        let rhs = inner_product(&bd.apply(&f, &g).unwrap().samples(), &h.samples(), &g).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm());
        // the adjoint of B is A with z replaced by its conjugate
        let a_bar = SecondOrderOp::from_fns(
            &g,
            Complex64::new(1.0, 0.0),
            |x| (x + Complex64::new(0.0, 1.0)) * 2.0,
            |x| {
                let z = x + Complex64::new(0.0, 1.0);
                z * z + Complex64::new(1.0, 0.0) - (z * z).recip() * 1.44
            },
        );
        let r = rel(&bd.apply(&f, &g).unwrap(), &a_bar.apply(&f, &g).unwrap(), &g).unwrap();
        assert!(r < 1e-13);
    }

    #[test]
    fn grid_matrix_matches_pointwise_application() {
        let u = make_grid(12.0, 400, GridScheme::Uniform).unwrap();
        let tests = gaussian_test_functions(&u, DerivativeMode::Analytic);
        let h = SecondOrderOp::hamiltonian(1.3, 1.0, &u);
        let mat = h.to_matrix(&u, DifferentiationScheme::Fourier).unwrap();
        let exact = h.apply(&tests[2], &u).unwrap().samples();
        let via = mat.apply(&tests[2].samples());
        assert!(relative_residual(&via, &exact, &u).unwrap() < 1e-9);
        let fd = h.to_matrix(&u, DifferentiationScheme::FiniteDifference).unwrap();
        let direct = h.apply(&tests[2].to_samples(), &u).unwrap().samples();
        assert!(relative_residual(&fd.apply(&tests[2].samples()), &direct, &u).unwrap() < 1e-12);
    }
}
