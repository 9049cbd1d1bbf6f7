//! The Kratzer family as nonlinear pseudo-bosons: `a = -A(alpha)`,
//! `b = -B(alpha)`, `Phi_n` a rescaled Laguerre family.

use num_complex::Complex64;

use super::field::{DerivativeMode, Field};
use super::kratzer::{c5, epsilon_sequence_from_model, kratzer_energy, raw_eigenfunction, KratzerParams};
use super::ladder_ops::{scaled_residual, FactorKind, SecondOrderOp};
use crate::contour::{inner_product, norm, ContourGrid, DifferentiationScheme, SampledFunction};
use crate::error::{invalid, Error, Result};
use crate::pseudoboson::{
    biorthogonality_matrix, build_ladder_matrices, deviation_from_identity, BiorthogonalSystem,
    EpsilonSequence, TruncatedLadder, BIORTHO_TOLERANCE, OPERATOR_TOLERANCE,
};
use crate::VerificationReport;

/// Largest admissible relative component of `B(alpha) r_n` orthogonal to
/// `r_{n+1}`.
pub const COLINEARITY_TOLERANCE: f64 = 1e-6;

/// Tolerance of the normalization-free eigen-relations.
pub const EIGEN_RELATION_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone)]
pub struct ModelNlpb {
    pub params: KratzerParams,
    /// `<Phi_n, eta_m> = delta_nm` with `eta_n` proportional to `conj(Phi_n)`.
    pub system: BiorthogonalSystem,
    /// `eps_0 .. eps_N`, one more than the number of levels.
    pub eps: EpsilonSequence,
    pub ladder: TruncatedLadder,
    /// Measured `B(alpha) r_n = mu_n r_{n+1}` for `n < N-1`.
    pub raising: Vec<Complex64>,
    /// Measured `A(alpha) r_{n+1} = nu_n r_n` for `n < N-1`.
    pub lowering: Vec<Complex64>,
    /// Largest orthogonal component met while measuring `raising` and
    /// `lowering`.
    pub colinearity: f64,
    /// `d_n` in `eta_n = d_n conj(r_n)`.
    pub dual_normalizations: Vec<Complex64>,
    /// `Phi_n` as analytic jets.
    pub phi_fields: Vec<Field>,
    pub eta_fields: Vec<Field>,
}

impl ModelNlpb {
    pub fn len(&self) -> usize {
        self.phi_fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi_fields.is_empty()
    }

    pub fn grid(&self) -> &ContourGrid {
        self.system.grid()
    }

    /// `sqrt(eps_n)`.
    pub fn sqrt_eps(&self, n: usize) -> f64 {
        self.eps.values()[n].sqrt()
    }

    /// `eta_n` resampled on another grid.
    pub fn dual_on(&self, n: usize, grid: &ContourGrid, mode: DerivativeMode) -> Field {
        let (gamma, c) = (self.params.gamma(), self.params.c());
        let d = self.dual_normalizations[n];
        Field::from_fn(grid, mode, |x| raw_eigenfunction(n, gamma, c, x).conj().scale(d))
    }
}

/// `(x, mu)` with `x ≈ mu y`: the projection coefficient and the relative
/// size of the orthogonal remainder.
fn colinear(x: &SampledFunction, y: &SampledFunction, grid: &ContourGrid) -> Result<(Complex64, f64)> {
    let yy = inner_product(y, y, grid)?;
    let mu = inner_product(y, x, grid)? / yy;
    let rest = norm(&x.sub(&y.scale(mu)), grid)?;
    Ok((mu, rest / norm(x, grid)?.max(1e-300)))
}

/// Builds `Phi_0 .. Phi_{N-1}` and their duals.
///
/// `k_0 = (sum w r_0²)^{-1/2}` and `k_{n+1} = k_n mu_n / c5(n, gamma)` with the
/// measured raising coefficient `mu_n`; this fixes `b Phi_n = sqrt(eps_{n+1})
/// Phi_{n+1}`. The duals `eta_n = d_n conj(r_n)` are scaled so that
/// `<Phi_n, eta_n> = 1`.
pub fn build_model_nlpb(p: &KratzerParams, n_levels: usize, grid: &ContourGrid) -> Result<ModelNlpb> {
    p.check_normalizable()?;
    if n_levels < 3 {
        return Err(invalid(format!("at least 3 levels are required, got {n_levels}")));
    }
    let (gamma, c, alpha) = (p.gamma(), p.c(), p.alpha());
    let raw: Vec<Field> = (0..n_levels)
        .map(|n| Field::from_fn(grid, DerivativeMode::Analytic, |x| raw_eigenfunction(n, gamma, c, x)))
        .collect();
    let samples: Vec<SampledFunction> = raw.iter().map(Field::samples).collect();
    if samples.iter().any(|s| s.values().iter().any(|v| !v.is_finite())) {
        return Err(Error::ModelInconsistency("eigenfunction samples are not finite".into()));
    }

    let big_a = SecondOrderOp::ladder(FactorKind::A, alpha, c, grid);
    let big_b = SecondOrderOp::ladder(FactorKind::B, alpha, c, grid);
    let mut raising = Vec::with_capacity(n_levels - 1);
    let mut lowering = Vec::with_capacity(n_levels - 1);
    let mut colinearity: f64 = 0.0;
    for n in 0..n_levels - 1 {
        let br = big_b.apply(&raw[n], grid)?.samples();
        let (mu, off_b) = colinear(&br, &samples[n + 1], grid)?;
        let ar = big_a.apply(&raw[n + 1], grid)?.samples();
        let (nu, off_a) = colinear(&ar, &samples[n], grid)?;
        let off = off_a.max(off_b);
        if !(off <= COLINEARITY_TOLERANCE) {
            return Err(Error::ModelInconsistency(format!(
                "ladder image at level {n} is not colinear with its neighbour (orthogonal part {off:.3e})"
            )));
        }
        colinearity = colinearity.max(off);
        raising.push(mu);
        lowering.push(nu);
    }

    let i0: Complex64 = samples[0]
        .values()
        .iter()
        .zip(grid.weights())
        .map(|(v, w)| v * v * w)
        .sum();
    let mut k = Vec::with_capacity(n_levels);
    k.push(i0.sqrt().inv());
    for n in 0..n_levels - 1 {
        let next = k[n] * raising[n] / c5(n as i64, gamma)?;
        k.push(next);
    }

    let phi_fields: Vec<Field> = raw.iter().zip(&k).map(|(r, &kn)| r.scale(kn)).collect();
    let phi: Vec<SampledFunction> = phi_fields.iter().map(Field::samples).collect();
    let mut dual_normalizations = Vec::with_capacity(n_levels);
    let mut eta_fields = Vec::with_capacity(n_levels);
    for (n, r) in raw.iter().enumerate() {
        let d = inner_product(&phi[n], &samples[n].conj(), grid)?.inv();
        dual_normalizations.push(d);
        eta_fields.push(r.conj().scale(d));
    }
    let eta: Vec<SampledFunction> = eta_fields.iter().map(Field::samples).collect();
    let system = BiorthogonalSystem::new(phi, eta, grid.clone(), k)?;
    let eps = epsilon_sequence_from_model(gamma, n_levels + 1)?;
    let ladder = build_ladder_matrices(&eps, n_levels)?;
    Ok(ModelNlpb {
        params: *p,
        system,
        eps,
        ladder,
        raising,
        lowering,
        colinearity,
        dual_normalizations,
        phi_fields,
        eta_fields,
    })
}

fn params(report: VerificationReport, p: &KratzerParams) -> VerificationReport {
    report
        .with_param("alpha", p.alpha())
        .with_param("c", p.c())
        .with_param("q", p.q() as i64)
}

fn fields_in(fields: &[Field], mode: DerivativeMode) -> Result<Vec<Field>> {
    fields.iter().map(|f| f.in_mode(mode)).collect()
}

/// `a Phi_0 = 0`, as `||A(alpha) Phi_0|| / (sqrt(eps_1) ||Phi_0||)`.
pub fn p1_residual(model: &ModelNlpb, mode: DerivativeMode) -> Result<VerificationReport> {
    let grid = model.grid();
    let p = &model.params;
    let a = SecondOrderOp::ladder(FactorKind::A, p.alpha(), p.c(), grid);
    let phi0 = model.phi_fields[0].in_mode(mode)?;
    let r = norm(&a.apply(&phi0, grid)?.samples(), grid)? / (model.sqrt_eps(1) * norm(&phi0.samples(), grid)?);
    Ok(params(VerificationReport::new("p1_ground_annihilated", r, OPERATOR_TOLERANCE), p)
        .with_param("derivative_mode", mode.name()))
}

/// `b† eta_0 = 0` with the formal adjoint of `b` applied to `eta_0`.
pub fn p2_residual(model: &ModelNlpb, mode: DerivativeMode) -> Result<VerificationReport> {
    let grid = model.grid();
    let p = &model.params;
    let bd = SecondOrderOp::ladder(FactorKind::B, p.alpha(), p.c(), grid).adjoint();
    let eta0 = model.eta_fields[0].in_mode(mode)?;
    let r = norm(&bd.apply(&eta0, grid)?.samples(), grid)? / (model.sqrt_eps(1) * norm(&eta0.samples(), grid)?);
    Ok(params(VerificationReport::new("p2_dual_ground_annihilated", r, OPERATOR_TOLERANCE), p)
        .with_param("derivative_mode", mode.name())
        .with_note("adjoint: formal, applied pointwise"))
}

/// `b‡ eta_0 = 0` with `b` realized as a dense matrix on a uniform grid and
/// `‡` the weighted grid adjoint.
pub fn p2_grid_residual(
    model: &ModelNlpb,
    uniform: &ContourGrid,
    scheme: DifferentiationScheme,
) -> Result<VerificationReport> {
    let p = &model.params;
    let b = SecondOrderOp::ladder(FactorKind::B, p.alpha(), p.c(), uniform)
        .scaled(Complex64::new(-1.0, 0.0))
        .to_matrix(uniform, scheme)?;
    let eta0 = model.dual_on(0, uniform, DerivativeMode::Fd).samples();
    let out = b.adjoint().apply(&eta0);
    let r = norm(&out, uniform)? / (model.sqrt_eps(1) * norm(&eta0, uniform)?);
    let name = match scheme {
        DifferentiationScheme::Fourier => "fourier",
        DifferentiationScheme::FiniteDifference => "finite-difference",
    };
    Ok(params(VerificationReport::new("p2_grid_adjoint", r, OPERATOR_TOLERANCE), p)
        .with_param("grid_points", uniform.count())
        .with_note(format!("adjoint: weighted grid adjoint of the {name} matrix")))
}

/// `max |<Phi_n, eta_m> - delta_nm|`.
pub fn p3_residual(model: &ModelNlpb) -> VerificationReport {
    let d = deviation_from_identity(&biorthogonality_matrix(&model.system));
    params(VerificationReport::new("p3_biorthonormality", d, BIORTHO_TOLERANCE), &model.params)
        .with_param("levels", model.len())
        .with_param("grid_points", model.grid().count())
}

/// Relative residuals of
/// `a Phi_n = sqrt(eps_n) Phi_{n-1}`, `b Phi_n = sqrt(eps_{n+1}) Phi_{n+1}`,
/// `b† eta_n = sqrt(eps_n) eta_{n-1}` and `a† eta_n = sqrt(eps_{n+1}) eta_{n+1}`
/// for `n <= max_n`.
pub fn ladder_relation_residuals(
    model: &ModelNlpb,
    max_n: usize,
    mode: DerivativeMode,
) -> Result<Vec<VerificationReport>> {
    if max_n + 2 > model.len() {
        return Err(invalid(format!(
            "relations up to n = {max_n} need {} levels, the model has {}",
            max_n + 2,
            model.len()
        )));
    }
    let grid = model.grid();
    let p = &model.params;
    let minus = Complex64::new(-1.0, 0.0);
    let a = SecondOrderOp::ladder(FactorKind::A, p.alpha(), p.c(), grid).scaled(minus);
    let b = SecondOrderOp::ladder(FactorKind::B, p.alpha(), p.c(), grid).scaled(minus);
    let (ad, bd) = (a.adjoint(), b.adjoint());
    let phi = fields_in(&model.phi_fields, mode)?;
    let eta = fields_in(&model.eta_fields, mode)?;
    let s = |n: usize| Complex64::new(model.sqrt_eps(n), 0.0);
    let mut worst = [0.0f64; 4];
    for n in 0..=max_n {
        if n >= 1 {
            let lo = a.apply(&phi[n], grid)?;
            worst[0] = worst[0].max(scaled_residual(&lo, &phi[n - 1].scale(s(n)), 0.0, grid)?);
            let lo = bd.apply(&eta[n], grid)?;
            worst[2] = worst[2].max(scaled_residual(&lo, &eta[n - 1].scale(s(n)), 0.0, grid)?);
        }
        let up = b.apply(&phi[n], grid)?;
        worst[1] = worst[1].max(scaled_residual(&up, &phi[n + 1].scale(s(n + 1)), 0.0, grid)?);
        let up = ad.apply(&eta[n], grid)?;
        worst[3] = worst[3].max(scaled_residual(&up, &eta[n + 1].scale(s(n + 1)), 0.0, grid)?);
    }
    let phase: Vec<String> = model.raising.iter().take(max_n + 1).map(|m| format!("{:.6}", m.arg())).collect();
    let tol = match mode {
        DerivativeMode::Analytic => OPERATOR_TOLERANCE,
        DerivativeMode::Fd => 1e-4,
    };
    let names = ["ladder_lowering", "ladder_raising", "adjoint_lowering", "adjoint_raising"];
    Ok(names
        .iter()
        .zip(worst)
        .map(|(name, r)| {
            params(VerificationReport::new(*name, r, tol), p)
                .with_param("max_n", max_n)
                .with_param("derivative_mode", mode.name())
                .with_note(format!(
                    "ladder constants carry the sign of c5 < 0 through a = -A, b = -B; measured raising phases: [{}]",
                    phase.join(", ")
                ))
        })
        .collect())
}

/// `B(alpha) A(alpha) r_N = eps_N r_N` and `A(alpha) B(alpha) r_N = eps_{N+1} r_N`
/// on the unnormalized family, for `N <= max_n`.
///
/// The `N = 0` target of the first relation vanishes; it is measured against
/// `eps_1 ||r_0||`.
pub fn eigen_relation_residuals(
    p: &KratzerParams,
    grid: &ContourGrid,
    mode: DerivativeMode,
    max_n: usize,
) -> Result<Vec<VerificationReport>> {
    p.check_normalizable()?;
    let (gamma, alpha, c) = (p.gamma(), p.alpha(), p.c());
    let eps = epsilon_sequence_from_model(gamma, max_n + 2)?;
    let a = SecondOrderOp::ladder(FactorKind::A, alpha, c, grid);
    let b = SecondOrderOp::ladder(FactorKind::B, alpha, c, grid);
    let mut worst = [0.0f64; 2];
    for n in 0..=max_n {
        let r = Field::from_fn(grid, mode, |x| raw_eigenfunction(n, gamma, c, x));
        let scale = eps.values()[n + 1] * norm(&r.samples(), grid)?;
        let e = |k: usize| Complex64::new(eps.values()[k], 0.0);
        let ba = b.apply(&a.apply(&r, grid)?, grid)?;
        let ab = a.apply(&b.apply(&r, grid)?, grid)?;
        worst[0] = worst[0].max(scaled_residual(&ba, &r.scale(e(n)), scale, grid)?);
        worst[1] = worst[1].max(scaled_residual(&ab, &r.scale(e(n + 1)), 0.0, grid)?);
    }
    Ok(["eigen_BA", "eigen_AB"]
        .iter()
        .zip(worst)
        .map(|(name, r)| {
            params(VerificationReport::new(*name, r, EIGEN_RELATION_TOLERANCE), p)
                .with_param("max_n", max_n)
                .with_param("derivative_mode", mode.name())
        })
        .collect())
}

/// `max_n |(eps_{n+1} - eps_n)/8 - E_n|` against [`kratzer_energy`].
pub fn spectrum_consistency_residual(p: &KratzerParams, max_n: usize) -> Result<VerificationReport> {
    let eps = epsilon_sequence_from_model(p.gamma(), max_n + 2)?;
    let e = eps.values();
    let gap = (0..=max_n)
        .map(|n| ((e[n + 1] - e[n]) / 8.0 - kratzer_energy(p.q(), n, p.alpha())).abs())
        .fold(0.0, f64::max);
    Ok(params(VerificationReport::new("spectrum_consistency", gap, 1e-12), p).with_param("max_n", max_n))
}

/// Largest orthogonal component of `B(alpha) r_n` against `r_{n+1}` and of
/// `A(alpha) r_{n+1}` against `r_n`, measured at construction.
pub fn colinearity_report(model: &ModelNlpb) -> VerificationReport {
    let mu: Vec<String> = model
        .raising
        .iter()
        .map(|m| format!("{:.9}{:+.3e}i", m.re, m.im))
        .collect();
    params(
        VerificationReport::new("ladder_colinearity", model.colinearity, COLINEARITY_TOLERANCE),
        &model.params,
    )
    .with_param("levels", model.len())
    .with_note(format!("raising coefficients mu_n: [{}]", mu.join(", ")))
}

/// `b a Phi_k` against `M Phi_k = sum_n eps_n Phi_n <eta_n, Phi_k>` for
/// interior `k`.
pub fn number_operator_consistency(model: &ModelNlpb) -> Result<VerificationReport> {
    let grid = model.grid();
    let p = &model.params;
    let a = SecondOrderOp::ladder(FactorKind::A, p.alpha(), p.c(), grid);
    let b = SecondOrderOp::ladder(FactorKind::B, p.alpha(), p.c(), grid);
    let sys = &model.system;
    let k_max = crate::pseudoboson::interior(sys.len());
    let mut worst: f64 = 0.0;
    for k in 0..k_max {
        let ba = b.apply(&a.apply(&model.phi_fields[k], grid)?, grid)?.samples();
        let mut m_phi = SampledFunction::zeros(grid.count());
        for n in 0..sys.len() {
            let c = inner_product(&sys.eta()[n], &sys.phi()[k], grid)? * model.eps.values()[n];
            m_phi = m_phi.axpy(c, &sys.phi()[n]);
        }
        let scale = model.eps.values()[k + 1] * norm(&sys.phi()[k], grid)?;
        let diff = norm(&ba.sub(&m_phi), grid)?;
        worst = worst.max(diff / norm(&m_phi, grid)?.max(scale));
    }
    Ok(params(VerificationReport::new("number_operator_consistency", worst, OPERATOR_TOLERANCE), p)
        .with_param("levels", sys.len()))
}
