use num_complex::Complex64;

use super::{
    combine, condition_number, dyadic_operator, gram, gram_matrices, BiorthogonalSystem,
    EpsilonSequence, TruncatedLadder,
};
use crate::contour::{norm, SampledFunction};
use crate::eigensolver::pd_roots;
use crate::error::{invalid, Error, Result};
use crate::{CMatrix, VerificationReport};

/// Default tolerance for operator identities.
pub const OPERATOR_TOLERANCE: f64 = 1e-6;

/// Number of leading indices used by residual checks: the top two levels
/// see the truncation (raising leaves the span) and are excluded.
pub fn interior(n: usize) -> usize {
    n.saturating_sub(2).max(1)
}

/// Intertwining of `M = sum eps_n |Phi_n><eta_n|` with its adjoint
/// `𝔐 = sum eps_n |eta_n><Phi_n|` by the metric operators, restricted to
/// the truncated span.
///
/// Checks `S_eta M = 𝔐 S_eta` on `Phi_k`, `M S_Phi = S_Phi 𝔐` on `eta_k` and
/// `S_eta M S_Phi = 𝔐` on `eta_k`, for interior `k`, and reports the largest
/// relative residual.
pub fn intertwining_residual(sys: &BiorthogonalSystem, eps: &EpsilonSequence) -> Result<VerificationReport> {
    let n = sys.len();
    if eps.len() < n {
        return Err(invalid(format!("need {n} epsilon values, got {}", eps.len())));
    }
    intertwining_with(sys, &eps.values()[..n], "intertwining_M")
}

/// The same check for `N = sum eps_{n+1} |Phi_n><eta_n|` and its adjoint.
pub fn number_intertwining_residual(
    sys: &BiorthogonalSystem,
    eps: &EpsilonSequence,
) -> Result<VerificationReport> {
    let n = sys.len();
    if eps.len() < n + 1 {
        return Err(invalid(format!("need {} epsilon values, got {}", n + 1, eps.len())));
    }
    intertwining_with(sys, &eps.values()[1..=n], "intertwining_N")
}

fn intertwining_with(sys: &BiorthogonalSystem, coeffs: &[f64], name: &str) -> Result<VerificationReport> {
    let n = sys.len();
    if n < 3 {
        return Err(invalid("intertwining needs at least 3 levels"));
    }
    // fail early on degenerate Grams
    gram_matrices(sys)?;
    let grid = sys.grid();
    let ones = vec![Complex64::new(1.0, 0.0); n];
    let c: Vec<Complex64> = coeffs.iter().map(|&e| Complex64::new(e, 0.0)).collect();
    let s_phi = dyadic_operator(&ones, sys.phi(), sys.phi(), grid)?;
    let s_eta = dyadic_operator(&ones, sys.eta(), sys.eta(), grid)?;
    let m = dyadic_operator(&c, sys.phi(), sys.eta(), grid)?;
    let m_adj = dyadic_operator(&c, sys.eta(), sys.phi(), grid)?;

    let adj_gap = m.adjoint().sub(&m_adj).norm() / m_adj.norm().max(f64::MIN_POSITIVE);

    let k_max = interior(n);
    // eps_0 = 0 makes both sides vanish at k = 0; measure against the
    // smallest non-zero coefficient instead
    let floor = coeffs[..k_max]
        .iter()
        .map(|c| c.abs())
        .filter(|&c| c > 0.0)
        .fold(f64::INFINITY, f64::min);
    let floor = if floor.is_finite() { floor } else { 1.0 };
    let resid = |lhs: &SampledFunction, rhs: &SampledFunction, base: &SampledFunction, k: usize| -> Result<f64> {
        let diff = norm(&lhs.sub(rhs), grid)?;
        let scale = norm(rhs, grid)?.max(coeffs[k].abs().max(floor) * norm(base, grid)?);
        Ok(diff / scale.max(1e-300))
    };
    let mut r1: f64 = 0.0;
    let mut r2: f64 = 0.0;
    let mut r3: f64 = 0.0;
    let mut literal: f64 = 0.0;
    for k in 0..k_max {
        let phi = &sys.phi()[k];
        let eta = &sys.eta()[k];
        let s_eta_phi = s_eta.apply(phi);
        let lhs = s_eta.apply(&m.apply(phi));
        let rhs = m_adj.apply(&s_eta_phi);
        r1 = r1.max(resid(&lhs, &rhs, &s_eta_phi, k)?);

        let s_phi_eta = s_phi.apply(eta);
        let lhs = m.apply(&s_phi_eta);
        let rhs = s_phi.apply(&m_adj.apply(eta));
        r2 = r2.max(resid(&lhs, &rhs, &s_phi_eta, k)?);

        let lhs = s_eta.apply(&m.apply(&s_phi_eta));
        let rhs = m_adj.apply(eta);
        r3 = r3.max(resid(&lhs, &rhs, eta, k)?);

        // S_Phi M = 𝔐 S_Phi, kept for comparison only
        let s_phi_phi = s_phi.apply(phi);
        let lhs = s_phi.apply(&m.apply(phi));
        let rhs = m_adj.apply(&s_phi_phi);
        literal = literal.max(resid(&lhs, &rhs, &s_phi_phi, k)?);
    }
    Ok(VerificationReport::new(name, r1.max(r2).max(r3), OPERATOR_TOLERANCE)
        .with_param("levels", n)
        .with_param("interior", k_max)
        .with_note(format!("S_eta M = M' S_eta on Phi_k: {r1:.3e}"))
        .with_note(format!("M S_phi = S_phi M' on eta_k: {r2:.3e}"))
        .with_note(format!("S_eta M S_phi = M' on eta_k: {r3:.3e}"))
        .with_note(format!("M' versus grid adjoint of M: {adj_gap:.3e}"))
        .with_note(format!(
            "S_phi M = M' S_phi (does not hold in general) on Phi_k: {literal:.3e}"
        )))
}

/// Similarity transform of the number operator into a Hermitian one.
///
/// All matrices are coordinates with respect to `Phi_0..Phi_{N-1}`, in which
/// `S_eta` is represented by `g_eta`. The `L²` inner product in these
/// coordinates is `x^H g_phi y`; `chol` is the Cholesky factor
/// `g_phi = L L^H`, and the `frame` matrices are expressed in the
/// orthonormal basis it defines.
#[derive(Debug, Clone)]
pub struct HermitizedSystem {
    /// `h = g_eta^{1/2} diag(eps) g_eta^{-1/2}`.
    pub h_matrix: CMatrix,
    /// `L^H h L^{-H}`, the matrix of `h` in an orthonormal frame.
    pub h_frame: CMatrix,
    /// Columns are the coordinates of `e_n = S_eta^{1/2} Phi_n`.
    pub e_vectors: CMatrix,
    /// `e_n` resampled on the grid.
    pub e_functions: Vec<SampledFunction>,
    pub sqrt_s_eta: CMatrix,
    pub inv_sqrt_s_eta: CMatrix,
    pub chol: CMatrix,
    pub eps: Vec<f64>,
    pub g_phi: CMatrix,
}

pub fn hermitize(sys: &BiorthogonalSystem, eps: &EpsilonSequence) -> Result<HermitizedSystem> {
    let n = sys.len();
    if eps.len() < n {
        return Err(invalid(format!("need {n} epsilon values, got {}", eps.len())));
    }
    let grams = gram_matrices(sys)?;
    let roots = pd_roots(&grams.g_eta)?;
    let e: Vec<f64> = eps.values()[..n].to_vec();
    let d = CMatrix::from_diagonal(&e.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>().into());
    let h = &roots.sqrt * &d * &roots.inv_sqrt;
    let chol = grams
        .g_phi
        .clone()
        .cholesky()
        .ok_or(Error::DegenerateGram { min_eigenvalue: 0.0 })?
        .l();
    let lh = chol.adjoint();
    let lh_inv = lh
        .clone()
        .try_inverse()
        .ok_or(Error::DegenerateGram { min_eigenvalue: 0.0 })?;
    let h_frame = &lh * &h * &lh_inv;
    let e_functions = combine(sys.phi(), &roots.sqrt);
    Ok(HermitizedSystem {
        h_matrix: h,
        h_frame,
        e_vectors: roots.sqrt.clone(),
        e_functions,
        sqrt_s_eta: roots.sqrt,
        inv_sqrt_s_eta: roots.inv_sqrt,
        chol,
        eps: e,
        g_phi: grams.g_phi,
    })
}

impl HermitizedSystem {
    pub fn dim(&self) -> usize {
        self.h_matrix.nrows()
    }

    /// `||B - B^H|| / ||B||` for the leading `k x k` block of `h_frame`.
    pub fn hermiticity_residual(&self, k: usize) -> f64 {
        let b = self.h_frame.view((0, 0), (k, k));
        (b - b.adjoint()).norm() / b.norm().max(f64::MIN_POSITIVE)
    }

    /// `||h - h‡|| / ||h||` with the coordinate adjoint `g_phi^{-1} h^H g_phi`.
    pub fn metric_adjoint_residual(&self) -> Result<f64> {
        let ginv = self
            .g_phi
            .clone()
            .cholesky()
            .ok_or(Error::DegenerateGram { min_eigenvalue: 0.0 })?
            .inverse();
        let adj = &ginv * self.h_matrix.adjoint() * &self.g_phi;
        Ok((&self.h_matrix - adj).norm() / self.h_matrix.norm().max(f64::MIN_POSITIVE))
    }

    /// `max |<e_n, e_m> - delta_nm|` by quadrature on the grid.
    pub fn orthonormality_deviation(&self, sys: &BiorthogonalSystem) -> Result<f64> {
        let g = gram(&self.e_functions, sys.grid())?;
        Ok(super::deviation_from_identity(&g))
    }

    /// `||h - sum eps_n |e_n><e_n| || / ||h||`; the dyadic sum has coordinate
    /// matrix `E diag(eps) E^H g_phi`.
    pub fn dyadic_residual(&self) -> f64 {
        let d = CMatrix::from_diagonal(
            &self.eps.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>().into(),
        );
        let dy = &self.e_vectors * d * self.e_vectors.adjoint() * &self.g_phi;
        (&self.h_matrix - dy).norm() / self.h_matrix.norm().max(f64::MIN_POSITIVE)
    }

    /// `max_n ||h e_n - eps_n e_n|| / (eps_max ||e_n||)` in coordinates.
    pub fn eigen_residual(&self) -> f64 {
        let scale = self.eps.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
        let mut r: f64 = 0.0;
        for (k, &e) in self.eps.iter().enumerate() {
            let v = self.e_vectors.column(k);
            let res = &self.h_matrix * v - v * Complex64::new(e, 0.0);
            r = r.max(res.norm() / (scale * v.norm()));
        }
        r
    }
}

/// `||h - b_Θ a_Θ|| / ||h||` on the interior block, with
/// `a_Θ = g_eta^{1/2} a g_eta^{-1/2}` and likewise for `b`.
pub fn theta_factorization_residual(
    sys: &BiorthogonalSystem,
    ladder: &TruncatedLadder,
) -> Result<VerificationReport> {
    let n = sys.len();
    if ladder.dim() != n {
        return Err(invalid(format!(
            "ladder of size {} does not match {n} levels",
            ladder.dim()
        )));
    }
    let herm = hermitize(sys, &ladder.eps)?;
    let r = &herm.sqrt_s_eta;
    let rinv = &herm.inv_sqrt_s_eta;
    let a_t = r * &ladder.a * rinv;
    let b_t = r * &ladder.b * rinv;
    let k = interior(n);
    let prod = &b_t * &a_t;
    let diff = (&herm.h_matrix - &prod).view((0, 0), (k, k)).norm();
    let scale = herm.h_matrix.view((0, 0), (k, k)).norm().max(f64::MIN_POSITIVE);
    let comm = &a_t * &b_t - &b_t * &a_t;
    let comm_ref = r * (&ladder.a * &ladder.b - &ladder.b * &ladder.a) * rinv;
    let comm_gap = (&comm - &comm_ref).norm() / comm_ref.norm().max(f64::MIN_POSITIVE);
    Ok(VerificationReport::new("theta_factorization", diff / scale, OPERATOR_TOLERANCE)
        .with_param("levels", n)
        .with_param("interior", k)
        .with_note(format!("[a_T, b_T] versus conjugated [a, b]: {comm_gap:.3e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RieszVerdict {
    /// Both condition numbers grow strictly with the truncation.
    NonRiesz,
    RieszLike,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RieszRow {
    pub n: usize,
    pub cond_phi: f64,
    pub cond_eta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RieszDiagnostic {
    pub rows: Vec<RieszRow>,
    pub verdict: RieszVerdict,
}

/// Relative margin below which two condition numbers count as equal, so
/// that rounding noise on a bounded sequence is not read as growth.
pub const GROWTH_MARGIN: f64 = 1e-9;

/// Gram condition numbers over increasing truncations.
pub fn riesz_diagnostic(
    builder: impl Fn(usize) -> Result<BiorthogonalSystem>,
    sizes: &[usize],
) -> Result<RieszDiagnostic> {
    if sizes.len() < 2 {
        return Err(invalid("at least two truncation sizes are required"));
    }
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("truncation sizes must be strictly increasing"));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let sys = builder(n)?;
        let gp = gram_matrices(&sys)?;
        rows.push(RieszRow {
            n,
            cond_phi: condition_number(&gp.g_phi)?,
            cond_eta: condition_number(&gp.g_eta)?,
        });
    }
    let grows = |f: fn(&RieszRow) -> f64| {
        rows.windows(2)
            .all(|w| f(&w[1]) > f(&w[0]) * (1.0 + GROWTH_MARGIN))
    };
    let verdict = if grows(|r| r.cond_phi) && grows(|r| r.cond_eta) {
        RieszVerdict::NonRiesz
    } else {
        RieszVerdict::RieszLike
    };
    Ok(RieszDiagnostic { rows, verdict })
}
