//! Verification suites. Every module error becomes a failing report.

use num_complex::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};

use pblab_core::contour::{make_grid, relative_residual, ContourGrid, DifferentiationScheme, GridScheme};
use pblab_core::models::{
    build_model_nlpb, colinearity_report, conjugation_residual, eigen_relation_residuals,
    eigenfunction_reports, factorization_order_residual, gaussian_test_functions, ladder_relation_residuals,
    number_operator_consistency, p1_residual, p2_grid_residual, p2_residual, p3_residual,
    partner_expansion_residual, partner_shift_residual, refactorization_residual, sl2_commutator_residuals,
    spectrum_consistency_residual, spectrum_reports, unshifted_epsilon, DerivativeMode, KratzerParams,
};
use pblab_core::pseudoboson::{
    dyadic_operator, gram_matrices, hermitize, interior, intertwining_residual, number_intertwining_residual,
    oblique_projector, riesz_diagnostic, theta_factorization_residual, RieszVerdict, BIORTHO_TOLERANCE,
    OPERATOR_TOLERANCE,
};
use pblab_core::{CMatrix, ParamValue, Result, VerificationReport};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Spectrum,
    Biortho,
    Ladder,
    Metric,
    Susy,
    Algebra,
    Cubic,
    All,
}

impl Suite {
    pub const ORDERED: [Suite; 7] = [
        Suite::Spectrum,
        Suite::Biortho,
        Suite::Ladder,
        Suite::Metric,
        Suite::Susy,
        Suite::Algebra,
        Suite::Cubic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spectrum => "spectrum",
            Suite::Biortho => "biortho",
            Suite::Ladder => "ladder",
            Suite::Metric => "metric",
            Suite::Susy => "susy",
            Suite::Algebra => "algebra",
            Suite::Cubic => "cubic",
            Suite::All => "all",
        }
    }
}

/// Every check name a suite can emit; `tolerance.<name>` keys must use one.
pub const CHECK_NAMES: &[&str] = &[
    "spectrum",
    "eigenfunction",
    "dual_eigenfunction",
    "p3_biorthonormality",
    "ladder_colinearity",
    "p1_ground_annihilated",
    "p2_dual_ground_annihilated",
    "p2_grid_adjoint",
    "ladder_lowering",
    "ladder_raising",
    "adjoint_lowering",
    "adjoint_raising",
    "eigen_BA",
    "eigen_AB",
    "spectrum_consistency",
    "number_operator_consistency",
    "metric_dual_map",
    "gram_inverse",
    "intertwining_M",
    "intertwining_N",
    "hermiticity",
    "metric_adjoint",
    "hermitized_orthonormality",
    "hermitized_dyadic",
    "hermitized_eigen",
    "theta_factorization",
    "oblique_idempotent",
    "oblique_reproduces",
    "riesz_diagnostic",
    "partner_expansion",
    "partner_shift",
    "sl2_commutators",
    "ladder_factorization_order",
    "cubic_conjugation",
    "cubic_refactorization",
];

/// Levels of the spectrum and eigenfunction checks.
pub const SPECTRUM_LEVELS: usize = 5;
/// Highest level of the ladder and eigen relations.
pub const LADDER_MAX_N: usize = 8;
/// Truncations of the conditioning diagnostic.
pub const RIESZ_SIZES: [usize; 4] = [4, 8, 12, 16];
/// Random points of the cubic conjugation check.
pub const CUBIC_POINTS: usize = 100;
const CUBIC_SEED: u64 = 0x5eed_c0de;

struct Context {
    params: KratzerParams,
    mode: DerivativeMode,
    gauss: ContourGrid,
    uniform: ContourGrid,
}

impl Context {
    fn new(cfg: &RunConfig) -> Result<Self> {
        let params = cfg
            .params()
            .map_err(|e| pblab_core::Error::InvalidArgument(e.to_string()))?;
        Ok(Context {
            params,
            mode: cfg.derivative_mode,
            gauss: make_grid(cfg.grid_extent, cfg.grid_points, GridScheme::GaussLegendre)?,
            uniform: make_grid(cfg.grid_extent, cfg.grid_points, GridScheme::Uniform)?,
        })
    }

    /// Jets work on any grid, finite differences need the uniform one.
    fn work_grid(&self) -> &ContourGrid {
        match self.mode {
            DerivativeMode::Analytic => &self.gauss,
            DerivativeMode::Fd => &self.uniform,
        }
    }
}

/// Runs one suite, or all of them in order.
pub fn run_suite(cfg: &RunConfig, suite: Suite) -> Vec<VerificationReport> {
    if suite == Suite::All {
        return Suite::ORDERED.iter().flat_map(|&s| run_suite(cfg, s)).collect();
    }
    let name = suite.name();
    let reports = match Context::new(cfg) {
        Ok(ctx) => {
            let groups: Vec<(&str, Result<Vec<VerificationReport>>)> = match suite {
                Suite::Spectrum => spectrum(&ctx),
                Suite::Biortho => biortho(&ctx, cfg),
                Suite::Ladder => ladder(&ctx, cfg),
                Suite::Metric => metric(&ctx, cfg),
                Suite::Susy => susy(&ctx),
                Suite::Algebra => algebra(&ctx),
                Suite::Cubic => cubic(&ctx, cfg),
                Suite::All => unreachable!(),
            };
            groups
                .into_iter()
                .flat_map(|(check, r)| match r {
                    Ok(v) => v,
                    Err(e) => vec![VerificationReport::failed(check, default_tolerance(check), &e)],
                })
                .collect()
        }
        Err(e) => vec![VerificationReport::failed(name, 0.0, &e)],
    };
    reports.into_iter().map(|r| finish(r, cfg, name)).collect()
}

/// Runs every suite on its own thread; the report order matches
/// [`run_suite`] with [`Suite::All`].
pub fn run_all_parallel(cfg: &RunConfig) -> Vec<VerificationReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = Suite::ORDERED
            .iter()
            .map(|&suite| s.spawn(move || run_suite(cfg, suite)))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("suite thread panicked"))
            .collect()
    })
}

fn default_tolerance(check: &str) -> f64 {
    match check {
        "spectrum" => pblab_core::models::SPECTRUM_TOLERANCE,
        "p3_biorthonormality" | "oblique_idempotent" | "oblique_reproduces" | "hermitized_orthonormality" => {
            BIORTHO_TOLERANCE
        }
        _ => OPERATOR_TOLERANCE,
    }
}

fn epsilon_note(gamma: f64) -> String {
    let unshifted = unshifted_epsilon(0, gamma)
        .map(|v| format!("{v:.6}"))
        .unwrap_or_else(|_| "undefined".into());
    format!(
        "epsilon indexing: eps_n = c5(n-1, gamma)^2 = 16 n (n + gamma), so eps_0 = 0; \
         the unshifted form c5(n+1, gamma)^2 would give eps_0 = {unshifted}"
    )
}

fn finish(mut r: VerificationReport, cfg: &RunConfig, suite: &str) -> VerificationReport {
    if let Some(t) = cfg.tolerance_for(&r.check) {
        r = r.with_tolerance(t);
    }
    if r.param("suite").is_none() {
        r.params.insert(0, ("suite".to_string(), ParamValue::from(suite)));
    }
    for (k, v) in [
        ("grid_points", ParamValue::from(cfg.grid_points)),
        ("grid_extent", ParamValue::from(cfg.grid_extent)),
    ] {
        if r.param(k).is_none() {
            r = r.with_param(k, v);
        }
    }
    if matches!(suite, "biortho" | "ladder" | "metric") {
        let gamma = cfg.params().map(|p| p.gamma()).unwrap_or(f64::NAN);
        r = r.with_note(epsilon_note(gamma));
    }
    r
}

type Groups = Vec<(&'static str, Result<Vec<VerificationReport>>)>;

fn spectrum(ctx: &Context) -> Groups {
    vec![
        (
            "spectrum",
            spectrum_reports(&ctx.params, &ctx.uniform, SPECTRUM_LEVELS).map(|v| {
                v.into_iter()
                    .map(|r| r.with_note("fourth-order finite differences, dense complex QR"))
                    .collect()
            }),
        ),
        (
            "eigenfunction",
            eigenfunction_reports(&ctx.params, ctx.work_grid(), ctx.mode, SPECTRUM_LEVELS),
        ),
    ]
}

fn biortho(ctx: &Context, cfg: &RunConfig) -> Groups {
    let run = || -> Result<Vec<VerificationReport>> {
        let model = build_model_nlpb(&ctx.params, cfg.biortho_max_level + 1, &ctx.gauss)?;
        Ok(vec![
            p3_residual(&model).with_param("max_level", cfg.biortho_max_level),
            colinearity_report(&model),
        ])
    };
    vec![("p3_biorthonormality", run())]
}

fn ladder(ctx: &Context, cfg: &RunConfig) -> Groups {
    let levels = cfg.trunc_n.max(LADDER_MAX_N + 2);
    let grid = ctx.work_grid();
    let model = build_model_nlpb(&ctx.params, levels, grid);
    let scheme = match ctx.mode {
        DerivativeMode::Analytic => DifferentiationScheme::Fourier,
        DerivativeMode::Fd => DifferentiationScheme::FiniteDifference,
    };
    let with_model = |f: &dyn Fn(&pblab_core::models::ModelNlpb) -> Result<Vec<VerificationReport>>| match &model {
        Ok(m) => f(m),
        Err(e) => Err(e.clone()),
    };
    vec![
        ("p1_ground_annihilated", with_model(&|m| Ok(vec![p1_residual(m, ctx.mode)?]))),
        ("p2_dual_ground_annihilated", with_model(&|m| Ok(vec![p2_residual(m, ctx.mode)?]))),
        (
            "p2_grid_adjoint",
            with_model(&|m| Ok(vec![p2_grid_residual(m, &ctx.uniform, scheme)?])),
        ),
        (
            "ladder_lowering",
            with_model(&|m| ladder_relation_residuals(m, LADDER_MAX_N, ctx.mode)),
        ),
        ("ladder_colinearity", with_model(&|m| Ok(vec![colinearity_report(m)]))),
        (
            "number_operator_consistency",
            with_model(&|m| Ok(vec![number_operator_consistency(m)?])),
        ),
        (
            "eigen_BA",
            eigen_relation_residuals(&ctx.params, grid, ctx.mode, LADDER_MAX_N),
        ),
        (
            "spectrum_consistency",
            spectrum_consistency_residual(&ctx.params, LADDER_MAX_N).map(|r| vec![r]),
        ),
    ]
}

fn metric(ctx: &Context, cfg: &RunConfig) -> Groups {
    let run = || -> Result<Vec<VerificationReport>> {
        let model = build_model_nlpb(&ctx.params, cfg.trunc_n, &ctx.gauss)?;
        let sys = model.system.span_dual()?;
        let grid = sys.grid();
        let n = sys.len();
        let k = interior(n);
        let mut out = Vec::new();

        let ones = vec![Complex64::new(1.0, 0.0); n];
        let s_eta = dyadic_operator(&ones, sys.eta(), sys.eta(), grid)?;
        let mut dual_map: f64 = 0.0;
        for (phi, eta) in sys.phi().iter().zip(sys.eta()) {
            dual_map = dual_map.max(relative_residual(&s_eta.apply(phi), eta, grid)?);
        }
        out.push(VerificationReport::new("metric_dual_map", dual_map, OPERATOR_TOLERANCE).with_param("levels", n));

        let gap = |g: &pblab_core::pseudoboson::GramPair| {
            let prod = &g.g_phi * &g.g_eta;
            (prod.view((0, 0), (k, k)) - CMatrix::identity(k, k)).norm()
        };
        let span = gram_matrices(&sys)?;
        let own = gram_matrices(&model.system)?;
        out.push(
            VerificationReport::new("gram_inverse", gap(&span), OPERATOR_TOLERANCE)
                .with_param("levels", n)
                .with_param("interior", k)
                .with_note(format!(
                    "duals: span of Phi; the conjugate duals give {:.3e}",
                    gap(&own)
                )),
        );

        let note = "duals: span of Phi";
        out.push(intertwining_residual(&sys, &model.eps)?.with_note(note));
        out.push(number_intertwining_residual(&sys, &model.eps)?.with_note(note));

        let h = hermitize(&sys, &model.eps)?;
        out.push(VerificationReport::new("hermiticity", h.hermiticity_residual(n), OPERATOR_TOLERANCE).with_param("levels", n));
        out.push(VerificationReport::new("metric_adjoint", h.metric_adjoint_residual()?, OPERATOR_TOLERANCE).with_param("levels", n));
        out.push(
            VerificationReport::new("hermitized_orthonormality", h.orthonormality_deviation(&sys)?, BIORTHO_TOLERANCE)
                .with_param("levels", n),
        );
        out.push(VerificationReport::new("hermitized_dyadic", h.dyadic_residual(), OPERATOR_TOLERANCE).with_param("levels", n));
        out.push(VerificationReport::new("hermitized_eigen", h.eigen_residual(), OPERATOR_TOLERANCE).with_param("levels", n));
        out.push(theta_factorization_residual(&sys, &model.ladder)?);

        let x = oblique_projector(&model.system)?;
        let idem = x.compose(&x).sub(&x).norm() / x.norm();
        out.push(
            VerificationReport::new("oblique_idempotent", idem, BIORTHO_TOLERANCE)
                .with_param("levels", n)
                .with_note("duals: conjugate family"),
        );
        let mut repro: f64 = 0.0;
        for phi in model.system.phi() {
            repro = repro.max(relative_residual(&x.apply(phi), phi, grid)?);
        }
        out.push(
            VerificationReport::new("oblique_reproduces", repro, BIORTHO_TOLERANCE)
                .with_param("levels", n)
                .with_note("duals: conjugate family"),
        );

        let diag = riesz_diagnostic(
            |size| build_model_nlpb(&ctx.params, size, &ctx.gauss)?.system.span_dual(),
            &RIESZ_SIZES,
        )?;
        let flat = diag
            .rows
            .windows(2)
            .filter(|w| !(w[1].cond_phi > w[0].cond_phi && w[1].cond_eta > w[0].cond_eta))
            .count();
        let mut r = VerificationReport::new("riesz_diagnostic", flat as f64, 0.0)
            .with_param("sizes", format!("{:?}", RIESZ_SIZES))
            .with_note(match diag.verdict {
                RieszVerdict::NonRiesz => "verdict: NON-RIESZ",
                RieszVerdict::RieszLike => "verdict: RIESZ-LIKE",
            })
            .with_note("residual counts truncation steps without strict growth of both condition numbers");
        for row in &diag.rows {
            r = r.with_note(format!(
                "N = {}: cond(g_phi) = {:.6e}, cond(g_eta) = {:.6e}",
                row.n, row.cond_phi, row.cond_eta
            ));
        }
        out.push(r);
        Ok(out)
    };
    vec![("metric_dual_map", run())]
}

fn susy(ctx: &Context) -> Groups {
    let grid = ctx.work_grid();
    let tests = gaussian_test_functions(grid, ctx.mode);
    let (gamma, c) = (ctx.params.gamma(), ctx.params.c());
    vec![
        (
            "partner_expansion",
            partner_expansion_residual(gamma, c, &tests, grid, ctx.mode).map(|r| vec![r]),
        ),
        (
            "partner_shift",
            partner_shift_residual(gamma, c, grid, ctx.mode).map(|r| vec![r]),
        ),
    ]
}

fn algebra(ctx: &Context) -> Groups {
    let grid = ctx.work_grid();
    let tests = gaussian_test_functions(grid, ctx.mode);
    let (alpha, c) = (ctx.params.alpha(), ctx.params.c());
    vec![
        (
            "sl2_commutators",
            sl2_commutator_residuals(alpha, c, &tests, grid, ctx.mode).map(|r| vec![r]),
        ),
        (
            "ladder_factorization_order",
            factorization_order_residual(alpha, c, &tests, grid, ctx.mode).map(|r| vec![r]),
        ),
    ]
}

fn cubic(ctx: &Context, cfg: &RunConfig) -> Groups {
    let grid = ctx.work_grid();
    let tests = gaussian_test_functions(grid, ctx.mode);
    let mut rng = StdRng::seed_from_u64(CUBIC_SEED);
    let points: Vec<f64> = (0..CUBIC_POINTS)
        .map(|_| rng.gen_range(-cfg.grid_extent..cfg.grid_extent))
        .collect();
    vec![
        (
            "cubic_conjugation",
            conjugation_residual(cfg.cubic_epsilon, &points).map(|r| vec![r]),
        ),
        (
            "cubic_refactorization",
            refactorization_residual(cfg.cubic_epsilon, &tests, grid, ctx.mode).map(|r| vec![r]),
        ),
    ]
}
