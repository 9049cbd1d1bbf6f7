use pblab_core::contour::{make_grid, relative_residual, ContourGrid, GridScheme};
use pblab_core::models::{build_model_nlpb, KratzerParams, ModelNlpb};
use pblab_core::pseudoboson::{
    dyadic_operator, gram_matrices, hermitize, interior, intertwining_residual, number_intertwining_residual,
    oblique_projector, riesz_diagnostic, theta_factorization_residual, RieszVerdict,
};
use pblab_core::{CMatrix, Complex64};

fn grid() -> ContourGrid {
    make_grid(12.0, 1200, GridScheme::GaussLegendre).unwrap()
}

fn model(n: usize) -> ModelNlpb {
    let p = KratzerParams::new(1.3, 1.0, 1).unwrap();
    build_model_nlpb(&p, n, &grid()).unwrap()
}

#[test]
fn metric_structure_with_span_dual() {
    let m = model(10);
    let sys = m.system.span_dual().unwrap();
    let g = sys.grid();
    let n = sys.len();
    let ones = vec![Complex64::new(1.0, 0.0); n];
    let s_eta = dyadic_operator(&ones, sys.eta(), sys.eta(), g).unwrap();
    for k in 0..n {
        let r = relative_residual(&s_eta.apply(&sys.phi()[k]), &sys.eta()[k], g).unwrap();
        assert!(r < 1e-6, "S_eta Phi_{k}: {r}");
    }
    let gp = gram_matrices(&sys).unwrap();
    let k = interior(n);
    let prod = &gp.g_phi * &gp.g_eta;
    let gap = (prod.view((0, 0), (k, k)) - CMatrix::identity(k, k)).norm();
    println!("span-dual Gram gap {gap:e}");
    assert!(gap < 1e-6);

    let it = intertwining_residual(&sys, &m.eps).unwrap();
    println!("{it}");
    assert!(it.pass);
    let itn = number_intertwining_residual(&sys, &m.eps).unwrap();
    println!("{itn}");
    assert!(itn.pass);

    let h = hermitize(&sys, &m.eps).unwrap();
    println!(
        "herm {:e} metric-adj {:e} ortho {:e} dyadic {:e} eigen {:e}",
        h.hermiticity_residual(n),
        h.metric_adjoint_residual().unwrap(),
        h.orthonormality_deviation(&sys).unwrap(),
        h.dyadic_residual(),
        h.eigen_residual()
    );
    assert!(h.hermiticity_residual(n) < 1e-6);
    assert!(h.orthonormality_deviation(&sys).unwrap() < 1e-8);
    let th = theta_factorization_residual(&sys, &m.ladder).unwrap();
    println!("{th}");
    assert!(th.pass);
}

#[test]
fn conj_dual_gram_gap_is_recorded() {
    let m = model(10);
    let gp = gram_matrices(&m.system).unwrap();
    let k = interior(10);
    let prod = &gp.g_phi * &gp.g_eta;
    let gap = (prod.view((0, 0), (k, k)) - CMatrix::identity(k, k)).norm();
    println!("conj-dual Gram gap {gap:e}");
    let it = intertwining_residual(&m.system, &m.eps).unwrap();
    println!("conj-dual {it}");
}

#[test]
fn oblique_projector_is_idempotent() {
    let m = model(10);
    let x = oblique_projector(&m.system).unwrap();
    let x2 = x.compose(&x);
    let idem = x2.sub(&x).norm() / x.norm();
    println!("idempotency {idem:e}");
    assert!(idem < 1e-8);
    for (k, phi) in m.system.phi().iter().enumerate() {
        let r = relative_residual(&x.apply(phi), phi, m.system.grid()).unwrap();
        assert!(r < 1e-8, "X Phi_{k}: {r}");
    }
}

#[test]
fn gram_conditioning_grows() {
    let d = riesz_diagnostic(|n| model(n).system.span_dual(), &[4, 8, 12, 16]).unwrap();
    for r in &d.rows {
        println!("{} {:e} {:e}", r.n, r.cond_phi, r.cond_eta);
    }
    assert_eq!(d.verdict, RieszVerdict::NonRiesz);
}

