use num_complex::Complex64;
use proptest::prelude::*;

use pblab_core::contour::{derivative, make_grid, relative_residual, GridScheme};
use pblab_core::models::{
    c5, eigenfunction_reports, epsilon_sequence_from_model, kratzer_energy, max_phase_increment, DerivativeMode,
    KratzerParams,
};
use pblab_core::pseudoboson::EpsilonSequence;
use pblab_core::special::{epsilon_factorial, laguerre, laguerre_derivative};

/// Explicit sum `sum_k (-1)^k C(n+g, n-k) z^k / k!`.
fn laguerre_monomial(n: usize, g: f64, z: Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let mut binom = 1.0;
        for j in 1..=(n - k) {
            binom *= (g + k as f64 + j as f64) / j as f64;
        }
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        total += z.powu(k as u32) * (sign * binom / fact);
    }
    total
}

fn non_integer_alpha() -> impl Strategy<Value = f64> {
    (0.05f64..2.95).prop_filter("away from integers", |a| (a - a.round()).abs() > 0.02)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laguerre_matches_monomial_sum(n in 0usize..12, g in -0.9f64..3.0, re in -4.0f64..4.0, im in -4.0f64..4.0) {
        let z = Complex64::new(re, im);
        let a = laguerre(n, g, z).unwrap();
        let b = laguerre_monomial(n, g, z);
        prop_assert!((a - b).norm() <= 1e-10 * b.norm().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn laguerre_derivative_matches_difference(n in 1usize..10, g in -0.9f64..2.0, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let z = Complex64::new(re, im);
        let h = 1e-5;
        let fd = (laguerre(n, g, z + h).unwrap() - laguerre(n, g, z - h).unwrap()) / (2.0 * h);
        let d = laguerre_derivative(n, g, z).unwrap();
        prop_assert!((fd - d).norm() <= 1e-6 * d.norm().max(1.0));
    }

    #[test]
    fn epsilon_factorial_recursion(steps in prop::collection::vec(0.1f64..3.0, 1..12)) {
        let mut values = vec![0.0];
        for s in &steps {
            values.push(values.last().unwrap() + s);
        }
        let eps = EpsilonSequence::new(values.clone()).unwrap();
        prop_assert_eq!(epsilon_factorial(0, &eps).unwrap(), 1.0);
        for n in 1..values.len() {
            let lhs = epsilon_factorial(n, &eps).unwrap();
            let rhs = values[n] * epsilon_factorial(n - 1, &eps).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
        }
        prop_assert!(epsilon_factorial(values.len(), &eps).is_err());
    }

    #[test]
    fn spectrum_identity(alpha in non_integer_alpha(), n in 0usize..40) {
        let up = kratzer_energy(1, n, alpha);
        let down = kratzer_energy(-1, n, alpha);
        prop_assert!((up - (4.0 * n as f64 + 2.0 + 2.0 * alpha)).abs() < 1e-12);
        prop_assert!((up - down - 4.0 * alpha).abs() < 1e-12);
        prop_assert!((kratzer_energy(1, n + 1, alpha) - up - 4.0).abs() < 1e-12);
    }

    #[test]
    fn model_epsilon_is_quadratic(alpha in non_integer_alpha(), q in prop_oneof![Just(1i32), Just(-1i32)]) {
        let gamma = q as f64 * alpha;
        prop_assume!(gamma > -1.0);
        let eps = epsilon_sequence_from_model(gamma, 12).unwrap();
        for (n, &e) in eps.values().iter().enumerate() {
            let n = n as f64;
            prop_assert!((e - 16.0 * n * (n + gamma)).abs() <= 1e-10 * e.max(1.0));
        }
        prop_assert!((c5(3, gamma).unwrap().powi(2) - eps.values()[4]).abs() < 1e-9);
    }

    #[test]
    fn fd_derivative_is_fourth_order(k in 0u32..4, shift in -1.0f64..1.0) {
        let g = make_grid(10.0, 801, GridScheme::Uniform).unwrap();
        let f = g.sample(|x| Complex64::new((x - shift).powi(k as i32) * (-(x - shift).powi(2) / 2.0).exp(), 0.0));
        let exact = g.sample(|x| {
            let y = x - shift;
            let kk = k as f64;
            let lead = if k == 0 { 0.0 } else { kk * y.powi(k as i32 - 1) };
            Complex64::new((lead - y.powi(k as i32 + 1)) * (-y * y / 2.0).exp(), 0.0)
        });
        let d = derivative(&f, &g, 1).unwrap();
        prop_assert!(relative_residual(&d, &exact, &g).unwrap() < 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // the energies do not depend on the contour shift
    #[test]
    fn eigenfunctions_are_c_independent(alpha in non_integer_alpha(), c in 0.3f64..2.5) {
        let p = KratzerParams::new(alpha, c, 1).unwrap();
        let g = make_grid(10.0, 400, GridScheme::GaussLegendre).unwrap();
        for r in eigenfunction_reports(&p, &g, DerivativeMode::Analytic, 4).unwrap() {
            prop_assert!(r.residual < 1e-9, "{}", r);
        }
    }

    // the fractional power never crosses its branch cut on the shifted line
    #[test]
    fn branch_is_continuous(alpha in non_integer_alpha(), c in 0.2f64..3.0, q in prop_oneof![Just(1i32), Just(-1i32)]) {
        let gamma = q as f64 * alpha;
        let g = make_grid(12.0, 1200, GridScheme::GaussLegendre).unwrap();
        prop_assert!(max_phase_increment(gamma, c, &g) < 0.5);
    }
}

#[test]
fn integer_and_invalid_parameters_are_rejected() {
    for (a, c, q) in [(1.0, 1.0, 1), (2.0 + 1e-8, 1.0, 1), (1.3, 0.0, 1), (1.3, 1.0, 0), (-0.5, 1.0, 1)] {
        assert!(KratzerParams::new(a, c, q).is_err(), "accepted ({a}, {c}, {q})");
    }
    let p = KratzerParams::new(1.3, 1.0, -1).unwrap();
    assert!(p.check_normalizable().is_err());
    assert!(KratzerParams::new(0.4, 1.0, -1).unwrap().check_normalizable().is_ok());
}
