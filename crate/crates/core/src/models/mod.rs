//! Concrete realizations: the regularized Kratzer oscillator with its
//! factorizations and pseudo-boson structure, and the cubic superpotential.

pub mod cubic;
pub mod field;
pub mod kratzer;
pub mod ladder_ops;
pub mod nlpb;
pub mod spectrum;

pub use cubic::{
    conjugation_residual, cubic_superpotential, cubic_superpotential_field, refactorization_residual,
    CubicParams,
};
pub use field::{DerivativeMode, Field};
pub use kratzer::{
    c5, epsilon_sequence_from_model, kratzer_dual_eigenfunction, kratzer_dual_potential,
    kratzer_eigenfunction, kratzer_eigenfunction_field, kratzer_energy, kratzer_potential,
    max_phase_increment, raw_eigenfunction, superpotential_series, superpotential_w, unshifted_epsilon,
    KratzerParams, LadderConstant,
};
pub use ladder_ops::{
    apply_factor, factorization_order_residual, gaussian_test_functions, partner_expansion_residual,
    partner_shift_residual, second_order_ladder, sl2_commutator_residuals, superpotential_field,
    Composition, FactorKind, SecondOrderOp,
};
pub use nlpb::{
    build_model_nlpb, colinearity_report, eigen_relation_residuals, ladder_relation_residuals,
    number_operator_consistency, p1_residual, p2_grid_residual, p2_residual, p3_residual,
    spectrum_consistency_residual, ModelNlpb,
};
pub use spectrum::{eigenfunction_reports, kratzer_spectrum, spectrum_reports, SPECTRUM_TOLERANCE};
