//! Nonlinear pseudo-bosons in finite truncation.
//!
//! Two representations coexist. Coordinate matrices (`N x N`, basis
//! `Phi_0..Phi_{N-1}`) carry the ladder algebra; there `S_Phi` is `g_phi`
//! and `S_eta` is `g_eta`. Grid operators (`m x m`) carry adjoints and the
//! dyadic sums `sum c_n |left_n><right_n|`.

mod biortho;
mod epsilon;
mod grid_op;
mod ladder;
mod metric;

pub use biortho::{
    biorthogonality_matrix, combine, condition_number, deviation_from_identity, gram,
    gram_matrices, BiorthogonalSystem, GramPair, BIORTHO_TOLERANCE,
};
pub use epsilon::EpsilonSequence;
pub use grid_op::{dyadic_operator, oblique_projector, GridOperator};
pub use ladder::{build_ladder_matrices, number_operators, TruncatedLadder};
pub use metric::{
    hermitize, interior, intertwining_residual, number_intertwining_residual, riesz_diagnostic,
    theta_factorization_residual, HermitizedSystem, RieszDiagnostic, RieszRow, RieszVerdict,
    GROWTH_MARGIN, OPERATOR_TOLERANCE,
};
