//! Numerical realization of non-regular nonlinear pseudo-bosons (NLPB) and
//! quasi-Hermitian operator structures in finite truncation.
//!
//! The crate is organised bottom-up:
//!
//! - [`special`]: Laguerre polynomials, generalized factorials and truncated
//!   Taylor series used for exact differentiation.
//! - [`contour`]: real-line grids, the weighted `L²` inner product, finite
//!   differences and residual norms.
//! - [`eigensolver`]: self-contained dense kernels (Jacobi for Hermitian
//!   matrices, positive square roots, Hessenberg/QR for general complex
//!   matrices) and the finite-difference Schrödinger discretization.
//! - [`pseudoboson`]: ladder matrices, Gram and metric operators, oblique
//!   projectors, intertwining relations and hermitization.
//! - [`models`]: the regularized PT-symmetric (Kratzer) oscillator, its
//!   supersymmetric factorization and second-order ladder operators, and the
//!   cubic-superpotential model.
//!
//! Checks that compare a computed quantity with a target return a
//! [`VerificationReport`].

pub mod contour;
pub mod eigensolver;
mod error;
pub mod models;
pub mod pseudoboson;
mod report;
pub mod special;

pub use error::{Error, Result};
pub use report::{ParamValue, VerificationReport};

pub use num_complex::Complex64;

/// Dense complex matrix used for coordinate and grid operators.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
