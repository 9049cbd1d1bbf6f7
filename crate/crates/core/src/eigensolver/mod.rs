//! Dense eigensolvers and the finite-difference Schrodinger operator.
//!
//! Everything here is single-threaded and reentrant, so independent solves
//! may run on separate threads.

mod jacobi;
mod qr;
mod schrodinger;

pub use jacobi::{hermitian_eigen, pd_roots, sqrt_pd, PdRoots};
pub use qr::{general_complex_eigen, general_complex_eigen_vectors, SpectrumResult, MAX_DIMENSION};
pub use schrodinger::discretize_schrodinger;
