//! Dense complex linear algebra for the small matrices used throughout the crate.

mod eig;
mod expm;
mod inverse;
mod matrix;

pub use eig::{herm_eig, herm_eigenvalues, HermEig, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use expm::mat_exp;
pub use inverse::{invert, PIVOT_TOL};
pub use matrix::{adjoint, frob_norm, matmul, ComplexMatrix};
pub use num_complex::Complex64;
