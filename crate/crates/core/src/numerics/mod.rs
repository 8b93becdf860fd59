//! Arithmetic substrate: exact and float scalars, dense and sparse matrices,
//! exact elimination, small eigensolvers, and the Runge-Kutta integrator.

pub mod eigen;
pub mod elimination;
pub mod matrix;
pub mod ode;
pub mod qr;
pub mod scalar;
pub mod sparse;

pub use eigen::{eig_hermitian_small, eigenvalues_general, HermitianEigen};
pub use elimination::{
    fraction_free_echelon, inverse_exact, nullspace_exact, rank, rref, solve_exact,
    sparse_nullspace, SparseKernel,
};
pub use matrix::{ComplexMatrix, Matrix, RationalMatrix};
pub use ode::{dopri5, dopri5_fixed, ode_transport, OdeFailure, OdeOptions, Transported};
pub use qr::nullspace_float;
pub use scalar::{int, rat, rational_to_f64, QuadNum, Rational, Scalar, C64};
pub use sparse::SparseOperator;
