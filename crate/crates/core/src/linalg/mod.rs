//! Dense linear algebra over a [`Field`](crate::scalar::Field): products,
//! exact solves and kernels, characteristic polynomials and Sturm counts.

mod echelon;
mod matrix;
mod poly;

pub use echelon::{inverse, nullspace, rank, solve_exact, span_basis, Echelon, SparseRow};
pub use matrix::Matrix;
pub use poly::{char_poly, Polynomial};
