//! Exact scalar arithmetic over small prime fields and arbitrary-precision
//! rationals, plus exact dense linear algebra (rank, solve, subspace
//! intersection, projective point enumeration).
//!
//! Everything here is immutable after construction and pure; no floating
//! point anywhere.

mod scalar;
mod matrix;
mod linalg;

pub use scalar::{FieldDescriptor, Scalar};
pub use matrix::{solve_linear, Matrix};
pub use linalg::{
    in_span, projective_points, row_basis, span_dim, subspace_intersect, QuotientMap,
};
