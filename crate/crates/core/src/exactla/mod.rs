//! Exact rational linear algebra: scalars, dense matrices, canonical subspaces.

mod matrix;
mod scalar;
mod subspace;

pub use matrix::{unit_vector, vec_add, vec_axpy, vec_is_zero, vec_scale, vec_sub, Matrix};
pub use scalar::{q, qq, Scalar};
pub use subspace::{preimage_pullback, Subspace};
