//! Exact integer and rational dense linear algebra.

mod int_matrix;
mod lattice;
mod normal_form;
mod rat_matrix;

pub use int_matrix::IntMatrix;
pub use lattice::{
    complete_to_unimodular, form_norm, gram_matrix, lattice_reduce, short_vectors, QuadraticForm, ReducedLattice,
    LLL_DELTA,
};
pub use normal_form::{
    hnf, hnf_basis, hnf_with_transform, integer_left_kernel, integer_right_kernel, lattice_index, lattice_intersection,
    saturate, snf, SNFResult,
};
pub use rat_matrix::{primitive_integer_vector, rat, RatMatrix, Solution};

use crate::error::Result;

/// Exact solution of `a · x = b` together with a kernel basis of `a`.
pub fn solve_rational(a: &RatMatrix, b: &RatMatrix) -> Result<Solution> {
    a.solve(b)
}
