//! Exact linear algebra over the rationals.

mod elim;
mod matrix;
mod simplex;

pub(crate) use elim::pivot_on as pivot_in_place;
pub use elim::{nullspace_basis, rank, rref, solve_linear, EchelonBasis};
pub use matrix::Matrix;
pub use simplex::{
    simplex_feasible_nonneg, simplex_maximize, Constraint, LpOutcome, LpProblem, Relation,
};
