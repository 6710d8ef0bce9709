//! Exact rational scalars, sparse polynomials, linear forms and linear
//! algebra.

mod linear_form;
mod matrix;
mod modular;
mod poly;
pub mod rational;

pub use linear_form::LinearForm;
pub use matrix::{kernel, poly_det, RationalMatrix};
pub(crate) use matrix::{kernel_sparse, rref_rows, Echelon, SparseRow};
pub use poly::{count_monomials, monomials_of_degree, poly_arith, Monomial, PolyOp, Polynomial};
pub(crate) use poly::LinearPowerExpander;
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
