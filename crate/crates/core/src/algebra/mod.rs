//! Exact arithmetic: finite fields, univariate polynomials, binary forms,
//! the rational function field of the affine chart and linear algebra.

pub mod field;
pub mod form;
pub mod gf;
pub mod matrix;
pub mod poly;
pub mod ratfunc;

pub use field::{Field, FiniteField};
pub use form::{form_gcd, Form};
pub use gf::{is_prime, GaloisField, Gf};
pub use matrix::{poly_matrix, primitive_part, rat_kernel, Matrix, RatMatrix};
pub use poly::Poly;
pub use ratfunc::RatFunc;
