//! Exact arithmetic over finite fields: elements, polynomials, matrices.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod textfmt;

pub use field::{Field, Fq, SquareClass};
pub use matrix::{vec_ops, FqMatrix, Vector};
pub use poly::FqPoly;
