//! Exact arithmetic foundation: rationals, sparse polynomials, truncated
//! power series and sparse rational linear algebra.

pub mod matrix;
pub mod poly;
pub mod rational;
pub mod series;

pub use matrix::GradedMatrix;
pub use poly::{graded_piece_basis, Monomial, MultiPoly};
pub use rational::{int, rat, Rational};
pub use series::TruncatedSeries;
