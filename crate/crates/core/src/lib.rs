//! Exact computations with modules over the Weyl algebra: normal ordering,
//! actions on polynomials, inverse monomials and pole elements, truncated
//! de Rham cohomology, Hodge/Betti structure predictions and series
//! decompositions of regular operators.

pub mod cli;
pub mod derham;
pub mod error;
pub mod exactalg;
pub mod parse;
pub mod seriesdecomp;
pub mod structure;
pub mod weyl;

pub use error::{Error, Result};
