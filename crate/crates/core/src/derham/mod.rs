//! De Rham cohomology `H^j_DR(M)` of explicit modules over the Weyl
//! algebra: closed forms, pole-order truncation, rank-one connections and
//! long-exact-sequence splicing.

pub mod closed;
pub mod rank_one;
pub mod spec;
pub mod truncated;

pub use closed::{derham_closed_form, les_splice};
pub use rank_one::{completion_flattening, derham_rank_one};
pub use spec::{DeRhamDims, ModuleSpec};
pub use truncated::{derham_stabilized, derham_truncated, jacobian_is_zero_dimensional, stabilization_threshold, FormLabel, StabilizationReport};
