//! Decomposition of power series along an ordinary differential operator in
//! the distinguished variable `x0`, over `B = k[[x1, …]]`: every `f` is a
//! finite residue `Σ_{i<s} e_i x0^i` plus `Σ_ℓ b_ℓ P(x0^ℓ)`, and the residue
//! sinks deeper into `m_B` as `f` becomes divisible by higher powers of `x0`.

mod decompose;
mod operator;

pub use decompose::{
    decompose, decompose_traced, decompose_within, reconstruction_residual, valuation_growth_probe, Decomposition, Sweep, ValuationRow,
    ValuationTable, DEFAULT_MAX_TRACKED_DEGREE,
};
pub use operator::{analyze_operator, expansion_coeffs, OperatorAnalysis, RegularOperator};
