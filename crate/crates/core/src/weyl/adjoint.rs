//! Formal adjoints in one distinguished variable (`x_0`, `∂_0`) and the
//! integration-by-parts identity `b Q = P(b) + ∂ R`.

use super::op::WeylOp;
use crate::error::{Error, Result};
use crate::exactalg::{int, MultiPoly};

fn require_single_derivation(q: &WeylOp) -> Result<()> {
    if q.only_derivation(0) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("operator {q} involves ∂_j for j != 0")))
    }
}

/// The anti-involution fixing every `x_j` and sending `∂_0` to `-∂_0`.
///
/// Writing `Q = Σ (-1)^i ∂^i a_i`, this returns `P = Σ a_i ∂^i`; applying
/// it twice is the identity.
pub fn formal_adjoint(q: &WeylOp) -> Result<WeylOp> {
    require_single_derivation(q)?;
    let n = q.n_vars();
    let mut out = WeylOp::zero(n);
    let minus_d = WeylOp::d(n, 0).scale(&int(-1));
    for ((alpha, beta), c) in q.terms() {
        let x = WeylOp::term(n, alpha.clone(), vec![0; n], c.clone());
        out = out.add(&minus_d.pow(beta[0]).mul(&x)?)?;
    }
    Ok(out)
}

/// Left coefficients `a_i` of `P = Σ a_i ∂_0^i`.
pub fn left_coefficients(p: &WeylOp) -> Result<Vec<MultiPoly>> {
    require_single_derivation(p)?;
    let n = p.n_vars();
    let mut out = vec![MultiPoly::zero(n); p.order_in(0) as usize + 1];
    for ((alpha, beta), c) in p.terms() {
        out[beta[0] as usize].add_term(alpha.clone(), c.clone());
    }
    Ok(out)
}

/// Witness of `b Q = P(b) + ∂_0 R`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerIdentity {
    pub p: WeylOp,
    pub r: WeylOp,
    /// `b Q - P(b) - ∂_0 R`; always zero on success.
    pub residual: WeylOp,
}

/// `R_i(f, g) = R_{i-1}(∂f, g) + (-1)^i f ∂^{i-1} g` with `R_0 = 0`,
/// unrolled to `Σ_{j=1..i} (-1)^j (∂^{i-j} f) ∂^{j-1} g`.
fn r_term(i: u32, f: &MultiPoly, g: &MultiPoly) -> Result<WeylOp> {
    let n = f.n_vars();
    let gop = WeylOp::from_poly(g);
    let mut out = WeylOp::zero(n);
    for j in 1..=i {
        let sign = if j % 2 == 0 { int(1) } else { int(-1) };
        let coeff = WeylOp::from_poly(&f.partial_k(0, i - j)?.scale(&sign));
        out = out.add(&coeff.mul(&WeylOp::d(n, 0).pow(j - 1))?.mul(&gop)?)?;
    }
    Ok(out)
}

/// Builds `R` for `Q` and `b` and verifies the identity exactly. A nonzero
/// residual is reported as an internal-consistency error. Truncated series
/// are passed through their polynomial truncation.
pub fn check_euler_identity(q: &WeylOp, b: &MultiPoly) -> Result<EulerIdentity> {
    if q.n_vars() != b.n_vars() {
        return Err(Error::Dimension { expected: q.n_vars(), found: b.n_vars() });
    }
    let p = formal_adjoint(q)?;
    let n = q.n_vars();
    let mut r = WeylOp::zero(n);
    for (i, a) in left_coefficients(&p)?.iter().enumerate().skip(1) {
        r = r.add(&r_term(i as u32, b, a)?)?;
    }
    let lhs = WeylOp::from_poly(b).mul(q)?;
    let pb = WeylOp::from_poly(&p.act_on_poly(b)?);
    let residual = lhs.sub(&pb)?.sub(&WeylOp::d(n, 0).mul(&r)?)?;
    if !residual.is_zero() {
        return Err(Error::InternalConsistency(format!("b Q - P(b) - ∂R = {residual} for Q = {q}, b = {b}")));
    }
    Ok(EulerIdentity { p, r, residual })
}
