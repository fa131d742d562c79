use std::fmt;

use super::op::WeylOp;
use crate::error::{Error, Result};
use crate::exactalg::{int, MultiPoly};

/// The class `g / f^k` in the localization `A_f`, or in `A_f / A` when
/// `quotient_mod_a` is set. Always held in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PoleElement {
    f: MultiPoly,
    k: u32,
    g: MultiPoly,
    quotient_mod_a: bool,
}

impl PoleElement {
    /// Builds `g / f^k` and canonicalizes it. `f` must be a nonzero
    /// homogeneous polynomial.
    pub fn new(f: MultiPoly, k: u32, g: MultiPoly, quotient_mod_a: bool) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::Domain("pole polynomial f is zero".into()));
        }
        if !f.is_homogeneous() {
            return Err(Error::Domain(format!("pole polynomial {f} is not homogeneous")));
        }
        if f.n_vars() != g.n_vars() {
            return Err(Error::Dimension { expected: f.n_vars(), found: g.n_vars() });
        }
        Ok(Self::canonical(f, k, g, quotient_mod_a))
    }

    pub fn zero(f: MultiPoly, quotient_mod_a: bool) -> Result<Self> {
        let n = f.n_vars();
        Self::new(f, 0, MultiPoly::zero(n), quotient_mod_a)
    }

    fn canonical(f: MultiPoly, mut k: u32, mut g: MultiPoly, quotient_mod_a: bool) -> Self {
        let n = f.n_vars();
        // a constant f is a unit: everything is a polynomial
        if f.is_constant() && k > 0 {
            let c = f.pow(k).coefficient(&vec![0; n]);
            g = g.scale(&(int(1) / c));
            k = 0;
        }
        loop {
            if quotient_mod_a {
                g = if k == 0 { MultiPoly::zero(n) } else { g.div_rem(&f.pow(k)).expect("same ring").1 };
            }
            if g.is_zero() {
                k = 0;
                break;
            }
            if k == 0 {
                break;
            }
            match g.div_exact(&f) {
                Some(q) => {
                    g = q;
                    k -= 1;
                }
                None => break,
            }
        }
        PoleElement { f, k, g, quotient_mod_a }
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn g(&self) -> &MultiPoly {
        &self.g
    }

    pub fn quotient_mod_a(&self) -> bool {
        self.quotient_mod_a
    }

    pub fn is_zero(&self) -> bool {
        self.g.is_zero()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.f != other.f || self.quotient_mod_a != other.quotient_mod_a {
            return Err(Error::Inconsistent("pole elements over different localizations".into()));
        }
        Ok(())
    }

    /// Numerator over the common denominator `f^k` with `k >= self.k`.
    fn numerator_at(&self, k: u32) -> MultiPoly {
        &self.g * &self.f.pow(k - self.k)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let k = self.k.max(other.k);
        let g = &self.numerator_at(k) + &other.numerator_at(k);
        Ok(Self::canonical(self.f.clone(), k, g, self.quotient_mod_a))
    }

    /// `∂_i (g / f^k) = (f ∂_i g - k g ∂_i f) / f^{k+1}`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        let dg = self.g.partial(i)?;
        let df = self.f.partial(i)?;
        let num = &(&self.f * &dg) - &(&self.g * &df).scale(&int(self.k as i64));
        Ok(Self::canonical(self.f.clone(), self.k + 1, num, self.quotient_mod_a))
    }

    /// Multiplication by a polynomial.
    pub fn mul_poly(&self, p: &MultiPoly) -> Result<Self> {
        let g = self.g.try_mul(p)?;
        Ok(Self::canonical(self.f.clone(), self.k, g, self.quotient_mod_a))
    }
}

impl fmt::Display for PoleElement {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            0 => write!(fm, "{}", self.g),
            1 => write!(fm, "({}) / ({})", self.g, self.f),
            k => write!(fm, "({}) / ({})^{}", self.g, self.f, k),
        }
    }
}

impl fmt::Debug for PoleElement {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.quotient_mod_a { "A_f/A" } else { "A_f" };
        write!(fm, "PoleElement[{tag}]({self})")
    }
}

/// Applies each normally ordered term (`∂^β` first, then `x^α`) and sums
/// the results into one canonical element.
pub fn act_on_pole(op: &WeylOp, p: &PoleElement) -> Result<PoleElement> {
    let n = p.f.n_vars();
    if op.n_vars() != n {
        return Err(Error::Dimension { expected: op.n_vars(), found: n });
    }
    let mut acc = PoleElement::canonical(p.f.clone(), 0, MultiPoly::zero(n), p.quotient_mod_a);
    for ((alpha, beta), c) in op.terms() {
        let mut t = p.clone();
        for (i, &b) in beta.iter().enumerate() {
            for _ in 0..b {
                t = t.partial(i)?;
            }
        }
        t = t.mul_poly(&MultiPoly::monomial(n, alpha.clone(), c.clone()))?;
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_op, parse_poly};

    fn pole(f: &str, k: u32, g: &str, n: usize, q: bool) -> PoleElement {
        PoleElement::new(parse_poly(f, Some(n)).unwrap(), k, parse_poly(g, Some(n)).unwrap(), q).unwrap()
    }

    #[test]
    fn quotient_rule_in_one_variable() {
        let p = pole("x", 1, "1", 1, false);
        let got = act_on_pole(&WeylOp::d(1, 0), &p).unwrap();
        assert_eq!(got, pole("x", 2, "-1", 1, false));
    }

    #[test]
    fn quotient_rule_fermat_cubic() {
        let f = "x^3 + y^3 + z^3";
        let got = act_on_pole(&WeylOp::d(3, 0), &pole(f, 1, "1", 3, false)).unwrap();
        assert_eq!(got, pole(f, 2, "-3x^2", 3, false));
    }

    #[test]
    fn canonical_forms() {
        let p = pole("x^2", 1, "x", 1, false);
        let got = act_on_pole(&WeylOp::x(1, 0), &p).unwrap();
        assert_eq!(got.k(), 0);
        assert_eq!(got.g(), &parse_poly("1", Some(1)).unwrap());
        let q = pole("x^2", 1, "x", 1, true);
        assert!(act_on_pole(&WeylOp::x(1, 0), &q).unwrap().is_zero());
        // dividing out f greedily
        let r = pole("x + y", 3, "(x+y)^2 x", 2, false);
        assert_eq!((r.k(), r.g().clone()), (1, parse_poly("x", Some(2)).unwrap()));
    }

    #[test]
    fn errors() {
        let n = MultiPoly::zero(1);
        assert!(matches!(PoleElement::new(n.clone(), 1, n, false), Err(Error::Domain(_))));
        let f = parse_poly("x + 1", None).unwrap();
        assert!(matches!(PoleElement::new(f, 1, MultiPoly::one(1), false), Err(Error::Domain(_))));
    }

    #[test]
    fn module_axiom_on_samples() {
        let f = "x^2 + y^2";
        let ops = ["x0 d0 + x1 d1", "d0^2", "x1 d0 - 2", "d1 x0 x1", "(x0 + d1)^2"];
        for q in [false, true] {
            let elems = [pole(f, 1, "1", 2, q), pole(f, 2, "x y + 3", 2, q), pole(f, 3, "x^5", 2, q)];
            for a in ops {
                for b in ops {
                    let (a, b) = (parse_op(a, Some(2)).unwrap(), parse_op(b, Some(2)).unwrap());
                    for v in &elems {
                        let lhs = act_on_pole(&a.mul(&b).unwrap(), v).unwrap();
                        let rhs = act_on_pole(&a, &act_on_pole(&b, v).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
