use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::op::WeylOp;
use crate::error::{Error, Result};
use crate::exactalg::rational::{fmt_rational, is_negative};
use crate::exactalg::{Monomial, Rational};

/// A finite combination `Σ c_a x^{-a}` (all `a_i >= 1`) in the injective
/// hull of the residue field, modelled on inverse monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EElement {
    n_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl EElement {
    pub fn zero(n_vars: usize) -> Self {
        EElement { n_vars, terms: BTreeMap::new() }
    }

    /// `c x^{-a}`; every `a_i` must be at least 1.
    pub fn monomial(a: Monomial, c: Rational) -> Result<Self> {
        if a.contains(&0) {
            return Err(Error::Domain(format!("inverse exponents must be >= 1, got {a:?}")));
        }
        let mut e = Self::zero(a.len());
        e.add_term(a, c);
        Ok(e)
    }

    /// The socle generator `x^{-(1,...,1)}`.
    pub fn socle(n_vars: usize) -> Self {
        Self::monomial(vec![1; n_vars], Rational::one()).expect("valid exponents")
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: &[u32]) -> Rational {
        self.terms.get(a).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, a: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(a.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n_vars != other.n_vars {
            return Err(Error::Dimension { expected: self.n_vars, found: other.n_vars });
        }
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.n_vars);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect();
        }
        out
    }
}

impl fmt::Display for EElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (a, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = if neg { -c.clone() } else { c.clone() };
            if !abs.is_one() {
                write!(f, "{}*", fmt_rational(&abs))?;
            }
            let parts: Vec<String> = a.iter().enumerate().map(|(i, e)| format!("x{i}^-{e}")).collect();
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for EElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EElement[{}]({})", self.n_vars, self)
    }
}

/// `∂_i x^{-a} = -a_i x^{-a-e_i}` and `x_i x^{-a} = x^{-a+e_i}` (zero once
/// an exponent would drop below 1). Each term applies `∂^β` then `x^α`.
pub fn act_on_e(op: &WeylOp, e: &EElement) -> Result<EElement> {
    if op.n_vars() != e.n_vars {
        return Err(Error::Dimension { expected: op.n_vars(), found: e.n_vars });
    }
    let mut out = EElement::zero(e.n_vars);
    for ((alpha, beta), c) in op.terms() {
        'terms: for (a, v) in &e.terms {
            let mut exps = a.clone();
            let mut coef = BigInt::one();
            for i in 0..e.n_vars {
                // ∂^b x^{-a} = (-1)^b a (a+1) ... (a+b-1) x^{-a-b}
                for k in 0..beta[i] {
                    coef *= -BigInt::from(a[i] + k);
                }
                exps[i] += beta[i];
                if exps[i] <= alpha[i] {
                    continue 'terms;
                }
                exps[i] -= alpha[i];
            }
            out.add_term(exps, c * v * Rational::from_integer(coef));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{factorial, int};
    use crate::parse::parse_op;
    use std::collections::{HashSet, VecDeque};

    fn inv(a: &[u32]) -> EElement {
        EElement::monomial(a.to_vec(), int(1)).unwrap()
    }

    #[test]
    fn multiplying_past_the_socle() {
        assert!(act_on_e(&WeylOp::x(1, 0), &inv(&[1])).unwrap().is_zero());
        assert_eq!(act_on_e(&WeylOp::x(1, 0), &inv(&[3])).unwrap(), inv(&[2]));
    }

    #[test]
    fn derivation_of_factorial_image() {
        for l in 0..10u32 {
            let e = EElement::monomial(vec![l + 1], Rational::from_integer(factorial(l))).unwrap();
            let got = act_on_e(&WeylOp::d(1, 0), &e).unwrap();
            let want = EElement::monomial(vec![l + 2], -Rational::from_integer(factorial(l + 1))).unwrap();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn mixed_generators() {
        let op = parse_op("x0 d1", Some(2)).unwrap();
        assert_eq!(act_on_e(&op, &inv(&[2, 1])).unwrap(), inv(&[1, 2]).scale(&int(-1)));
    }

    #[test]
    fn rejects_nonpositive_exponents() {
        assert!(EElement::monomial(vec![1, 0], int(1)).is_err());
    }

    #[test]
    fn module_axiom_on_samples() {
        let ops = ["x0 d0", "d0^2 + x1", "x0^2 d1 - 3", "d1 x1 x0", "(x0 + d1)^2"];
        let elems = [inv(&[2, 3]), inv(&[1, 1]).add(&inv(&[4, 1]).scale(&int(5))).unwrap(), inv(&[3, 2])];
        for a in ops {
            for b in ops {
                let (a, b) = (parse_op(a, Some(2)).unwrap(), parse_op(b, Some(2)).unwrap());
                for v in &elems {
                    let lhs = act_on_e(&a.mul(&b).unwrap(), v).unwrap();
                    let rhs = act_on_e(&a, &act_on_e(&b, v).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    /// From any monomial with exponents <= 3 in <= 3 variables, the
    /// generators reach the socle by breadth-first search over monomials.
    #[test]
    fn every_monomial_generates_the_socle() {
        for n in 1..=3usize {
            let gens: Vec<WeylOp> = (0..n).flat_map(|i| [WeylOp::x(n, i), WeylOp::d(n, i)]).collect();
            let socle: Monomial = vec![1; n];
            let total = 3usize.pow(n as u32);
            for idx in 0..total {
                let start: Monomial = (0..n).map(|i| (idx / 3usize.pow(i as u32) % 3) as u32 + 1).collect();
                let mut seen = HashSet::from([start.clone()]);
                let mut queue = VecDeque::from([start.clone()]);
                let mut found = false;
                while let Some(a) = queue.pop_front() {
                    if a == socle {
                        found = true;
                        break;
                    }
                    for g in &gens {
                        let img = act_on_e(g, &inv(&a)).unwrap();
                        for (b, _) in img.terms() {
                            if b.iter().all(|&e| e <= 5) && seen.insert(b.clone()) {
                                queue.push_back(b.clone());
                            }
                        }
                    }
                }
                assert!(found, "socle not reached from {start:?}");
            }
        }
    }

    /// The map x^l -> l! x^{-l-1} intertwines the actions with ∂ on E
    /// matching -x on A: ∂ φ(x^l) = -φ(x · x^l), and φ(∂ x^l) = x φ(x^l).
    #[test]
    fn factorial_map_intertwines() {
        let phi = |l: u32| EElement::monomial(vec![l + 1], Rational::from_integer(factorial(l))).unwrap();
        let (x, d) = (WeylOp::x(1, 0), WeylOp::d(1, 0));
        for l in 0..=20u32 {
            let lhs = act_on_e(&d, &phi(l)).unwrap();
            assert_eq!(lhs, phi(l + 1).scale(&int(-1)));
            let dphi = if l == 0 { EElement::zero(1) } else { phi(l - 1).scale(&int(l as i64)) };
            assert_eq!(dphi, act_on_e(&x, &phi(l)).unwrap());
        }
    }
}
