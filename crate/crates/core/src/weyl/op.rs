use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::poly::{var_name, Monomial};
use crate::exactalg::rational::{binomial, falling_factorial, fmt_rational, is_negative, Rational};
use crate::exactalg::MultiPoly;

/// Key of a normally ordered term `x^alpha ∂^beta`.
pub type OpKey = (Monomial, Monomial);

/// A differential operator `Σ c x^α ∂^β` with polynomial coefficients,
/// always stored in normal order (every `x` to the left of every `∂`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylOp {
    n_vars: usize,
    terms: BTreeMap<OpKey, Rational>,
}

/// A generator of the Weyl algebra, used for raw (unordered) words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    X(usize),
    D(usize),
}

impl WeylOp {
    pub fn zero(n_vars: usize) -> Self {
        WeylOp { n_vars, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rational::one())
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        Self::term(n_vars, vec![0; n_vars], vec![0; n_vars], c)
    }

    pub fn term(n_vars: usize, alpha: Monomial, beta: Monomial, c: Rational) -> Self {
        assert!(alpha.len() == n_vars && beta.len() == n_vars);
        let mut op = Self::zero(n_vars);
        op.add_term(alpha, beta, c);
        op
    }

    pub fn x(n_vars: usize, i: usize) -> Self {
        let mut a = vec![0; n_vars];
        a[i] = 1;
        Self::term(n_vars, a, vec![0; n_vars], Rational::one())
    }

    pub fn d(n_vars: usize, i: usize) -> Self {
        let mut b = vec![0; n_vars];
        b[i] = 1;
        Self::term(n_vars, vec![0; n_vars], b, Rational::one())
    }

    /// Multiplication by a polynomial, as a zeroth-order operator.
    pub fn from_poly(p: &MultiPoly) -> Self {
        let n = p.n_vars();
        let mut op = Self::zero(n);
        for (m, c) in p.terms() {
            op.add_term(m.clone(), vec![0; n], c.clone());
        }
        op
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpKey, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, alpha: Monomial, beta: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (alpha, beta);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// The polynomial this operator multiplies by, if it has no `∂`.
    pub fn as_poly(&self) -> Option<MultiPoly> {
        let mut p = MultiPoly::zero(self.n_vars);
        for ((a, b), c) in &self.terms {
            if b.iter().any(|&e| e > 0) {
                return None;
            }
            p.add_term(a.clone(), c.clone());
        }
        Some(p)
    }

    /// Highest power of `∂_i` occurring.
    pub fn order_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|(_, b)| b[i]).max().unwrap_or(0)
    }

    /// True when no `∂_j` with `j != i` occurs.
    pub fn only_derivation(&self, i: usize) -> bool {
        self.terms.keys().all(|(_, b)| b.iter().enumerate().all(|(j, &e)| j == i || e == 0))
    }

    fn check_same(&self, n: usize) -> Result<()> {
        if self.n_vars != n {
            return Err(Error::Dimension { expected: self.n_vars, found: n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other.n_vars)?;
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.n_vars);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        }
        out
    }

    /// Composition `self ∘ other`, normally ordered through
    /// `∂^b x^c = Σ_k C(b,k) c(c-1)..(c-k+1) x^(c-k) ∂^(b-k)` per variable.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other.n_vars)?;
        let n = self.n_vars;
        let mut out = Self::zero(n);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                // expand ∂^b1 x^a2 one variable at a time
                let mut partial: Vec<(Monomial, Monomial, BigInt)> = vec![(a1.clone(), vec![0; n], BigInt::one())];
                for i in 0..n {
                    let (b, c) = (b1[i] as u64, a2[i] as u64);
                    let mut next = Vec::new();
                    for (xa, db, w) in &partial {
                        for k in 0..=b.min(c) {
                            let coef = binomial(b, k) * falling_factorial(c, k);
                            let mut xa = xa.clone();
                            let mut db = db.clone();
                            xa[i] += (c - k) as u32;
                            db[i] += (b - k) as u32;
                            next.push((xa, db, w * &coef));
                        }
                    }
                    partial = next;
                }
                let base = c1 * c2;
                for (xa, db, w) in partial {
                    let beta: Monomial = db.iter().zip(b2).map(|(p, q)| p + q).collect();
                    out.add_term(xa, beta, &base * Rational::from_integer(w));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n_vars);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// `[self, other] = self other - other self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Action on a polynomial: differentiate by `∂^β`, then multiply by `x^α`.
    pub fn act_on_poly(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.check_same(f.n_vars())?;
        let mut out = MultiPoly::zero(self.n_vars);
        for ((a, b), c) in &self.terms {
            let mut g = f.clone();
            for (i, &e) in b.iter().enumerate() {
                g = g.partial_k(i, e)?;
            }
            out = &out + &g.shift(a).scale(c);
        }
        Ok(out)
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in a.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names(i)),
                    _ => factors.push(format!("{}^{}", names(i), e)),
                }
            }
            for (i, &e) in b.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("d{i}")),
                    _ => factors.push(format!("d{i}^{e}")),
                }
            }
            if factors.is_empty() {
                out.push_str(&fmt_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&fmt_rational(&abs));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&var_name))
    }
}

impl fmt::Debug for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOp[{}]({})", self.n_vars, self)
    }
}

fn out_of_order(a: Gen, b: Gen) -> bool {
    match (a, b) {
        (Gen::D(_), Gen::X(_)) => true,
        (Gen::X(i), Gen::X(j)) | (Gen::D(i), Gen::D(j)) => i > j,
        (Gen::X(_), Gen::D(_)) => false,
    }
}

/// Normal ordering by word rewriting, using nothing but bilinearity,
/// commutation of distinct generators and `∂_i x_i = x_i ∂_i + 1`.
/// Rewrites the leftmost out-of-order pair first.
pub fn normal_order(n_vars: usize, raw: &[(Rational, Vec<Gen>)]) -> Result<WeylOp> {
    normal_order_with(n_vars, raw, |_| 0)
}

/// Like [`normal_order`], but `choose(k)` picks which of the `k` available
/// out-of-order pairs to rewrite next. The result does not depend on the
/// choices.
pub fn normal_order_with<F>(n_vars: usize, raw: &[(Rational, Vec<Gen>)], mut choose: F) -> Result<WeylOp>
where
    F: FnMut(usize) -> usize,
{
    for (_, w) in raw {
        for g in w {
            let (Gen::X(i) | Gen::D(i)) = *g;
            if i >= n_vars {
                return Err(Error::VariableIndex { index: i, n_vars });
            }
        }
    }
    let mut stack: Vec<(Rational, Vec<Gen>)> = raw.to_vec();
    let mut out = WeylOp::zero(n_vars);
    while let Some((c, mut word)) = stack.pop() {
        if c.is_zero() {
            continue;
        }
        let redexes: Vec<usize> = (0..word.len().saturating_sub(1)).filter(|&k| out_of_order(word[k], word[k + 1])).collect();
        if redexes.is_empty() {
            let mut alpha = vec![0; n_vars];
            let mut beta = vec![0; n_vars];
            for g in &word {
                match *g {
                    Gen::X(i) => alpha[i] += 1,
                    Gen::D(i) => beta[i] += 1,
                }
            }
            out.add_term(alpha, beta, c);
            continue;
        }
        let k = redexes[choose(redexes.len()) % redexes.len()];
        if let (Gen::D(i), Gen::X(j)) = (word[k], word[k + 1]) {
            if i == j {
                let mut shorter = word.clone();
                shorter.drain(k..k + 2);
                stack.push((c.clone(), shorter));
            }
        }
        word.swap(k, k + 1);
        stack.push((c, word));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::int;
    use proptest::prelude::*;

    #[test]
    fn defining_relation() {
        let op = normal_order(1, &[(int(1), vec![Gen::D(0), Gen::X(0)])]).unwrap();
        let expected = WeylOp::x(1, 0).mul(&WeylOp::d(1, 0)).unwrap().add(&WeylOp::one(1)).unwrap();
        assert_eq!(op, expected);
        assert_eq!(op.to_string(), "x0*d0 + 1");
    }

    #[test]
    fn already_normal() {
        let op = normal_order(1, &[(int(1), vec![Gen::X(0), Gen::D(0)])]).unwrap();
        assert_eq!(op.to_string(), "x0*d0");
    }

    #[test]
    fn d_squared_x() {
        // ∂(∂x) = ∂(x∂ + 1) = (x∂ + 1)∂ + ∂ = x∂² + 2∂
        let op = normal_order(1, &[(int(1), vec![Gen::D(0), Gen::D(0), Gen::X(0)])]).unwrap();
        assert_eq!(op.to_string(), "x0*d0^2 + 2*d0");
    }

    #[test]
    fn commutators() {
        let n = 2;
        let c = WeylOp::d(n, 0).commutator(&WeylOp::x(n, 0)).unwrap();
        assert_eq!(c, WeylOp::one(n));
        assert!(WeylOp::d(n, 0).commutator(&WeylOp::x(n, 1)).unwrap().is_zero());
    }

    #[test]
    fn euler_squared() {
        let e = WeylOp::x(1, 0).mul(&WeylOp::d(1, 0)).unwrap();
        assert_eq!(e.pow(2).to_string(), "x0^2*d0^2 + x0*d0");
    }

    #[test]
    fn action_on_polynomials() {
        let x3 = MultiPoly::var(1, 0).pow(3);
        assert_eq!(WeylOp::d(1, 0).act_on_poly(&x3).unwrap(), MultiPoly::var(1, 0).pow(2).scale(&int(3)));
        let euler = WeylOp::x(1, 0).mul(&WeylOp::d(1, 0)).unwrap();
        for l in 0..8u32 {
            let xl = MultiPoly::var(1, 0).pow(l);
            assert_eq!(euler.act_on_poly(&xl).unwrap(), xl.scale(&int(l as i64)));
        }
    }

    #[test]
    fn out_of_range_generator() {
        assert!(matches!(normal_order(1, &[(int(1), vec![Gen::X(1)])]), Err(Error::VariableIndex { .. })));
    }

    fn arb_word(n: usize) -> impl Strategy<Value = Vec<Gen>> {
        prop::collection::vec((any::<bool>(), 0..n), 0..7)
            .prop_map(|v| v.into_iter().map(|(d, i)| if d { Gen::D(i) } else { Gen::X(i) }).collect())
    }

    pub(crate) fn arb_op(n: usize) -> impl Strategy<Value = WeylOp> {
        prop::collection::vec((prop::collection::vec(0u32..3, n), prop::collection::vec(0u32..3, n), -3i64..4), 0..4)
            .prop_map(move |ts| {
                let mut op = WeylOp::zero(n);
                for (a, b, c) in ts {
                    op.add_term(a, b, int(c));
                }
                op
            })
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((prop::collection::vec(0u32..4, n), -4i64..5), 0..5)
            .prop_map(move |ts| MultiPoly::from_terms(n, ts.into_iter().map(|(m, c)| (m, int(c)))))
    }

    proptest! {
        #[test]
        fn rewriting_is_confluent(w in arb_word(2), seed in any::<u64>()) {
            let raw = vec![(int(1), w.clone())];
            let left = normal_order(2, &raw).unwrap();
            let mut s = seed;
            let random = normal_order_with(2, &raw, |k| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 33) as usize % k
            }).unwrap();
            prop_assert_eq!(&left, &random);
            // and agrees with the closed-form product of generators
            let prod = w.iter().fold(WeylOp::one(2), |acc, g| {
                let gen = match *g { Gen::X(i) => WeylOp::x(2, i), Gen::D(i) => WeylOp::d(2, i) };
                acc.mul(&gen).unwrap()
            });
            prop_assert_eq!(left, prod);
        }

        #[test]
        fn associative(a in arb_op(2), b in arb_op(2), c in arb_op(2)) {
            prop_assert_eq!(a.mul(&b.mul(&c).unwrap()).unwrap(), a.mul(&b).unwrap().mul(&c).unwrap());
        }

        #[test]
        fn module_axiom_on_polys(a in arb_op(2), b in arb_op(2), f in arb_poly(2)) {
            let lhs = a.mul(&b).unwrap().act_on_poly(&f).unwrap();
            let rhs = a.act_on_poly(&b.act_on_poly(&f).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn relation_acts_as_identity(f in arb_poly(1)) {
            let dx = WeylOp::d(1, 0).mul(&WeylOp::x(1, 0)).unwrap();
            let xd = WeylOp::x(1, 0).mul(&WeylOp::d(1, 0)).unwrap();
            let diff = &dx.act_on_poly(&f).unwrap() - &xd.act_on_poly(&f).unwrap();
            prop_assert_eq!(diff, f);
        }
    }
}
