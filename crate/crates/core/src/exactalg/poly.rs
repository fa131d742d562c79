use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{fmt_rational, int, is_negative, Rational};
use crate::error::{Error, Result};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

pub fn monomial_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Sparse multivariate polynomial over `Rational`.
///
/// Terms live in a `BTreeMap` keyed by exponent vector, so iteration order
/// is the (ascending) lexicographic order and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    n_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(n_vars: usize) -> Self {
        MultiPoly { n_vars, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rational::one())
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        Self::monomial(n_vars, vec![0; n_vars], c)
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        assert!(i < n_vars, "variable x{i} out of range");
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Self::monomial(n_vars, e, Rational::one())
    }

    pub fn monomial(n_vars: usize, exps: Monomial, c: Rational) -> Self {
        assert_eq!(exps.len(), n_vars);
        let mut p = Self::zero(n_vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms<I>(n_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(n_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Re-embeds into a ring with `n_vars` variables. Shrinking is allowed
    /// only when the dropped variables do not occur.
    pub fn with_n_vars(&self, n_vars: usize) -> Result<Self> {
        if let Some(bad) = self.terms.keys().flat_map(|m| m.iter().enumerate().skip(n_vars)).find(|(_, &e)| e > 0) {
            return Err(Error::VariableIndex { index: bad.0, n_vars });
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.clone();
                e.resize(n_vars, 0);
                (e, c.clone())
            })
            .collect();
        Ok(MultiPoly { n_vars, terms })
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c * x^m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.len(), self.n_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| monomial_degree(m)).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[i]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| monomial_degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    /// The single term, if the polynomial is a monomial times a constant.
    pub fn as_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::Dimension { expected: self.n_vars, found: other.n_vars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.n_vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars);
        }
        MultiPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by the monomial `x^m`.
    pub fn shift(&self, m: &[u32]) -> Self {
        MultiPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n_vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.n_vars {
            return Err(Error::VariableIndex { index: i, n_vars: self.n_vars });
        }
        let mut out = Self::zero(self.n_vars);
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut e = m.clone();
                e[i] -= 1;
                out.add_term(e, c * int(m[i] as i64));
            }
        }
        Ok(out)
    }

    /// `∂^k/∂x_i^k`.
    pub fn partial_k(&self, i: usize, k: u32) -> Result<Self> {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.partial(i)?;
        }
        Ok(p)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.n_vars {
            return Err(Error::Dimension { expected: self.n_vars, found: point.len() });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Largest term in lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Division by a single polynomial with respect to lex order.
    /// Returns `(quotient, remainder)`; the remainder has no term divisible
    /// by the leading monomial of `f`, which makes it the unique normal form
    /// modulo the principal ideal `(f)`.
    pub fn div_rem(&self, f: &Self) -> Result<(Self, Self)> {
        self.check_same(f)?;
        let (lm, lc) = match f.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::Domain("division by zero polynomial".into())),
        };
        let mut quot = Self::zero(self.n_vars);
        let mut rem = Self::zero(self.n_vars);
        let mut work = self.clone();
        while let Some((m, c)) = work.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if m.iter().zip(&lm).all(|(a, b)| a >= b) {
                let qm: Monomial = m.iter().zip(&lm).map(|(a, b)| a - b).collect();
                let qc = &c / &lc;
                work = &work - &f.shift(&qm).scale(&qc);
                quot.add_term(qm, qc);
            } else {
                work.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        Ok((quot, rem))
    }

    /// Exact quotient `self / f` when `f` divides `self`.
    pub fn div_exact(&self, f: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(f).ok()?;
        r.is_zero().then_some(q)
    }

    /// Denominator-free integer content normalisation helper: lcm of
    /// denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names(i) } else { format!("{}^{}", names(i), e) })
                .collect();
            if vars.is_empty() {
                out.push_str(&fmt_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&vars.join("*"));
            } else {
                out.push_str(&fmt_rational(&abs));
                out.push('*');
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

pub fn var_name(i: usize) -> String {
    format!("x{i}")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&var_name))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.n_vars, self)
    }
}

// Operator impls panic on a variable-count mismatch; use the `try_*`
// methods when the inputs are not already known to agree.
impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomial add")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("polynomial sub")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial mul")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

/// All monomials of total degree `degree` in `n_vars` variables, in
/// lexicographic order (`x0^d` first). Empty for negative degrees.
pub fn graded_piece_basis(degree: i64, n_vars: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    if degree < 0 {
        return out;
    }
    if n_vars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u32; n_vars];
    fill_graded(degree as u32, 0, &mut cur, &mut out);
    out
}

fn fill_graded(rem: u32, i: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
    if i + 1 == cur.len() {
        cur[i] = rem;
        out.push(cur.clone());
        return;
    }
    for e in (0..=rem).rev() {
        cur[i] = e;
        fill_graded(rem - e, i + 1, cur, out);
    }
    cur[i] = 0;
}
