use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::poly::{monomial_degree, var_name, Monomial, MultiPoly};
use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// A power series in `n_vars` variables known modulo all monomials of total
/// degree `>= precision`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    n_vars: usize,
    precision: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl TruncatedSeries {
    pub fn zero(n_vars: usize, precision: u32) -> Self {
        TruncatedSeries { n_vars, precision, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize, precision: u32) -> Self {
        Self::constant(n_vars, precision, Rational::one())
    }

    pub fn constant(n_vars: usize, precision: u32, c: Rational) -> Self {
        Self::from_poly(&MultiPoly::constant(n_vars, c), precision)
    }

    pub fn var(n_vars: usize, precision: u32, i: usize) -> Self {
        Self::from_poly(&MultiPoly::var(n_vars, i), precision)
    }

    /// Truncates a polynomial to the given precision.
    pub fn from_poly(p: &MultiPoly, precision: u32) -> Self {
        TruncatedSeries {
            n_vars: p.n_vars(),
            precision,
            terms: p
                .terms()
                .filter(|(m, _)| monomial_degree(m) < precision)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(self.n_vars, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.n_vars])
    }

    /// Lowest total degree of a stored term; `None` for the zero series.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|m| monomial_degree(m)).min()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || monomial_degree(&m) >= self.precision {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Drops to a lower precision (no-op if `precision` is not lower).
    pub fn truncate(&self, precision: u32) -> Self {
        let precision = precision.min(self.precision);
        TruncatedSeries {
            n_vars: self.n_vars,
            precision,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| monomial_degree(m) < precision)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::Dimension { expected: self.n_vars, found: other.n_vars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.truncate(other.precision);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.n_vars, self.precision);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let precision = self.precision.min(other.precision);
        let mut out = Self::zero(self.n_vars, precision);
        for (m1, c1) in &self.terms {
            let d1 = monomial_degree(m1);
            if d1 >= precision {
                continue;
            }
            for (m2, c2) in &other.terms {
                if d1 + monomial_degree(m2) >= precision {
                    continue;
                }
                out.add_term(m1.iter().zip(m2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnit);
        }
        let c0_inv = Rational::one() / &c0;
        // a = c0 (1 - h)  =>  a^{-1} = c0^{-1} (1 + h + h^2 + ...)
        let mut h = self.scale(&-&c0_inv);
        h.add_term(vec![0; self.n_vars], Rational::one());
        let mut acc = Self::one(self.n_vars, self.precision);
        let mut power = Self::one(self.n_vars, self.precision);
        for _ in 1..self.precision {
            power = power.mul(&h)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(&c0_inv))
    }

    /// `exp(self)`; requires a zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("exp of a series with nonzero constant term".into()));
        }
        let mut acc = Self::one(self.n_vars, self.precision);
        let mut power = Self::one(self.n_vars, self.precision);
        for k in 1..self.precision {
            power = power.mul(self)?.scale(&(Rational::one() / int(k as i64)));
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc)
    }

    /// Antiderivative in `x_i` with zero constant of integration. The top
    /// degree produced is discarded, so the precision is unchanged.
    pub fn integrate(&self, i: usize) -> Result<Self> {
        if i >= self.n_vars {
            return Err(Error::VariableIndex { index: i, n_vars: self.n_vars });
        }
        let mut out = Self::zero(self.n_vars, self.precision);
        for (m, c) in &self.terms {
            let mut e = m.clone();
            e[i] += 1;
            let k = e[i] as i64;
            out.add_term(e, c / int(k));
        }
        Ok(out)
    }

    /// `∂/∂x_i`; the result is known to one degree less.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.n_vars {
            return Err(Error::VariableIndex { index: i, n_vars: self.n_vars });
        }
        let mut out = Self::zero(self.n_vars, self.precision.saturating_sub(1));
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut e = m.clone();
                e[i] -= 1;
                out.add_term(e, c * int(m[i] as i64));
            }
        }
        Ok(out)
    }

    /// Equality of the two series modulo degree `min(precisions)`.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = self.precision.min(other.precision);
        self.truncate(p).terms == other.truncate(p).terms
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(deg {})", self.to_poly().fmt_with(&var_name), self.precision)
    }
}

/// Serialized as the text of its stored polynomial part.
impl serde::Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_poly().to_string())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[{}]({})", self.n_vars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;
    use proptest::prelude::*;

    fn x1(k: u32) -> TruncatedSeries {
        TruncatedSeries::var(1, k, 0)
    }

    fn series(n: usize, k: u32, terms: &[(Vec<u32>, Rational)]) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(n, k);
        for (m, c) in terms {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    #[test]
    fn geometric_series() {
        let a = TruncatedSeries::one(1, 4).sub(&x1(4)).unwrap();
        let inv = a.invert().unwrap();
        let expected = series(1, 4, &[(vec![0], int(1)), (vec![1], int(1)), (vec![2], int(1)), (vec![3], int(1))]);
        assert_eq!(inv, expected);
    }

    #[test]
    fn exp_of_cubic() {
        let g = series(1, 7, &[(vec![3], rat(-1, 3))]);
        let e = g.exp().unwrap();
        let expected = series(1, 7, &[(vec![0], int(1)), (vec![3], rat(-1, 3)), (vec![6], rat(1, 18))]);
        assert_eq!(e, expected);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(x1(4).invert(), Err(Error::NonUnit));
        assert!(matches!(TruncatedSeries::one(1, 4).exp(), Err(Error::Domain(_))));
    }

    #[test]
    fn precision_min_rule() {
        let a = TruncatedSeries::one(2, 5);
        let b = TruncatedSeries::one(2, 3);
        assert_eq!(a.mul(&b).unwrap().precision(), 3);
        assert_eq!(a.add(&b).unwrap().precision(), 3);
    }

    fn arb_series(n: usize, k: u32) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec((prop::collection::vec(0u32..4, n), -4i64..5, 1i64..4), 0..7).prop_map(move |ts| {
            let mut s = TruncatedSeries::zero(n, k);
            for (m, a, b) in ts {
                s.add_term(m, rat(a, b));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn integrate_then_differentiate(mut a in arb_series(2, 6), i in 0usize..2) {
            a.add_term(vec![0, 0], -a.constant_term());
            let back = a.integrate(i).unwrap().partial(i).unwrap();
            prop_assert!(back.agrees_with(&a));
        }

        #[test]
        fn invert_is_two_sided(mut a in arb_series(2, 6), c in 1i64..5) {
            let c0 = a.constant_term();
            a.add_term(vec![0, 0], int(c) - c0);
            let inv = a.invert().unwrap();
            prop_assert_eq!(a.mul(&inv).unwrap(), TruncatedSeries::one(2, 6));
            prop_assert_eq!(inv.mul(&a).unwrap(), TruncatedSeries::one(2, 6));
        }

        #[test]
        fn exp_log_derivative(mut g in arb_series(2, 7), i in 0usize..2) {
            let c0 = g.constant_term();
            g.add_term(vec![0, 0], -c0);
            let e = g.exp().unwrap();
            let lhs = e.partial(i).unwrap();
            let rhs = g.partial(i).unwrap().mul(&e).unwrap();
            prop_assert!(lhs.agrees_with(&rhs));
        }
    }
}
