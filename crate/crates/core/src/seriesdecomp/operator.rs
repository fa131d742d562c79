use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::rational::{falling_factorial, fmt_rational};
use crate::exactalg::{int, MultiPoly, Rational, TruncatedSeries};
use crate::weyl::{left_coefficients, WeylOp};

/// `P = a_0 + a_1 ∂ + … + a_r ∂^r` with `∂ = ∂/∂x0` and `a_r` containing a
/// pure power of `x0`. The stored terms of each `a_i` are taken as exact.
#[derive(Clone, Debug)]
pub struct RegularOperator {
    n_vars: usize,
    coefficients: Vec<TruncatedSeries>,
}

impl RegularOperator {
    pub fn new(coefficients: Vec<TruncatedSeries>) -> Result<Self> {
        let last = coefficients.last().ok_or_else(|| Error::NotRegular("no coefficients".into()))?;
        let n_vars = last.n_vars();
        if n_vars == 0 {
            return Err(Error::Domain("operator needs the variable x0".into()));
        }
        for a in &coefficients {
            if a.n_vars() != n_vars {
                return Err(Error::Dimension { expected: n_vars, found: a.n_vars() });
            }
        }
        if pure_x_order(last).is_none() {
            return Err(Error::NotRegular(format!("leading coefficient {} has no pure power of x0", last.to_poly())));
        }
        Ok(RegularOperator { n_vars, coefficients })
    }

    pub fn from_polys(coefficients: &[MultiPoly], precision: u32) -> Result<Self> {
        Self::new(coefficients.iter().map(|a| TruncatedSeries::from_poly(a, precision)).collect())
    }

    /// Reads `P = Σ a_i ∂0^i` from a Weyl-algebra operator in `∂0` only.
    pub fn from_weyl(op: &WeylOp, precision: u32) -> Result<Self> {
        let mut coeffs = left_coefficients(op)?;
        while coeffs.len() > 1 && coeffs.last().is_some_and(MultiPoly::is_zero) {
            coeffs.pop();
        }
        Self::from_polys(&coeffs, precision)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// The ∂-order `r`.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[TruncatedSeries] {
        &self.coefficients
    }

    /// `P(x0^ℓ) = Σ (ℓ)_i a_i x0^{ℓ-i}`, exactly.
    pub fn apply_to_x_power(&self, ell: u64) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n_vars);
        for (i, a) in self.coefficients.iter().enumerate() {
            if i as u64 > ell {
                break;
            }
            let ff = Rational::from_integer(falling_factorial(ell, i as u64));
            for (m, c) in a.terms() {
                let mut e = m.clone();
                e[0] += (ell - i as u64) as u32;
                out.add_term(e, c * &ff);
            }
        }
        out
    }
}

/// Lowest `j` with `x0^j` (no other variable) in `a`.
fn pure_x_order(a: &TruncatedSeries) -> Option<u32> {
    a.terms().filter(|(m, _)| m[1..].iter().all(|&e| e == 0)).map(|(m, _)| m[0]).min()
}

fn pure_x_coefficient(a: &TruncatedSeries, j: i64) -> Rational {
    if j < 0 {
        return Rational::zero();
    }
    let mut m = vec![0; a.n_vars()];
    m[0] = j as u32;
    a.coefficient(&m)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorAnalysis {
    pub t: u32,
    #[serde(serialize_with = "rationals_as_text")]
    pub lambda: Vec<Rational>,
    /// `g(ℓ) = Σ λ_i (ℓ)_i` as a polynomial in one variable.
    #[serde(serialize_with = "poly_as_text")]
    pub g_poly: MultiPoly,
    pub ell0: u64,
    pub s: u64,
}

fn rationals_as_text<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rational))
}

fn poly_as_text<S: Serializer>(p: &MultiPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl OperatorAnalysis {
    pub fn g(&self, ell: u64) -> Rational {
        eval_univariate(&self.g_poly, &Rational::from_integer(ell.into()))
    }
}

fn eval_univariate(p: &MultiPoly, at: &Rational) -> Rational {
    p.eval(std::slice::from_ref(at)).expect("univariate")
}

/// `(ℓ)_i = ℓ(ℓ-1)…(ℓ-i+1)` as a polynomial in `ℓ`.
fn falling_factorial_poly(i: usize) -> MultiPoly {
    let l = MultiPoly::var(1, 0);
    (0..i).fold(MultiPoly::one(1), |acc, k| &acc * &(&l - &MultiPoly::constant(1, int(k as i64))))
}

/// Largest nonnegative integer root of a nonzero univariate polynomial.
fn largest_nonnegative_integer_root(g: &MultiPoly) -> Option<u64> {
    let deg = g.degree()?;
    if deg == 0 {
        return None;
    }
    let lead = g.coefficient(&[deg]);
    let bound = g
        .terms()
        .map(|(_, c)| (c / &lead).abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
        + Rational::one();
    let bound = bound.ceil().to_integer();
    let bound: u64 = bound.try_into().unwrap_or(u64::MAX);
    (0..=bound).rev().find(|&l| eval_univariate(g, &Rational::from_integer(l.into())).is_zero())
}

pub fn analyze_operator(p: &RegularOperator) -> Result<OperatorAnalysis> {
    let r = p.order();
    let t = p
        .coefficients
        .iter()
        .enumerate()
        .filter_map(|(i, a)| pure_x_order(a).map(|ti| (r - i) as u32 + ti))
        .min()
        .ok_or_else(|| Error::NotRegular("no coefficient has a pure power of x0".into()))?;
    let lambda: Vec<Rational> = p
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, a)| pure_x_coefficient(a, t as i64 - r as i64 + i as i64))
        .collect();
    if lambda.iter().all(Zero::is_zero) {
        return Err(Error::Contradiction(format!("every λ_i vanishes at t = {t}")));
    }
    let mut g_poly = MultiPoly::zero(1);
    for (i, l) in lambda.iter().enumerate() {
        g_poly = &g_poly + &falling_factorial_poly(i).scale(l);
    }
    let ell0 = largest_nonnegative_integer_root(&g_poly).map_or(0, |z| z + 1).max(r as u64);
    let s = ell0 - r as u64 + t as u64;
    Ok(OperatorAnalysis { t, lambda, g_poly, ell0, s })
}

/// `c_{ℓ,0..=max_i}` in `P(x0^ℓ) = Σ c_{ℓ,i} x0^i`, each an exact polynomial
/// in `x1..` (embedded in the full ring with `x0`-exponent zero). Checks:
/// `c_{ℓ,i} = 0` below `ℓ-r`; `c_{ℓ,i} ∈ m_B` on `[ℓ-r, ℓ-r+t)`; the constant
/// term of `c_{ℓ,ℓ-r+t}` equals `g(ℓ) ≠ 0`.
pub fn expansion_coeffs(p: &RegularOperator, analysis: &OperatorAnalysis, ell: u64, max_i: usize) -> Result<Vec<MultiPoly>> {
    if ell < analysis.ell0 {
        return Err(Error::Domain(format!("ℓ = {ell} is below ℓ0 = {}", analysis.ell0)));
    }
    let n = p.n_vars();
    let mut c = vec![MultiPoly::zero(n); max_i + 1];
    for (m, coef) in p.apply_to_x_power(ell).terms() {
        let i = m[0] as usize;
        if i <= max_i {
            let mut e = m.clone();
            e[0] = 0;
            c[i].add_term(e, coef.clone());
        }
    }
    check_conditions(&c, p.order() as u64, analysis, ell)?;
    Ok(c)
}

fn check_conditions(c: &[MultiPoly], r: u64, a: &OperatorAnalysis, ell: u64) -> Result<()> {
    let low = ell - r;
    let pivot = low + a.t as u64;
    let origin = vec![0; c.first().map_or(1, MultiPoly::n_vars)];
    for (i, ci) in c.iter().enumerate() {
        let i = i as u64;
        let c0 = ci.coefficient(&origin);
        let ok = if i < low {
            ci.is_zero()
        } else if i < pivot {
            c0.is_zero()
        } else if i == pivot {
            c0 == a.g(ell) && !c0.is_zero()
        } else {
            true
        };
        if !ok {
            return Err(Error::InternalConsistency(format!("c_({ell},{i}) = {ci} violates the expansion conditions")));
        }
    }
    Ok(())
}
