use std::collections::BTreeMap;

use serde::Serialize;

use super::operator::{analyze_operator, expansion_coeffs, OperatorAnalysis, RegularOperator};
use crate::error::{Error, Result};
use crate::exactalg::rational::falling_factorial;
use crate::exactalg::{MultiPoly, Rational, TruncatedSeries};

/// Largest `x0`-degree `decompose` will track by default.
pub const DEFAULT_MAX_TRACKED_DEGREE: usize = 4096;

/// `f = Σ_{i<s} e_i x0^i + Σ_ℓ b_ℓ P(x0^ℓ)` modulo `m_B^K`, with
/// `B = k[[x1, …]]`. The `e_i` and `b_ℓ` are stored as series in all
/// variables with `x0`-exponent zero.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub e: Vec<TruncatedSeries>,
    pub b: BTreeMap<u64, TruncatedSeries>,
    /// `m_B`-adic valuation of each `e_i`; `None` when `e_i ≡ 0 mod m_B^K`.
    pub valuations: Vec<Option<u32>>,
    pub precision: u32,
    /// Reconstruction holds for every `x0`-degree up to here.
    pub tracked_degree: usize,
    /// The `e_i`, and the `b_ℓ` with `ℓ - r + t` up to here, equal the limits
    /// of the full (infinite) construction modulo `m_B^K`.
    pub exact_degree: usize,
}

impl Decomposition {
    /// Smallest valuation among the `e_i` (`None` if all vanish).
    pub fn min_valuation(&self) -> Option<u32> {
        self.valuations.iter().flatten().copied().min()
    }
}

type Column = BTreeMap<usize, TruncatedSeries>;

/// Splits a series in `x0, x1, …` into `x0`-degree columns of series in
/// `x1, …` at precision `k`.
fn columns(s: &TruncatedSeries, k: u32) -> Column {
    let m = s.n_vars() - 1;
    let mut out = Column::new();
    for (e, c) in s.terms() {
        out.entry(e[0] as usize)
            .or_insert_with(|| TruncatedSeries::zero(m, k))
            .add_term(e[1..].to_vec(), c.clone());
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn embed(s: &TruncatedSeries) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(s.n_vars() + 1, s.precision());
    for (e, c) in s.terms() {
        let mut full = vec![0];
        full.extend_from_slice(e);
        out.add_term(full, c.clone());
    }
    out
}

fn restrict(p: &MultiPoly, k: u32) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(p.n_vars() - 1, k);
    for (e, c) in p.terms() {
        out.add_term(e[1..].to_vec(), c.clone());
    }
    out
}

fn check_valuation(s: &TruncatedSeries, at_least: u32, what: &str) -> Result<()> {
    match s.valuation() {
        Some(v) if v < at_least => Err(Error::InternalConsistency(format!(
            "{what} has m_B-valuation {v} < {at_least}"
        ))),
        _ => Ok(()),
    }
}

pub fn decompose(f: &TruncatedSeries, p: &RegularOperator, precision: u32) -> Result<Decomposition> {
    decompose_within(f, p, precision, DEFAULT_MAX_TRACKED_DEGREE)
}

/// As [`decompose`], failing with a range error when the `x0`-degrees that
/// must be tracked exceed `max_tracked`.
///
/// Each sweep walks the target degrees `j = ℓ - r + t` upward, cancelling the
/// residual coefficient at `j` with the unit `c_{ℓ,j}`; what lands below `s`
/// goes into the `e_i`. A sweep multiplies the residual by `m_B`, so `K`
/// sweeps leave it zero modulo `m_B^K`. Corrections move at most `t`
/// degrees down per sweep, so tracking `K·t + r` degrees beyond those of
/// interest makes the low coefficients exact.
pub fn decompose_within(f: &TruncatedSeries, p: &RegularOperator, precision: u32, max_tracked: usize) -> Result<Decomposition> {
    run(f, p, precision, max_tracked, None)
}

/// The partial sums `e_{i,k}`, `b_{ℓ,k}` after sweep `k` (series in `x1, …`
/// embedded as in [`Decomposition`]).
#[derive(Clone, Debug)]
pub struct Sweep {
    pub e: Vec<TruncatedSeries>,
    pub b: BTreeMap<u64, TruncatedSeries>,
}

/// As [`decompose`], also returning the state after every sweep so the
/// coherence `e_{i,k+1} ≡ e_{i,k}`, `b_{ℓ,k+1} ≡ b_{ℓ,k} (mod m_B^k)` can be
/// checked from outside.
pub fn decompose_traced(f: &TruncatedSeries, p: &RegularOperator, precision: u32) -> Result<(Decomposition, Vec<Sweep>)> {
    let mut trace = Vec::new();
    let d = run(f, p, precision, DEFAULT_MAX_TRACKED_DEGREE, Some(&mut trace))?;
    Ok((d, trace))
}

fn run(
    f: &TruncatedSeries,
    p: &RegularOperator,
    precision: u32,
    max_tracked: usize,
    mut trace: Option<&mut Vec<Sweep>>,
) -> Result<Decomposition> {
    if f.n_vars() != p.n_vars() {
        return Err(Error::Dimension { expected: p.n_vars(), found: f.n_vars() });
    }
    if precision < 2 {
        return Err(Error::Domain(format!("precision {precision} < 2")));
    }
    let an = analyze_operator(p)?;
    let OperatorAnalysis { t, s, .. } = an;
    let r = p.order();
    let (k, t, s) = (precision, t as usize, s as usize);
    let m = p.n_vars() - 1;

    let f_cols = columns(f, k);
    let deg_f = f_cols.keys().next_back().copied().unwrap_or(0);
    let exact = deg_f.max(s);
    let tracked = exact + k as usize * t + r;
    if tracked > max_tracked {
        return Err(Error::Range { found: deg_f, required: tracked });
    }

    let a_cols: Vec<Column> = p.coefficients().iter().map(|a| columns(a, k)).collect();
    let mut residual: Vec<TruncatedSeries> = (0..=tracked)
        .map(|j| f_cols.get(&j).cloned().unwrap_or_else(|| TruncatedSeries::zero(m, k)))
        .collect();
    let mut e = vec![TruncatedSeries::zero(m, k); s];
    let mut b: BTreeMap<u64, TruncatedSeries> = BTreeMap::new();
    let mut pivots: BTreeMap<u64, TruncatedSeries> = BTreeMap::new();

    for sweep in 1..=k {
        let floor = sweep - 1;
        for (j, c) in residual.iter().enumerate() {
            check_valuation(c, floor, &format!("residual at x0^{j} before sweep {sweep}"))?;
        }
        for j in s..=tracked {
            if residual[j].is_zero() {
                continue;
            }
            let ell = (j + r - t) as u64;
            let inv = match pivots.get(&ell) {
                Some(u) => u.clone(),
                None => {
                    let c = expansion_coeffs(p, &an, ell, j)?;
                    let u = restrict(&c[j], k).invert()?;
                    pivots.insert(ell, u.clone());
                    u
                }
            };
            let delta = residual[j].mul(&inv)?;
            check_valuation(&delta, floor, &format!("increment of b_{ell} in sweep {sweep}"))?;
            for (i, cols) in a_cols.iter().enumerate() {
                if i as u64 > ell {
                    break;
                }
                let ff = Rational::from_integer(falling_factorial(ell, i as u64));
                let scaled = delta.scale(&ff);
                for (q, a) in cols {
                    let deg = ell as usize - i + q;
                    if deg <= tracked {
                        residual[deg] = residual[deg].sub(&scaled.mul(a)?)?;
                    }
                }
            }
            if !residual[j].is_zero() {
                return Err(Error::InternalConsistency(format!("pivot at x0^{j} did not cancel")));
            }
            let slot = b.entry(ell).or_insert_with(|| TruncatedSeries::zero(m, k));
            *slot = slot.add(&delta)?;
        }
        for (i, ei) in e.iter_mut().enumerate() {
            check_valuation(&residual[i], floor, &format!("increment of e_{i} in sweep {sweep}"))?;
            *ei = ei.add(&residual[i])?;
            residual[i] = TruncatedSeries::zero(m, k);
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(Sweep { e: e.iter().map(embed).collect(), b: b.iter().map(|(l, v)| (*l, embed(v))).collect() });
        }
    }
    if let Some(j) = residual.iter().position(|c| !c.is_zero()) {
        return Err(Error::InternalConsistency(format!("residual at x0^{j} survives {k} sweeps")));
    }
    b.retain(|_, v| !v.is_zero());

    let out = Decomposition {
        valuations: e.iter().map(TruncatedSeries::valuation).collect(),
        e: e.iter().map(embed).collect(),
        b: b.iter().map(|(l, v)| (*l, embed(v))).collect(),
        precision: k,
        tracked_degree: tracked,
        exact_degree: exact,
    };
    let res = reconstruction_residual(f, p, &out)?;
    if let Some((j, c)) = res.iter().next() {
        return Err(Error::InternalConsistency(format!("reconstruction differs at x0^{j}: {c}")));
    }
    Ok(out)
}

/// Nonzero `x0`-columns (up to the tracked degree, modulo `m_B^K`) of
/// `f - Σ e_i x0^i - Σ b_ℓ P(x0^ℓ)`, recomputed from scratch.
pub fn reconstruction_residual(f: &TruncatedSeries, p: &RegularOperator, d: &Decomposition) -> Result<Column> {
    let n = p.n_vars();
    let mut total = f.to_poly();
    for (i, ei) in d.e.iter().enumerate() {
        let mut xi = vec![0; n];
        xi[0] = i as u32;
        total = &total - &(&ei.to_poly() * &MultiPoly::monomial(n, xi, Rational::from_integer(1.into())));
    }
    for (ell, bl) in &d.b {
        total = &total - &(&bl.to_poly() * &p.apply_to_x_power(*ell));
    }
    let mut cols = columns(&TruncatedSeries::from_poly(&total, u32::MAX), d.precision);
    cols.retain(|j, c| *j <= d.tracked_degree && !c.is_zero());
    Ok(cols)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationRow {
    pub m: u64,
    /// `floor((m - s)/t) - 1`; `None` when `t = 0`.
    pub bound: Option<i64>,
    /// `min_i val(e_i)`; `None` means every `e_i` vanishes modulo `m_B^K`.
    pub min_valuation: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValuationTable {
    pub t: u32,
    pub s: u64,
    pub precision: u32,
    pub rows: Vec<ValuationRow>,
    /// Valuations are nondecreasing in `m` (vanishing counts as infinite).
    pub monotone: bool,
    pub bound_holds: bool,
}

fn at_least(v: Option<u32>, bound: i64) -> bool {
    v.is_none_or(|v| v as i64 >= bound)
}

/// Decomposes `x0^m` for each `m` and tabulates how deep the residue terms
/// `e_i` lie in `m_B`.
pub fn valuation_growth_probe(p: &RegularOperator, ms: &[u64], precision: u32) -> Result<ValuationTable> {
    let an = analyze_operator(p)?;
    let n = p.n_vars();
    let mut rows = Vec::with_capacity(ms.len());
    for &m in ms {
        if m < an.s {
            return Err(Error::Domain(format!("m = {m} is below s = {}", an.s)));
        }
        let mut e = vec![0; n];
        e[0] = m as u32;
        let f = TruncatedSeries::from_poly(&MultiPoly::monomial(n, e, Rational::from_integer(1.into())), u32::MAX);
        let d = decompose(&f, p, precision)?;
        let bound = (an.t > 0).then(|| ((m - an.s) / an.t as u64) as i64 - 1);
        rows.push(ValuationRow { m, bound, min_valuation: d.min_valuation() });
    }
    let monotone = rows.windows(2).all(|w| match (w[0].min_valuation, w[1].min_valuation) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a <= b,
    });
    let bound_holds = rows.iter().all(|row| row.bound.is_none_or(|bd| at_least(row.min_valuation, bd)));
    Ok(ValuationTable { t: an.t, s: an.s, precision, rows, monotone, bound_holds })
}
