//! Pole-order truncations of de Rham complexes.
//!
//! Every module handled here is graded by the Euler field (with `dx_i` of
//! weight 1), and the Lie derivative along that field is homotopic to zero
//! on the de Rham complex while acting on a weight-`w` piece as `w`. Only
//! the weight-0 piece can therefore carry cohomology; other weights are
//! available through the weight window as a consistency check.
//!
//! For `A_f` a `p`-form is `g / f^{k_p} dx_I` with `k_p = max(K - n + p, 0)`
//! where `K` is the pole cutoff on top forms, so `d` never leaves the
//! truncation. `A_f / A` is handled as the quotient by the subcomplex of
//! polynomial forms.
//!
//! A single pole order is not enough when `f` is singular: for `f = xyz`
//! the uniform truncation has boundary classes that persist at every
//! cutoff. Localizations at monomials therefore bound the pole order in
//! each variable separately, which makes the truncation a tensor product of
//! exact one-variable truncations.

use std::collections::HashMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::rank_one::derham_rank_one;
use super::spec::{DeRhamDims, ModuleSpec};
use crate::error::{Error, Result};
use crate::exactalg::{graded_piece_basis, int, GradedMatrix, Monomial, MultiPoly, Rational};

/// Basis label of a truncated complex: a set of differentials `dx_I`
/// (sorted) and an exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormLabel {
    pub forms: Vec<usize>,
    pub exps: Monomial,
}

/// Outcome of comparing truncations at two successive cutoffs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationReport {
    /// The two cutoffs compared, `[K - 1, K]`.
    pub cutoffs: [u32; 2],
    pub previous: DeRhamDims,
    pub current: DeRhamDims,
    /// Agreement of the two cutoffs, both at least `threshold`.
    pub stabilized: bool,
    /// Smallest cutoff at which agreement is taken to mean anything.
    pub threshold: u32,
    /// Result of the Jacobian smoothness gate, for hypersurfaces.
    pub smooth: Option<bool>,
    /// Set when no correctness argument backs the numbers (singular `f`).
    pub heuristic: bool,
    /// Dimension of each term of the complex at cutoff `K`.
    pub complex_sizes: Vec<usize>,
}

struct Complex {
    bases: Vec<Vec<FormLabel>>,
    maps: Vec<GradedMatrix<FormLabel>>,
    /// Spanning columns of a subcomplex to quotient by, per degree.
    sub: Vec<GradedMatrix<FormLabel>>,
}

impl Complex {
    fn cohomology(&self) -> Result<Vec<usize>> {
        let n = self.bases.len() - 1;
        for p in 0..n.saturating_sub(1) {
            if !self.maps[p + 1].compose(&self.maps[p]).is_zero() {
                return Err(Error::InternalConsistency(format!("d^2 != 0 in degree {p}")));
            }
        }
        let sub_rank: Vec<usize> = self.sub.iter().map(GradedMatrix::rank).collect();
        // rank of d_p modulo the subcomplex in degree p + 1
        let rel_rank: Vec<usize> = (0..n).map(|p| self.maps[p].hstack(&self.sub[p + 1]).rank() - sub_rank[p + 1]).collect();
        Ok((0..=n)
            .map(|p| {
                let outgoing = if p < n { rel_rank[p] } else { 0 };
                let incoming = if p > 0 { rel_rank[p - 1] } else { 0 };
                self.bases[p].len() - sub_rank[p] - outgoing - incoming
            })
            .collect())
    }
}

fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// `dx_i ∧ dx_I = sign · dx_J` with `J = I ∪ {i}` sorted.
fn wedge(i: usize, forms: &[usize]) -> Option<(Vec<usize>, i64)> {
    if forms.contains(&i) {
        return None;
    }
    let before = forms.iter().filter(|&&j| j < i).count();
    let mut j = forms.to_vec();
    j.insert(before, i);
    Some((j, if before % 2 == 0 { 1 } else { -1 }))
}

fn index(basis: &[FormLabel]) -> HashMap<FormLabel, usize> {
    basis.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect()
}

fn pole_order(cutoff: u32, n: usize, p: usize) -> u32 {
    (cutoff as i64 - n as i64 + p as i64).max(0) as u32
}

/// Truncated complex of `A_f` (or `A_f / A`) in one Euler weight.
fn localization_complex(f: &MultiPoly, quotient: bool, cutoff: u32, weight: i64) -> Result<Complex> {
    let n = f.n_vars();
    let deg = f.degree().expect("nonzero f") as i64;
    let ks: Vec<u32> = (0..=n).map(|p| pole_order(cutoff, n, p)).collect();
    let bases: Vec<Vec<FormLabel>> = (0..=n)
        .map(|p| {
            let d = ks[p] as i64 * deg - p as i64 + weight;
            let monos = graded_piece_basis(d, n);
            subsets(n, p)
                .into_iter()
                .flat_map(|forms| monos.iter().map(move |m| FormLabel { forms: forms.clone(), exps: m.clone() }))
                .collect()
        })
        .collect();
    let df: Vec<MultiPoly> = (0..n).map(|i| f.partial(i)).collect::<Result<_>>()?;
    let mut maps = Vec::with_capacity(n);
    for p in 0..n {
        let rows = index(&bases[p + 1]);
        let mut m = GradedMatrix::new(bases[p + 1].clone(), bases[p].clone());
        let k = ks[p];
        let raise = ks[p + 1] > k;
        for (c, label) in bases[p].iter().enumerate() {
            let g = MultiPoly::monomial(n, label.exps.clone(), int(1));
            let mut entries = Vec::new();
            for (i, dfi) in df.iter().enumerate() {
                let Some((forms, sign)) = wedge(i, &label.forms) else { continue };
                let dg = g.partial(i)?;
                let num = if raise { &(f * &dg) - &(&g * dfi).scale(&int(k as i64)) } else { dg };
                for (mono, coef) in num.terms() {
                    let row = rows[&FormLabel { forms: forms.clone(), exps: mono.clone() }];
                    entries.push((row, coef * int(sign)));
                }
            }
            m.set_column(c, entries);
        }
        maps.push(m);
    }
    let sub = (0..=n)
        .map(|p| {
            let mut s = GradedMatrix::new(bases[p].clone(), Vec::new());
            if quotient {
                // polynomial forms: numerators divisible by f^{k_p}
                let rows = index(&bases[p]);
                let fk = f.pow(ks[p]);
                let mut cols = Vec::new();
                let mut columns = Vec::new();
                for forms in subsets(n, p) {
                    for m in graded_piece_basis(weight - p as i64, n) {
                        let label = FormLabel { forms: forms.clone(), exps: m.clone() };
                        let entries: Vec<(usize, Rational)> = fk
                            .shift(&m)
                            .terms()
                            .map(|(mono, c)| (rows[&FormLabel { forms: forms.clone(), exps: mono.clone() }], c.clone()))
                            .collect();
                        cols.push(label);
                        columns.push(entries);
                    }
                }
                s = GradedMatrix::new(bases[p].clone(), cols);
                for (c, e) in columns.into_iter().enumerate() {
                    s.set_column(c, e);
                }
            }
            s
        })
        .collect();
    Ok(Complex { bases, maps, sub })
}

/// Truncated complex of the injective hull: `x^{-a} dx_I` with
/// `1 <= a_i <= K - 1`, or `<= K` when `i ∈ I`. This is the tensor product
/// of exact one-variable truncations.
fn hull_complex(n: usize, cutoff: u32, weight: i64) -> Complex {
    let bases: Vec<Vec<FormLabel>> = (0..=n)
        .map(|p| {
            let mut out = Vec::new();
            for forms in subsets(n, p) {
                let caps: Vec<u32> = (0..n).map(|i| if forms.contains(&i) { cutoff } else { cutoff.saturating_sub(1) }).collect();
                let mut a = vec![1u32; n];
                if caps.contains(&0) {
                    continue;
                }
                loop {
                    let w = p as i64 - a.iter().map(|&e| e as i64).sum::<i64>();
                    if w == weight {
                        out.push(FormLabel { forms: forms.clone(), exps: a.clone() });
                    }
                    let mut i = 0;
                    while i < n && a[i] == caps[i] {
                        a[i] = 1;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                    a[i] += 1;
                }
            }
            out
        })
        .collect();
    let mut maps = Vec::with_capacity(n);
    for p in 0..n {
        let rows = index(&bases[p + 1]);
        let mut m = GradedMatrix::new(bases[p + 1].clone(), bases[p].clone());
        for (c, label) in bases[p].iter().enumerate() {
            let mut entries = Vec::new();
            for i in 0..n {
                let Some((forms, sign)) = wedge(i, &label.forms) else { continue };
                let mut a = label.exps.clone();
                let coef = -int(a[i] as i64) * int(sign);
                a[i] += 1;
                entries.push((rows[&FormLabel { forms, exps: a }], coef));
            }
            m.set_column(c, entries);
        }
        maps.push(m);
    }
    let sub = bases.iter().map(|b| GradedMatrix::new(b.clone(), Vec::new())).collect();
    Complex { bases, maps, sub }
}

/// Truncated complex of the localization at `Π_{i∈S} x_i`, with pole order
/// at most `K - 1` in each `x_i`, `i ∈ S`, raised by one when `dx_i` is
/// present. A Laurent form `x^u dx_I` is labelled by `u + K·1_S`.
fn monomial_complex(n: usize, support: &[usize], quotient: bool, cutoff: u32, weight: i64) -> Complex {
    let k = cutoff as i64;
    let in_s: Vec<bool> = (0..n).map(|i| support.contains(&i)).collect();
    let bases: Vec<Vec<FormLabel>> = (0..=n)
        .map(|p| {
            let monos = graded_piece_basis(k * support.len() as i64 - p as i64 + weight, n);
            let mut out = Vec::new();
            for forms in subsets(n, p) {
                for m in &monos {
                    let ok = (0..n).all(|i| !in_s[i] || forms.contains(&i) || m[i] >= 1);
                    if ok {
                        out.push(FormLabel { forms: forms.clone(), exps: m.clone() });
                    }
                }
            }
            out
        })
        .collect();
    let mut maps = Vec::with_capacity(n);
    for p in 0..n {
        let rows = index(&bases[p + 1]);
        let mut m = GradedMatrix::new(bases[p + 1].clone(), bases[p].clone());
        for (c, label) in bases[p].iter().enumerate() {
            let mut entries = Vec::new();
            for i in 0..n {
                let Some((forms, sign)) = wedge(i, &label.forms) else { continue };
                let u = label.exps[i] as i64 - if in_s[i] { k } else { 0 };
                if u == 0 {
                    continue;
                }
                let mut e = label.exps.clone();
                e[i] -= 1;
                entries.push((rows[&FormLabel { forms, exps: e }], int(u * sign)));
            }
            m.set_column(c, entries);
        }
        maps.push(m);
    }
    let sub = bases
        .iter()
        .map(|b| {
            let poly: Vec<usize> = if quotient {
                (0..b.len()).filter(|&r| (0..n).all(|i| !in_s[i] || b[r].exps[i] as i64 >= k)).collect()
            } else {
                Vec::new()
            };
            let mut s = GradedMatrix::new(b.clone(), poly.iter().map(|&r| b[r].clone()).collect());
            for (c, &r) in poly.iter().enumerate() {
                s.add_to(r, c, int(1));
            }
            s
        })
        .collect();
    Complex { bases, maps, sub }
}

/// The support of `f` if it is a product of distinct variables.
fn squarefree_monomial_support(f: &MultiPoly) -> Option<Vec<usize>> {
    let (m, c) = f.as_term()?;
    if !c.is_one() || m.iter().any(|&e| e > 1) {
        return None;
    }
    Some((0..m.len()).filter(|&i| m[i] == 1).collect())
}

/// Whether the Jacobian ideal of `f` contains every form of degree
/// `n (deg f - 2) + 1`, i.e. whether `f` defines a smooth hypersurface.
pub fn jacobian_is_zero_dimensional(f: &MultiPoly) -> Result<bool> {
    let n = f.n_vars();
    let Some(deg) = f.degree() else { return Ok(false) };
    if deg == 0 {
        return Ok(true);
    }
    let t = (n as i64 * (deg as i64 - 2) + 1).max(0);
    let rows = graded_piece_basis(t, n);
    let row_index: HashMap<Monomial, usize> = rows.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let shifts = graded_piece_basis(t - (deg as i64 - 1), n);
    let mut cols = Vec::new();
    let mut columns = Vec::new();
    for i in 0..n {
        let di = f.partial(i)?;
        for s in &shifts {
            let mut label = s.clone();
            label.push(i as u32);
            cols.push(label);
            columns.push(di.shift(s).terms().map(|(m, c)| (row_index[m], c.clone())).collect::<Vec<_>>());
        }
    }
    let mut mat = GradedMatrix::new(rows.clone(), cols);
    for (c, e) in columns.into_iter().enumerate() {
        mat.set_column(c, e);
    }
    Ok(mat.rank() == rows.len())
}

fn complex_for(m: &ModuleSpec, cutoff: u32, weight: i64) -> Result<Option<Complex>> {
    Ok(match m {
        ModuleSpec::PolynomialRing { vars } => Some(monomial_complex(*vars, &[], false, cutoff, weight)),
        ModuleSpec::InjectiveHull { vars } => Some(hull_complex(*vars, cutoff, weight)),
        ModuleSpec::MonomialLocalization { vars, support } => Some(monomial_complex(*vars, support, false, cutoff, weight)),
        ModuleSpec::Hypersurface { .. } => {
            let (f, q) = m.hypersurface_f().expect("hypersurface")?;
            match squarefree_monomial_support(&f) {
                Some(support) => Some(monomial_complex(f.n_vars(), &support, q, cutoff, weight)),
                None => Some(localization_complex(&f, q, cutoff, weight)?),
            }
        }
        _ => None,
    })
}

/// Dimensions of the truncated complex at one cutoff, summed over the
/// weight window, together with the sizes of its terms.
fn dims_at(m: &ModuleSpec, cutoff: u32, window: (i64, i64)) -> Result<(DeRhamDims, Vec<usize>)> {
    match m {
        ModuleSpec::RankOne { p } => {
            let dims = derham_rank_one(p, cutoff.max(1))?;
            Ok((dims, vec![]))
        }
        ModuleSpec::DirectSum { summands } => {
            let n = m.vars();
            let mut acc = DeRhamDims::zeros(n);
            let mut sizes = vec![0; n + 1];
            for s in summands {
                let (d, z) = dims_at(s, cutoff, window)?;
                acc = acc.add(&d)?;
                for (a, b) in sizes.iter_mut().zip(z) {
                    *a += b;
                }
            }
            Ok((acc, sizes))
        }
        _ => {
            let n = m.vars();
            let mut dims = vec![0; n + 1];
            let mut sizes = vec![0; n + 1];
            for w in window.0..=window.1 {
                let cx = complex_for(m, cutoff, w)?.expect("handled above");
                for (d, h) in dims.iter_mut().zip(cx.cohomology()?) {
                    *d += h;
                }
                for (s, b) in sizes.iter_mut().zip(&cx.bases) {
                    *s += b.len();
                }
            }
            if sizes.iter().all(|&s| s == 0) {
                return Err(Error::EmptyComplex(format!("no basis forms at pole cutoff {cutoff} in weights {window:?}")));
            }
            Ok((DeRhamDims::new(dims), sizes))
        }
    }
}

/// Below this cutoff agreement can be an artifact of near-empty complexes:
/// a 1-form needs pole order 1 and a top form pole order `n - 1` to carry
/// the expected classes.
pub fn stabilization_threshold(m: &ModuleSpec) -> u32 {
    match m {
        ModuleSpec::InjectiveHull { .. } => 1,
        ModuleSpec::RankOne { p } => p.degree().unwrap_or(0) + 3,
        ModuleSpec::DirectSum { summands } => summands.iter().map(stabilization_threshold).max().unwrap_or(1),
        other => other.vars() as u32,
    }
}

fn smoothness(m: &ModuleSpec) -> Result<Option<bool>> {
    match m {
        ModuleSpec::Hypersurface { .. } => {
            let (f, _) = m.hypersurface_f().expect("hypersurface")?;
            Ok(Some(jacobian_is_zero_dimensional(&f)?))
        }
        _ => Ok(None),
    }
}

/// Cohomology of the truncation at `pole_cutoff` over the Euler weights in
/// `weight_window` (use `(0, 0)`), compared against cutoff `pole_cutoff - 1`.
pub fn derham_truncated(m: &ModuleSpec, pole_cutoff: u32, weight_window: (i64, i64)) -> Result<(DeRhamDims, StabilizationReport)> {
    m.validate()?;
    if pole_cutoff == 0 {
        return Err(Error::EmptyComplex("pole cutoff must be positive".into()));
    }
    if weight_window.0 > weight_window.1 {
        return Err(Error::EmptyComplex(format!("empty weight window {weight_window:?}")));
    }
    let (current, complex_sizes) = dims_at(m, pole_cutoff, weight_window)?;
    let previous = match dims_at(m, pole_cutoff - 1, weight_window) {
        Ok((d, _)) => d,
        Err(Error::EmptyComplex(_)) => DeRhamDims::zeros(m.vars()),
        Err(e) => return Err(e),
    };
    let smooth = smoothness(m)?;
    let threshold = stabilization_threshold(m);
    let report = StabilizationReport {
        cutoffs: [pole_cutoff - 1, pole_cutoff],
        stabilized: previous == current && pole_cutoff > threshold,
        threshold,
        previous,
        current: current.clone(),
        smooth,
        heuristic: smooth == Some(false) && !matches!(m.hypersurface_f(), Some(Ok((f, _))) if squarefree_monomial_support(&f).is_some()),
        complex_sizes,
    };
    Ok((current, report))
}

/// Raises the cutoff from `max(start, threshold + 1)` until two successive cutoffs agree or
/// `max` is reached; the report says which happened. `max` is never exceeded.
pub fn derham_stabilized(m: &ModuleSpec, start: u32, max: u32, weight_window: (i64, i64)) -> Result<(DeRhamDims, StabilizationReport)> {
    let max = max.max(1);
    let mut k = start.max(stabilization_threshold(m) + 1).min(max);
    loop {
        let (dims, report) = derham_truncated(m, k, weight_window)?;
        if report.stabilized || k >= max {
            return Ok((dims, report));
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derham::closed::derham_closed_form;
    use crate::parse::parse_poly;

    fn hyper(f: &str, n: usize, q: bool) -> ModuleSpec {
        ModuleSpec::hypersurface(parse_poly(f, Some(n)).unwrap(), q).unwrap()
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge(1, &[0]), Some((vec![0, 1], -1)));
        assert_eq!(wedge(0, &[1, 2]), Some((vec![0, 1, 2], 1)));
        assert_eq!(wedge(2, &[0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(wedge(1, &[1]), None);
    }

    #[test]
    fn one_variable_localization() {
        let (dims, report) = derham_truncated(&hyper("x", 1, false), 4, (0, 0)).unwrap();
        assert_eq!(dims.dims, [1, 1]);
        assert!(report.stabilized);
        assert_eq!(report.smooth, Some(true));
    }

    #[test]
    fn hull_is_exact_in_every_weight() {
        for n in 1..=3 {
            let e = ModuleSpec::InjectiveHull { vars: n };
            let (dims, report) = derham_truncated(&e, 4, (-6, 2)).unwrap();
            let mut want = vec![0; n + 1];
            want[n] = 1;
            assert_eq!(dims.dims, want);
            assert!(report.stabilized);
        }
    }

    #[test]
    fn monomial_localizations_match_kunneth() {
        for support in [vec![], vec![0], vec![0, 1], vec![1], vec![0, 1, 2], vec![0, 2]] {
            let m = ModuleSpec::monomial_localization(3, support).unwrap();
            let (dims, report) = derham_stabilized(&m, 2, 8, (0, 0)).unwrap();
            assert!(report.stabilized);
            assert_eq!(dims, derham_closed_form(&m).unwrap());
        }
    }

    #[test]
    fn monomial_hypersurfaces_use_per_variable_poles() {
        let (dims, report) = derham_stabilized(&hyper("x y z", 3, false), 1, 6, (0, 0)).unwrap();
        assert_eq!(dims.dims, [1, 3, 3, 1]);
        assert!(!report.heuristic);
        // A_x / A in one variable is the hull
        let (dims, _) = derham_stabilized(&hyper("x", 1, true), 1, 6, (-2, 2)).unwrap();
        assert_eq!(dims.dims, [0, 1]);
    }

    #[test]
    fn singular_curves_are_flagged() {
        let (_, report) = derham_truncated(&hyper("x^2 y + y^2 z", 3, true), 4, (0, 0)).unwrap();
        assert_eq!(report.smooth, Some(false));
        assert!(report.heuristic);
    }

    #[test]
    fn nonzero_weights_carry_no_cohomology_for_a_line() {
        let (dims, _) = derham_truncated(&hyper("x + y", 2, false), 5, (-3, 3)).unwrap();
        assert_eq!(dims.dims, [1, 1, 0]);
    }

    #[test]
    fn smooth_conic_quotient() {
        // A_f / A for a smooth conic: H^1 from df/f, H^2 = 0, H^3 from the
        // complement of a quadric surface cone
        let (dims, report) = derham_stabilized(&hyper("x^2 + y^2 + z^2", 3, true), 2, 6, (0, 0)).unwrap();
        assert!(report.stabilized);
        assert_eq!(dims.dims, [0, 1, 0, 0]);
    }

    #[test]
    fn smoothness_gate() {
        assert!(jacobian_is_zero_dimensional(&parse_poly("x^3 + y^3 + z^3", None).unwrap()).unwrap());
        assert!(!jacobian_is_zero_dimensional(&parse_poly("x^2 y", Some(2)).unwrap()).unwrap());
        assert!(!jacobian_is_zero_dimensional(&parse_poly("x y", Some(3)).unwrap()).unwrap());
        assert!(jacobian_is_zero_dimensional(&parse_poly("x", Some(3)).unwrap()).unwrap());
    }

    #[test]
    fn errors() {
        let m = hyper("x", 1, false);
        assert!(matches!(derham_truncated(&m, 0, (0, 0)), Err(Error::EmptyComplex(_))));
        assert!(matches!(derham_truncated(&m, 3, (1, 0)), Err(Error::EmptyComplex(_))));
    }
}
