//! Built-in cross-validation suites: every check compares two independent
//! computations exactly.

use std::fmt::Write;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::{envelope, Outcome, Suite, EXIT_MISMATCH, EXIT_OK};
use crate::derham::{completion_flattening, derham_closed_form, derham_rank_one, derham_stabilized, ModuleSpec};
use crate::error::Result;
use crate::exactalg::{rat, TruncatedSeries};
use crate::parse::{parse_op, parse_poly};
use crate::seriesdecomp::{
    analyze_operator, decompose, expansion_coeffs, reconstruction_residual, valuation_growth_probe, RegularOperator,
};
use crate::structure::catalog::hypersurface_catalog;
use crate::structure::predict;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub case: String,
    pub expected: String,
    pub found: String,
    pub pass: bool,
}

fn check(suite: &'static str, case: impl Into<String>, expected: impl ToString, found: Result<String>) -> Check {
    let expected = expected.to_string();
    let (found, pass) = match found {
        Ok(f) => {
            let pass = f == expected;
            (f, pass)
        }
        Err(e) => (format!("error: {e}"), false),
    };
    Check { suite, case: case.into(), expected, found, pass }
}

fn dims_text(d: &[usize]) -> String {
    format!("{d:?}")
}

fn stabilized_text(spec: &ModuleSpec, cap: u32) -> Result<String> {
    let (dims, rep) = derham_stabilized(spec, 1, cap, (0, 0))?;
    Ok(if rep.stabilized { dims_text(&dims.dims) } else { format!("{} (not stabilized)", dims_text(&dims.dims)) })
}

pub fn monomial_suite(cap: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        for mask in 0u32..(1 << n) {
            let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let spec = ModuleSpec::monomial_localization(n, support.clone()).expect("valid support");
            let expected = derham_closed_form(&spec).map(|d| dims_text(&d.dims)).unwrap_or_else(|e| e.to_string());
            out.push(check("monomial", format!("n = {n}, S = {support:?}"), expected, stabilized_text(&spec, cap)));
        }
    }
    for n in 1..=2usize {
        let spec = ModuleSpec::InjectiveHull { vars: n };
        let expected = derham_closed_form(&spec).map(|d| dims_text(&d.dims)).unwrap_or_else(|e| e.to_string());
        out.push(check("monomial", format!("E, n = {n}"), expected, stabilized_text(&spec, cap)));
    }
    out
}

pub fn hypersurface_suite(cap: u32) -> Vec<Check> {
    hypersurface_catalog()
        .into_iter()
        .map(|h| {
            let expected = predict(&h.profile).map(|r| dims_text(&r.derham_dims)).unwrap_or_else(|e| e.to_string());
            let found = parse_poly(h.f, Some(h.vars))
                .and_then(|f| ModuleSpec::hypersurface(f, true))
                .and_then(|spec| stabilized_text(&spec, cap));
            check("hypersurface", format!("{} (A_f/A vs predicted)", h.name), expected, found)
        })
        .collect()
}

pub fn rank_one_suite() -> Vec<Check> {
    let mut out = Vec::new();
    for p in ["0", "1", "x", "x^2", "x^3 - x", "2*x^4 + x - 3"] {
        let poly = parse_poly(p, Some(1)).expect("literal");
        let expected = match poly.degree() {
            None => dims_text(&[1, 0]),
            Some(d) => dims_text(&[0, d as usize]),
        };
        out.push(check("rank-one", format!("p = {p}"), expected, derham_rank_one(&poly, 8).map(|d| dims_text(&d.dims))));
        let flat = completion_flattening(&poly, 10).and_then(|u| {
            let ps = TruncatedSeries::from_poly(&poly, 10);
            let residual = u.partial(0)?.add(&ps.mul(&u)?)?;
            Ok(if residual.is_zero() { "0".to_string() } else { residual.to_string() })
        });
        out.push(check("rank-one", format!("u' + p u for p = {p}"), "0", flat));
    }
    out
}

fn random_f(rng: &mut ChaCha8Rng) -> TruncatedSeries {
    let mut f = TruncatedSeries::zero(2, 64);
    for _ in 0..rng.gen_range(1..=6) {
        let e = vec![rng.gen_range(0..=6), rng.gen_range(0..=4)];
        f.add_term(e, rat(rng.gen_range(-5..=5), 1));
    }
    f
}

/// The three operator families of the decomposition suite, in `x0, x1`.
pub const DECOMPOSITION_FAMILIES: [&str; 3] = ["d0", "x0*d0", "x1 + d0"];

fn operator(text: &str) -> Result<RegularOperator> {
    RegularOperator::from_weyl(&parse_op(text, Some(2))?, u32::MAX)
}

pub fn decomposition_suite() -> Vec<Check> {
    let mut out = Vec::new();
    for (family, text) in DECOMPOSITION_FAMILIES.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(family as u64);
        let fs: Vec<TruncatedSeries> = (0..25).map(|_| random_f(&mut rng)).collect();
        let found = operator(text).and_then(|p| {
            let mut bad = 0;
            for f in &fs {
                let d = decompose(f, &p, 8)?;
                if !reconstruction_residual(f, &p, &d)?.is_empty() {
                    bad += 1;
                }
            }
            Ok(format!("{bad} nonzero residuals"))
        });
        out.push(check("decomposition", format!("P = {text}: 25 random f at K = 8"), "0 nonzero residuals", found));

        let found = operator(text).and_then(|p| {
            let a = analyze_operator(&p)?;
            for ell in a.ell0..=a.ell0 + 30 {
                expansion_coeffs(&p, &a, ell, ell as usize + 4)?;
            }
            Ok("hold".to_string())
        });
        out.push(check("decomposition", format!("P = {text}: conditions on [l0, l0 + 30]"), "hold", found));
    }
    for text in ["x0*d0", "(x0 + x1)*d0"] {
        let found = operator(text).and_then(|p| {
            let s = analyze_operator(&p)?.s;
            let ms: Vec<u64> = [2, 6, 10, 14].iter().map(|k| s + k).collect();
            let table = valuation_growth_probe(&p, &ms, 16)?;
            Ok(format!("monotone = {}, bound = {}", table.monotone, table.bound_holds))
        });
        out.push(check("decomposition", format!("P = {text}: valuation growth"), "monotone = true, bound = true", found));
    }
    out
}

pub fn run_suite(suite: Suite, cap: u32) -> Vec<Check> {
    match suite {
        Suite::Monomial => monomial_suite(cap),
        Suite::Hypersurface => hypersurface_suite(cap),
        Suite::RankOne => rank_one_suite(),
        Suite::Decomposition => decomposition_suite(),
        Suite::All => {
            let mut all = monomial_suite(cap);
            all.extend(hypersurface_suite(cap));
            all.extend(rank_one_suite());
            all.extend(decomposition_suite());
            all
        }
    }
}

pub fn cmd_verify(suite: Suite, cap: u32) -> Outcome {
    let checks = run_suite(suite, cap);
    let failed = checks.iter().filter(|c| !c.pass).count();
    let mut table = String::new();
    for c in &checks {
        let _ = writeln!(table, "{} {:<13} {}", if c.pass { "PASS" } else { "FAIL" }, c.suite, c.case);
        if !c.pass {
            let _ = writeln!(table, "     expected: {}", c.expected);
            let _ = writeln!(table, "     found:    {}", c.found);
        }
    }
    let _ = writeln!(table, "{} checks, {} failed", checks.len(), failed);
    let name = suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let json = envelope("verify", json!({ "suite": name, "checks": checks, "passed": failed == 0 }));
    Outcome { json, table, code: if failed == 0 { EXIT_OK } else { EXIT_MISMATCH } }
}
