use std::fmt::Write;

use crate::derham::{DeRhamDims, ModuleSpec, StabilizationReport};
use crate::exactalg::rational::fmt_rational;
use crate::seriesdecomp::{Decomposition, OperatorAnalysis};
use crate::structure::catalog::{CatalogHypersurface, CatalogProfile};
use crate::structure::{LocalCohomologyStatus, StructureReport};
use crate::weyl::WeylOp;

fn list<T: ToString>(v: &[T]) -> String {
    format!("[{}]", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

pub fn predict_table(name: Option<&str>, r: &StructureReport) -> String {
    let mut s = String::new();
    if let Some(name) = name {
        let _ = writeln!(s, "catalog: {name}");
    }
    let _ = writeln!(s, "profile: n = {}, d = {}, r = {}, betti = {}", r.n, r.d, r.r, list(&r.betti));
    let _ = writeln!(s, "local cohomology:");
    for st in &r.local_cohomology {
        let i = st.index;
        let line = match &st.status {
            LocalCohomologyStatus::Zero => format!("H^{i}_I(A) = 0"),
            LocalCohomologyStatus::Critical => format!("H^{i}_I(A) nonzero (see composition)"),
            LocalCohomologyStatus::ECopies { copies } => format!("H^{i}_I(A) ≅ E^{copies}"),
        };
        let _ = writeln!(s, "  {line}");
    }
    let m: Vec<String> = r.m.iter().map(|(i, v)| format!("m_{i} = {v}")).collect();
    let _ = writeln!(s, "multiplicities: {}", if m.is_empty() { "none".to_string() } else { m.join(", ") });
    let _ = writeln!(s, "de Rham dims of H^{}_I(A), j = 0..{}: {}", r.r, r.n + 1, list(&r.derham_dims));
    let _ = writeln!(s, "cone homology h_i(Y), i = 0..{}: {}", 2 * r.d + 2, list(&r.cone_homology));
    let _ = writeln!(
        s,
        "Ogus vanishing: {} (restriction form: {})",
        r.ogus_vanishing, r.ogus_restriction_form
    );
    let _ = writeln!(s, "composition: {}", r.composition_line());
    let _ = writeln!(s, "euler characteristic: {}", r.euler_characteristic);
    s
}

fn describe(spec: &ModuleSpec) -> String {
    match spec {
        ModuleSpec::PolynomialRing { vars } => format!("R = k[x0..x{}]", vars - 1),
        ModuleSpec::InjectiveHull { vars } => format!("E in {vars} variables"),
        ModuleSpec::MonomialLocalization { vars, support } => format!("R localized at {} ({vars} variables)", list(support)),
        ModuleSpec::Hypersurface { f, vars, quotient } => {
            let m = if *quotient { "A_f/A" } else { "A_f" };
            format!("{m}, f = {f} ({vars} variables)")
        }
        ModuleSpec::RankOne { p } => format!("k[x0] e with d0 e = ({p}) e"),
        ModuleSpec::DirectSum { summands } => summands.iter().map(describe).collect::<Vec<_>>().join(" ⊕ "),
    }
}

pub fn derham_table(spec: &ModuleSpec, dims: &DeRhamDims, rep: &StabilizationReport, closed: Option<&DeRhamDims>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "module: {}", describe(spec));
    let _ = writeln!(s, "H^j_DR, j = 0..{}: {}", dims.n(), list(&dims.dims));
    let _ = writeln!(s, "euler characteristic: {}", dims.euler_characteristic);
    let status = if rep.stabilized { "stabilized" } else { "provisional" };
    let _ = writeln!(s, "status: {status} (pole cutoffs {} and {}, threshold {})", rep.cutoffs[0], rep.cutoffs[1], rep.threshold);
    if let Some(smooth) = rep.smooth {
        let _ = writeln!(s, "smooth: {}{}", if smooth { "yes" } else { "no" }, if rep.heuristic { " (heuristic result)" } else { "" });
    }
    if let Some(c) = closed {
        let agree = if c == dims { "agrees" } else { "DISAGREES" };
        let _ = writeln!(s, "closed form: {} ({agree})", list(&c.dims));
    }
    s
}

pub fn decompose_table(op: &WeylOp, a: &OperatorAnalysis, d: &Decomposition, residual_zero: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "operator: P = {op}");
    let lambda: Vec<String> = a.lambda.iter().map(fmt_rational).collect();
    let _ = writeln!(
        s,
        "t = {}, lambda = {}, g(l) = {}, l0 = {}, s = {}",
        a.t,
        list(&lambda),
        a.g_poly.fmt_with(&|_| "l".to_string()),
        a.ell0,
        a.s
    );
    let _ = writeln!(s, "precision: modulo (x1, ...)^{}", d.precision);
    if d.e.is_empty() {
        let _ = writeln!(s, "e: none (s = 0)");
    }
    for (i, (e, v)) in d.e.iter().zip(&d.valuations).enumerate() {
        let v = v.map_or("≥ K".to_string(), |v| v.to_string());
        let _ = writeln!(s, "e_{i} = {}   (valuation {v})", e.to_poly());
    }
    for (l, b) in &d.b {
        let _ = writeln!(s, "b_{l} = {}", b.to_poly());
    }
    let _ = writeln!(
        s,
        "reconstruction residual: {} (x0-degrees 0..={})",
        if residual_zero { "0" } else { "NONZERO" },
        d.tracked_degree
    );
    s
}

pub fn catalog_table(profiles: &[CatalogProfile], hypersurfaces: &[CatalogHypersurface]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "profiles:");
    for c in profiles {
        let p = &c.profile;
        let _ = writeln!(s, "  {:<18} n = {}, d = {}, betti = {:<22} {}", c.name, p.n, p.d, list(&p.betti), c.description);
    }
    let _ = writeln!(s, "hypersurfaces:");
    for h in hypersurfaces {
        let _ = writeln!(s, "  {:<18} f = {:<24} vars = {}, betti = {}", h.name, h.f, h.vars, list(&h.profile.betti));
    }
    s
}
