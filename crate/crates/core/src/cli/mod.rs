//! The `dmod` command line: argument parsing, dispatch and rendering.
//!
//! Exit codes: 0 success, 1 verification mismatch (or failed self-check),
//! 2 input error, 3 de Rham result not stabilized within the cutoff cap.

mod render;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::derham::{derham_closed_form, derham_stabilized, ModuleSpec};
use crate::error::{Error, Result};
use crate::exactalg::TruncatedSeries;
use crate::parse::{infer_n_vars, parse_op, parse_poly};
use crate::seriesdecomp::{analyze_operator, decompose, reconstruction_residual, RegularOperator};
use crate::structure::catalog::{catalog_profile, hypersurface_catalog, profile_catalog};
use crate::structure::{predict, BettiProfile};

pub const SCHEMA_VERSION: u32 = 1;
pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_STABILIZED: i32 = 3;
/// Environment variable capping every pole cutoff.
pub const MAX_CUTOFF_ENV: &str = "DERHAM_MAX_CUTOFF";

#[derive(Parser, Debug)]
#[command(name = "dmod", version, about = "Exact de Rham and local cohomology computations for D-modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure of local cohomology from a Betti profile.
    Predict {
        /// Name of a built-in profile (see `catalog`).
        #[arg(long, conflicts_with_all = ["profile", "betti"])]
        catalog: Option<String>,
        /// JSON file holding {"n": .., "d": .., "betti": [..]}.
        #[arg(long, conflicts_with = "betti")]
        profile: Option<PathBuf>,
        /// Comma-separated Betti numbers b_0..b_2d; needs --n.
        #[arg(long, requires = "n")]
        betti: Option<String>,
        /// Number of variables of the ambient polynomial ring.
        #[arg(long)]
        n: Option<usize>,
    },
    /// De Rham cohomology of an explicit module.
    Derham {
        /// Module to compute: R, E, a localization A_f, the quotient A_f/A, or a rank-one connection.
        #[arg(long, value_enum)]
        kind: Kind,
        /// Defining polynomial for `loc` and `loc-quot`.
        #[arg(long)]
        f: Option<String>,
        /// Connection coefficient for `rank-one` (∂e = p e).
        #[arg(long)]
        p: Option<String>,
        /// Number of variables; inferred from the highest index used.
        #[arg(long)]
        vars: Option<usize>,
        /// Largest pole cutoff to try.
        #[arg(long, default_value_t = 8)]
        pole_cutoff: u32,
    },
    /// Split a series against an ordinary differential operator in x0.
    Decompose {
        /// Operator in x0.., d0, e.g. "x0*d0 + x1".
        #[arg(long)]
        p: String,
        /// Series in x0, x1, .. (a polynomial; treated as exact).
        #[arg(long)]
        f: String,
        /// Number of variables; inferred from the highest index used.
        #[arg(long)]
        vars: Option<usize>,
        /// Precision K: results hold modulo (x1, ..)^K.
        #[arg(long, default_value_t = 6)]
        prec: u32,
    },
    /// Cross-validation suites; exits 1 on any mismatch.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 8)]
        pole_cutoff: u32,
    },
    /// List the built-in profiles and hypersurfaces.
    Catalog,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "R")]
    R,
    #[value(name = "E")]
    E,
    Loc,
    LocQuot,
    RankOne,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Monomial,
    Hypersurface,
    RankOne,
    Decomposition,
    All,
}

/// A rendered result and its exit code.
pub struct Outcome {
    pub json: Value,
    pub table: String,
    pub code: i32,
}

impl Outcome {
    fn ok(json: Value, table: String) -> Self {
        Outcome { json, table, code: EXIT_OK }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InternalConsistency(_) => EXIT_MISMATCH,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// to `stdout`/`stderr`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let max_cutoff = match cutoff_cap() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let outcome = match execute(&cli.command, max_cutoff) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let text = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.json).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Table => outcome.table,
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_INPUT;
    }
    outcome.code
}

fn cutoff_cap() -> Result<Option<u32>> {
    match std::env::var(MAX_CUTOFF_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .map(Some)
            .map_err(|_| Error::Domain(format!("{MAX_CUTOFF_ENV} must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn capped(requested: u32, cap: Option<u32>) -> u32 {
    cap.map_or(requested, |c| requested.min(c))
}

pub fn execute(cmd: &Command, max_cutoff: Option<u32>) -> Result<Outcome> {
    match cmd {
        Command::Predict { catalog, profile, betti, n } => cmd_predict(catalog.as_deref(), profile.as_ref(), betti.as_deref(), *n),
        Command::Derham { kind, f, p, vars, pole_cutoff } => {
            let spec = module_spec(*kind, f.as_deref(), p.as_deref(), *vars)?;
            cmd_derham(&spec, capped(*pole_cutoff, max_cutoff))
        }
        Command::Decompose { p, f, vars, prec } => cmd_decompose(p, f, *vars, *prec),
        Command::Verify { suite, pole_cutoff } => Ok(verify::cmd_verify(*suite, capped(*pole_cutoff, max_cutoff))),
        Command::Catalog => Ok(cmd_catalog()),
    }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut out = json!({ "schema": SCHEMA_VERSION, "command": command });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn cmd_predict(catalog: Option<&str>, profile: Option<&PathBuf>, betti: Option<&str>, n: Option<usize>) -> Result<Outcome> {
    let (name, profile) = match (catalog, profile, betti) {
        (Some(name), _, _) => (Some(name.to_string()), catalog_profile(name)?.profile),
        (None, Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
            let p: BettiProfile = serde_json::from_str(&text).map_err(|e| Error::InvalidProfile(e.to_string()))?;
            (None, p)
        }
        (None, None, Some(list)) => {
            let betti = list
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| Error::InvalidProfile(format!("bad Betti number `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            if betti.len() % 2 == 0 {
                return Err(Error::InvalidProfile(format!("{} Betti numbers; expected an odd count 2d + 1", betti.len())));
            }
            let d = (betti.len() - 1) / 2;
            (None, BettiProfile::new(n.expect("clap enforces --n"), d, betti)?)
        }
        (None, None, None) => return Err(Error::InvalidProfile("give --catalog, --profile or --betti".into())),
    };
    profile.validate()?;
    let report = predict(&profile)?;
    let table = render::predict_table(name.as_deref(), &report);
    let json = envelope("predict", json!({ "catalog": name, "report": to_value(&report), "composition_line": report.composition_line() }));
    Ok(Outcome::ok(json, table))
}

fn vars_for(text: &str, vars: Option<usize>) -> Result<usize> {
    let needed = infer_n_vars(text)?.max(1);
    match vars {
        Some(v) if v < needed => Err(Error::VariableIndex { index: needed - 1, n_vars: v }),
        Some(v) => Ok(v),
        None => Ok(needed),
    }
}

pub fn module_spec(kind: Kind, f: Option<&str>, p: Option<&str>, vars: Option<usize>) -> Result<ModuleSpec> {
    let need_vars = || vars.ok_or_else(|| Error::Domain("--vars is required for this kind".into()));
    let spec = match kind {
        Kind::R => ModuleSpec::PolynomialRing { vars: need_vars()? },
        Kind::E => ModuleSpec::InjectiveHull { vars: need_vars()? },
        Kind::Loc | Kind::LocQuot => {
            let text = f.ok_or_else(|| Error::Domain("--f is required for loc and loc-quot".into()))?;
            let n = vars_for(text, vars)?;
            ModuleSpec::hypersurface(parse_poly(text, Some(n))?, kind == Kind::LocQuot)?
        }
        Kind::RankOne => {
            let text = p.ok_or_else(|| Error::Domain("--p is required for rank-one".into()))?;
            if vars.is_some_and(|v| v != 1) {
                return Err(Error::Unsupported("rank-one connections are in one variable".into()));
            }
            ModuleSpec::RankOne { p: parse_poly(text, Some(1))? }
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn cmd_derham(spec: &ModuleSpec, max_cutoff: u32) -> Result<Outcome> {
    let (dims, report) = derham_stabilized(spec, 1, max_cutoff.max(1), (0, 0))?;
    let closed = match derham_closed_form(spec) {
        Ok(d) => Some(d),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let status = if report.stabilized { "stabilized" } else { "provisional" };
    let table = render::derham_table(spec, &dims, &report, closed.as_ref());
    let json = envelope(
        "derham",
        json!({
            "module": to_value(spec),
            "dims": dims.dims,
            "euler_characteristic": dims.euler_characteristic,
            "status": status,
            "closed_form": closed.as_ref().map(|c| c.dims.clone()),
            "report": to_value(&report),
        }),
    );
    let code = if report.stabilized { EXIT_OK } else { EXIT_NOT_STABILIZED };
    Ok(Outcome { json, table, code })
}

fn cmd_decompose(p_text: &str, f_text: &str, vars: Option<usize>, prec: u32) -> Result<Outcome> {
    let n = vars_for(p_text, vars)?.max(vars_for(f_text, vars)?);
    let op = parse_op(p_text, Some(n))?;
    let f_poly = parse_poly(f_text, Some(n))?;
    let f_degree = f_poly.degree().unwrap_or(0);
    let p = RegularOperator::from_weyl(&op, u32::MAX)?;
    let analysis = analyze_operator(&p)?;
    let f = TruncatedSeries::from_poly(&f_poly, f_degree + 1);
    let d = decompose(&f, &p, prec)?;
    let residual_zero = reconstruction_residual(&f, &p, &d)?.is_empty();
    let table = render::decompose_table(&op, &analysis, &d, residual_zero);
    let json = envelope(
        "decompose",
        json!({
            "operator": op.to_string(),
            "f": f_poly.to_string(),
            "analysis": to_value(&analysis),
            "decomposition": to_value(&d),
            "residual_zero": residual_zero,
        }),
    );
    let code = if residual_zero { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Outcome { json, table, code })
}

fn cmd_catalog() -> Outcome {
    let profiles = profile_catalog();
    let hypersurfaces = hypersurface_catalog();
    let table = render::catalog_table(&profiles, &hypersurfaces);
    let json = envelope("catalog", json!({ "profiles": to_value(&profiles), "hypersurfaces": to_value(&hypersurfaces) }));
    Outcome::ok(json, table)
}
