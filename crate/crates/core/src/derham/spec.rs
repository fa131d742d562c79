use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::MultiPoly;

/// Dimensions of `H^0 .. H^n` of a de Rham complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeRhamDims {
    pub dims: Vec<usize>,
    pub euler_characteristic: i64,
}

impl DeRhamDims {
    pub fn new(dims: Vec<usize>) -> Self {
        let euler_characteristic = dims.iter().enumerate().map(|(j, &d)| if j % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        DeRhamDims { dims, euler_characteristic }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![0; n + 1])
    }

    /// Number of variables of the ambient ring.
    pub fn n(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dims.len() != other.dims.len() {
            return Err(Error::Dimension { expected: self.n(), found: other.n() });
        }
        Ok(Self::new(self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect()))
    }
}

/// Modules whose de Rham cohomology the engines can compute.
///
/// JSON form: `{"kind": "...", "vars": n, ...}`, e.g.
/// `{"kind": "hypersurface", "f": "x^3+y^3+z^3", "vars": 3, "quotient": true}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModuleSpec {
    /// The polynomial ring `k[x_0..x_{n-1}]`.
    #[serde(rename = "R")]
    PolynomialRing { vars: usize },
    /// The injective hull of the residue field at the origin.
    #[serde(rename = "E")]
    InjectiveHull { vars: usize },
    /// Localization at the product of the listed variables.
    MonomialLocalization { vars: usize, support: Vec<usize> },
    /// `A_f`, or `A_f / A` when `quotient` is set.
    Hypersurface {
        #[serde(with = "poly_text")]
        f: MultiPoly,
        vars: usize,
        #[serde(default)]
        quotient: bool,
    },
    /// `k[x] e` with `∂ e = p e`.
    RankOne {
        #[serde(with = "poly_text")]
        p: MultiPoly,
    },
    DirectSum { summands: Vec<ModuleSpec> },
}

impl ModuleSpec {
    pub fn hypersurface(f: MultiPoly, quotient: bool) -> Result<Self> {
        let vars = f.n_vars();
        let spec = ModuleSpec::Hypersurface { f, vars, quotient };
        spec.validate()?;
        Ok(spec)
    }

    pub fn monomial_localization(vars: usize, support: Vec<usize>) -> Result<Self> {
        let spec = ModuleSpec::MonomialLocalization { vars, support };
        spec.validate()?;
        Ok(spec)
    }

    /// Number of variables of the ambient ring.
    pub fn vars(&self) -> usize {
        match self {
            ModuleSpec::PolynomialRing { vars }
            | ModuleSpec::InjectiveHull { vars }
            | ModuleSpec::MonomialLocalization { vars, .. }
            | ModuleSpec::Hypersurface { vars, .. } => *vars,
            ModuleSpec::RankOne { .. } => 1,
            ModuleSpec::DirectSum { summands } => summands.first().map_or(0, ModuleSpec::vars),
        }
    }

    /// Checks the invariants and normalizes polynomial arities to `vars`.
    pub fn validate(&self) -> Result<()> {
        match self {
            ModuleSpec::PolynomialRing { vars } | ModuleSpec::InjectiveHull { vars } => positive(*vars),
            ModuleSpec::MonomialLocalization { vars, support } => {
                positive(*vars)?;
                let mut seen = vec![false; *vars];
                for &i in support {
                    if i >= *vars {
                        return Err(Error::VariableIndex { index: i, n_vars: *vars });
                    }
                    if std::mem::replace(&mut seen[i], true) {
                        return Err(Error::Domain(format!("variable x{i} listed twice")));
                    }
                }
                Ok(())
            }
            ModuleSpec::Hypersurface { f, vars, .. } => {
                positive(*vars)?;
                f.with_n_vars(*vars)?;
                if f.is_zero() || !f.is_homogeneous() {
                    return Err(Error::Domain(format!("f = {f} must be a nonzero homogeneous polynomial")));
                }
                Ok(())
            }
            ModuleSpec::RankOne { p } => {
                p.with_n_vars(1)?;
                Ok(())
            }
            ModuleSpec::DirectSum { summands } => {
                let n = self.vars();
                for s in summands {
                    s.validate()?;
                    if s.vars() != n {
                        return Err(Error::Dimension { expected: n, found: s.vars() });
                    }
                }
                Ok(())
            }
        }
    }

    /// `f` embedded in `vars` variables (hypersurface case only).
    pub(crate) fn hypersurface_f(&self) -> Option<Result<(MultiPoly, bool)>> {
        match self {
            ModuleSpec::Hypersurface { f, vars, quotient } => Some(f.with_n_vars(*vars).map(|f| (f, *quotient))),
            _ => None,
        }
    }
}

fn positive(vars: usize) -> Result<()> {
    if vars == 0 {
        return Err(Error::Domain("number of variables must be positive".into()));
    }
    Ok(())
}

mod poly_text {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::exactalg::MultiPoly;
    use crate::parse::parse_poly;

    pub fn serialize<S: Serializer>(p: &MultiPoly, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&p.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<MultiPoly, D::Error> {
        let text = String::deserialize(d)?;
        parse_poly(&text, None).map_err(D::Error::custom)
    }
}
