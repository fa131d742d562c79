//! Closed-form predictions for a nonsingular projective variety `V ⊂ P^n`
//! from its Betti numbers: homology of the affine cone `Y`, the local
//! cohomology modules `H^i_I(A)` and the de Rham dimensions of `H^r_I(A)`.

pub mod catalog;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use catalog::{catalog_profile, hypersurface_catalog, profile_catalog, CatalogHypersurface, CatalogProfile};

/// Betti numbers `b_0 .. b_{2d}` of a `d`-dimensional `V ⊂ P^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiProfile {
    pub n: usize,
    pub d: usize,
    pub betti: Vec<usize>,
}

impl BettiProfile {
    pub fn new(n: usize, d: usize, betti: Vec<usize>) -> Result<Self> {
        let b = BettiProfile { n, d, betti };
        b.validate()?;
        Ok(b)
    }

    /// Codimension `r = n - d`.
    pub fn r(&self) -> usize {
        self.n.saturating_sub(self.d)
    }

    /// `b_i`, zero outside `0..=2d`.
    pub fn b(&self, i: i64) -> i64 {
        if i < 0 {
            return 0;
        }
        self.betti.get(i as usize).map_or(0, |&v| v as i64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidProfile("dimension d must be at least 1".into()));
        }
        if self.d >= self.n {
            return Err(Error::InvalidProfile(format!("codimension must be positive (n = {}, d = {})", self.n, self.d)));
        }
        if self.betti.len() != 2 * self.d + 1 {
            return Err(Error::InvalidProfile(format!("expected {} Betti numbers, got {}", 2 * self.d + 1, self.betti.len())));
        }
        if self.betti[0] == 0 {
            return Err(Error::InvalidProfile("b_0 must be positive".into()));
        }
        let len = self.betti.len();
        if (0..len).any(|i| self.betti[i] != self.betti[len - 1 - i]) {
            return Err(Error::InvalidProfile(format!("Betti numbers {:?} violate Poincaré duality", self.betti)));
        }
        Ok(())
    }
}

/// Genus of the normalization and the branch count at each singular point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveData {
    pub genus: usize,
    #[serde(default)]
    pub branch_counts: Vec<usize>,
}

/// `[1, 0, 1, 0, ..., 1]` of length `2n + 1`.
pub fn projective_space_cohomology(n: usize) -> Vec<usize> {
    (0..=2 * n).map(|i| usize::from(i % 2 == 0)).collect()
}

pub fn smooth_curve_cohomology(genus: usize) -> Vec<usize> {
    vec![1, 2 * genus, 1]
}

/// `h^1 = 2g + Σ (n_P - 1)`; `h^0 = h^2 = 1` are not returned.
pub fn singular_curve_h1(c: &CurveData) -> Result<usize> {
    if let Some(&bad) = c.branch_counts.iter().find(|&&b| b < 2) {
        return Err(Error::InvalidProfile(format!("a singular point needs at least 2 branches, got {bad}")));
    }
    Ok(2 * c.genus + c.branch_counts.iter().map(|b| b - 1).sum::<usize>())
}

/// Homology `h_0 .. h_{2d+2}` of the affine cone over `V`.
pub fn cone_homology(b: &BettiProfile) -> Result<Vec<usize>> {
    b.validate()?;
    let d = b.d as i64;
    let mut h = Vec::with_capacity(2 * b.d + 3);
    for i in 0..=2 * d + 2 {
        let v = match i {
            0 | 1 => 0,
            2 => b.b(1),
            i if i <= d + 1 => b.b(i - 1) - b.b(i - 3),
            i if i <= 2 * d => b.b(i - 2) - b.b(i),
            i if i == 2 * d + 1 => b.b(2 * d - 1),
            _ => b.b(2 * d),
        };
        if v < 0 {
            return Err(Error::ProfileNotLefschetz(format!("h_{i}(Y) = {v} < 0 for Betti numbers {:?}", b.betti)));
        }
        h.push(v as usize);
    }
    Ok(h)
}

/// What is known about `H^i_I(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum LocalCohomologyStatus {
    Zero,
    /// `H^r_I(A)`, the only index where the module is not a sum of copies
    /// of `E`.
    Critical,
    ECopies { copies: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexStatus {
    pub index: usize,
    #[serde(flatten)]
    pub status: LocalCohomologyStatus,
}

/// Composition of `H^r_I(A)`: a simple submodule supported on the cone and
/// a quotient that is a sum of copies of `E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Composition {
    /// Named only; no computational witness is produced.
    pub simple_submodule: String,
    pub quotient_e_copies: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub betti: Vec<usize>,
    /// Status of `H^i_I(A)` for `i = 0 .. n+1`.
    pub local_cohomology: Vec<IndexStatus>,
    /// `m_i` for `r < i <= n + 1`, as `(i, m_i)`.
    pub m: Vec<(usize, usize)>,
    /// `dim H^j_DR(H^r_I(A))` for `j = 0 .. n+1`.
    pub derham_dims: Vec<usize>,
    /// `h_i(Y)` for `i = 0 .. 2d+2`.
    pub cone_homology: Vec<usize>,
    pub ogus_vanishing: bool,
    /// `b_j` agrees with projective space for all `j < n - r`.
    pub ogus_restriction_form: bool,
    pub composition: Composition,
    pub euler_characteristic: i64,
}

impl StructureReport {
    pub fn m_i(&self, i: usize) -> usize {
        self.m.iter().find(|(k, _)| *k == i).map_or(0, |(_, v)| *v)
    }

    /// Human-readable one-line summary of the composition of `H^r_I(A)`.
    pub fn composition_line(&self) -> String {
        match self.composition.quotient_e_copies {
            0 => format!("H^{}_I(A) is simple", self.r),
            c => format!("H^{}_I(A) has a simple submodule with quotient E^{c}", self.r),
        }
    }
}

/// `m_i = b_{n-i} - b_{n-i-2}` for `r < i < n`, and 0 for `i >= n`.
fn m_value(b: &BettiProfile, i: usize) -> i64 {
    if i >= b.n {
        0
    } else {
        let k = b.n as i64 - i as i64;
        b.b(k) - b.b(k - 2)
    }
}

/// `dim H^j_DR(H^r_I(A))`: zero below `r`, `b_{n+d-j} - b_{n+d-j+2}` up
/// to `n`, and `b_d - b_{d-2}` at `n + 1`.
fn derham_dim(b: &BettiProfile, j: usize) -> i64 {
    let (n, d, r) = (b.n as i64, b.d as i64, b.r() as i64);
    let j = j as i64;
    if j < r {
        0
    } else if j <= n {
        b.b(n + d - j) - b.b(n + d - j + 2)
    } else {
        b.b(d) - b.b(d - 2)
    }
}

pub fn predict(b: &BettiProfile) -> Result<StructureReport> {
    let h = cone_homology(b)?;
    let (n, d, r) = (b.n, b.d, b.r());
    let h_at = |i: i64| -> usize { if i < 0 { 0 } else { h.get(i as usize).copied().unwrap_or(0) } };

    let mut derham_dims = Vec::with_capacity(n + 2);
    for j in 0..=n + 1 {
        let v = derham_dim(b, j);
        if v < 0 {
            return Err(Error::ProfileNotLefschetz(format!("dim H^{j}_DR = {v} < 0")));
        }
        // the same number read off the cone
        let via_cone = h_at(2 * n as i64 + 2 - j as i64 - r as i64);
        if v as usize != via_cone {
            return Err(Error::InternalConsistency(format!("dims_{j} = {v} but h_(2n+2-j-r)(Y) = {via_cone}")));
        }
        derham_dims.push(v as usize);
    }
    if derham_dims[..r].iter().any(|&v| v != 0) {
        return Err(Error::InternalConsistency("de Rham dims below the codimension must vanish".into()));
    }

    let mut m = Vec::new();
    for i in r + 1..=n + 1 {
        let v = m_value(b, i);
        if v < 0 {
            return Err(Error::ProfileNotLefschetz(format!("m_{i} = {v} < 0")));
        }
        let via_cone = h_at(n as i64 + 1 - i as i64);
        if v as usize != via_cone {
            return Err(Error::InternalConsistency(format!("m_{i} = {v} but h_(n+1-i)(Y) = {via_cone}")));
        }
        m.push((i, v as usize));
    }

    let local_cohomology = (0..=n + 1)
        .map(|i| {
            let status = if i == r {
                LocalCohomologyStatus::Critical
            } else if i > r && i < n && m_value(b, i) > 0 {
                LocalCohomologyStatus::ECopies { copies: m_value(b, i) as usize }
            } else {
                LocalCohomologyStatus::Zero
            };
            IndexStatus { index: i, status }
        })
        .collect();

    let ogus_vanishing = m.iter().all(|&(_, v)| v == 0);
    let pn = projective_space_cohomology(n);
    let ogus_restriction_form = (0..d).all(|j| b.betti[j] == pn[j]);
    if ogus_vanishing != ogus_restriction_form {
        return Err(Error::InternalConsistency("the two forms of the vanishing criterion disagree".into()));
    }

    let quotient = derham_dims[n + 1];
    let euler_characteristic = derham_dims.iter().enumerate().map(|(j, &v)| if j % 2 == 0 { v as i64 } else { -(v as i64) }).sum();
    let cone_euler: i64 = (d + 1..=2 * d + 2).map(|i| if i % 2 == 0 { h[i] as i64 } else { -(h[i] as i64) }).sum();
    let sign = if r % 2 == 0 { 1 } else { -1 };
    if euler_characteristic != sign * cone_euler {
        return Err(Error::InternalConsistency("Euler characteristics of the two tables disagree".into()));
    }

    Ok(StructureReport {
        n,
        d,
        r,
        betti: b.betti.clone(),
        local_cohomology,
        m,
        derham_dims,
        cone_homology: h,
        ogus_vanishing,
        ogus_restriction_form,
        composition: Composition { simple_submodule: "minimal extension of O_Y (not computed)".into(), quotient_e_copies: quotient },
        euler_characteristic,
    })
}

/// `ogus_vanishing` of [`predict`].
pub fn ogus_criterion(b: &BettiProfile) -> Result<bool> {
    Ok(predict(b)?.ogus_vanishing)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    Cohomology,
    Homology,
}

/// For a pure `d`-dimensional scheme with a table of length `2d + 1`: the
/// top cohomology (equivalently `H_0`) is nonzero exactly when some
/// irreducible component is proper.
pub fn lichtenbaum_check(table: &[usize], kind: TableKind, proper_components: &[bool]) -> Result<bool> {
    if table.len().is_multiple_of(2) {
        return Err(Error::InvalidProfile(format!("table length {} is not 2d + 1", table.len())));
    }
    let top = match kind {
        TableKind::Cohomology => table[table.len() - 1],
        TableKind::Homology => table[0],
    };
    Ok((top != 0) == proper_components.iter().any(|&p| p))
}
