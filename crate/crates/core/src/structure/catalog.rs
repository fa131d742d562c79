//! Built-in profiles and hypersurfaces used by the CLI and the
//! cross-validation suites.

use serde::Serialize;

use super::BettiProfile;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CatalogProfile {
    pub name: &'static str,
    pub description: &'static str,
    /// Where the Betti numbers come from.
    pub provenance: &'static str,
    pub profile: BettiProfile,
    /// `V` is a projective space `P^d` (re-embedded).
    pub is_projective_space: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogHypersurface {
    pub name: &'static str,
    pub f: &'static str,
    pub vars: usize,
    pub provenance: &'static str,
    /// Betti profile of the smooth projective hypersurface `V(f)`.
    pub profile: BettiProfile,
}

fn bp(n: usize, d: usize, betti: &[usize]) -> BettiProfile {
    BettiProfile { n, d, betti: betti.to_vec() }
}

pub fn profile_catalog() -> Vec<CatalogProfile> {
    vec![
        CatalogProfile {
            name: "p1",
            description: "smooth conic in P^2 (a copy of P^1)",
            provenance: "cohomology of P^1: 1 in even degrees",
            profile: bp(2, 1, &[1, 0, 1]),
            is_projective_space: true,
        },
        CatalogProfile {
            name: "elliptic-p2",
            description: "smooth plane cubic, genus 1",
            provenance: "smooth curve of genus g: [1, 2g, 1]",
            profile: bp(2, 1, &[1, 2, 1]),
            is_projective_space: false,
        },
        CatalogProfile {
            name: "twisted-cubic",
            description: "rational normal curve of degree 3 in P^3",
            provenance: "cohomology of P^1",
            profile: bp(3, 1, &[1, 0, 1]),
            is_projective_space: true,
        },
        CatalogProfile {
            name: "segre-p1xp2",
            description: "Segre embedding of P^1 x P^2 in P^5",
            provenance: "Kunneth product of [1,0,1] and [1,0,1,0,1]",
            profile: bp(5, 3, &[1, 0, 2, 0, 2, 0, 1]),
            is_projective_space: false,
        },
        CatalogProfile {
            name: "veronese-p2-p5",
            description: "Veronese surface: P^2 embedded in P^5 by conics",
            provenance: "cohomology of P^2",
            profile: bp(5, 2, &[1, 0, 1, 0, 1]),
            is_projective_space: true,
        },
        CatalogProfile {
            name: "quadric-p3",
            description: "smooth quadric surface in P^3 (P^1 x P^1)",
            provenance: "Kunneth product of two copies of [1,0,1]",
            profile: bp(3, 2, &[1, 0, 2, 0, 1]),
            is_projective_space: false,
        },
        CatalogProfile {
            name: "cubic-surface-p3",
            description: "smooth cubic surface in P^3 (P^2 blown up in 6 points)",
            provenance: "b_2 = 1 + 6 exceptional curves",
            profile: bp(3, 2, &[1, 0, 7, 0, 1]),
            is_projective_space: false,
        },
    ]
}

pub fn catalog_profile(name: &str) -> Result<CatalogProfile> {
    profile_catalog().into_iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCatalog(name.to_string()))
}

pub fn hypersurface_catalog() -> Vec<CatalogHypersurface> {
    vec![
        CatalogHypersurface {
            name: "line-p2",
            f: "x0",
            vars: 3,
            provenance: "a line is a copy of P^1",
            profile: bp(2, 1, &[1, 0, 1]),
        },
        CatalogHypersurface {
            name: "conic-p2",
            f: "x^2 + y^2 + z^2",
            vars: 3,
            provenance: "a smooth conic is a copy of P^1",
            profile: bp(2, 1, &[1, 0, 1]),
        },
        CatalogHypersurface {
            name: "fermat-cubic-p2",
            f: "x^3 + y^3 + z^3",
            vars: 3,
            provenance: "smooth plane cubic, genus 1",
            profile: bp(2, 1, &[1, 2, 1]),
        },
        CatalogHypersurface {
            name: "fermat-quartic-p2",
            f: "x^4 + y^4 + z^4",
            vars: 3,
            provenance: "smooth plane quartic, genus (4-1)(4-2)/2 = 3",
            profile: bp(2, 1, &[1, 6, 1]),
        },
        CatalogHypersurface {
            name: "quadric-p3",
            f: "x^2 + y^2 + z^2 + w^2",
            vars: 4,
            provenance: "smooth quadric surface, P^1 x P^1",
            profile: bp(3, 2, &[1, 0, 2, 0, 1]),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::predict;

    #[test]
    fn every_profile_is_valid_and_predictable() {
        for c in profile_catalog() {
            c.profile.validate().unwrap();
            let rep = predict(&c.profile).unwrap();
            if c.is_projective_space {
                assert_eq!(rep.composition.quotient_e_copies, 0, "{}", c.name);
                assert!(rep.ogus_vanishing, "{}", c.name);
            }
        }
        for h in hypersurface_catalog() {
            h.profile.validate().unwrap();
            assert_eq!(h.profile.n + 1, h.vars);
            assert_eq!(h.profile.r(), 1);
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(catalog_profile("segre-p1xp2").unwrap().profile.n, 5);
        assert!(matches!(catalog_profile("nope"), Err(Error::UnknownCatalog(_))));
    }
}
