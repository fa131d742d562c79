//! Cross-checks between independent engines on larger inputs.

use dmod_cohom::derham::{derham_closed_form, derham_stabilized, ModuleSpec};
use dmod_cohom::parse::parse_poly;
use dmod_cohom::structure::catalog::hypersurface_catalog;
use dmod_cohom::structure::{predict, BettiProfile};

fn quotient_dims(f: &str, vars: usize, max: u32) -> Vec<usize> {
    let spec = ModuleSpec::hypersurface(parse_poly(f, Some(vars)).unwrap(), true).unwrap();
    let (dims, rep) = derham_stabilized(&spec, 1, max, (0, 0)).unwrap();
    assert!(rep.stabilized, "{f}: {rep:?}");
    assert_eq!(rep.smooth, Some(true));
    dims.dims
}

#[test]
fn catalog_hypersurfaces_match_predictions() {
    for h in hypersurface_catalog() {
        let want = predict(&h.profile).unwrap().derham_dims;
        assert_eq!(quotient_dims(h.f, h.vars, 8), want, "{}", h.name);
    }
}

#[test]
fn cubic_surface_matches_prediction() {
    let want = predict(&BettiProfile::new(3, 2, vec![1, 0, 7, 0, 1]).unwrap()).unwrap().derham_dims;
    assert_eq!(want, [0, 1, 0, 6, 6]);
    assert_eq!(quotient_dims("x^3 + y^3 + z^3 + w^3", 4, 6), want);
}

#[test]
fn non_fermat_smooth_cubic_curve() {
    // Smooth plane cubic in Hesse form; same answer as the Fermat cubic.
    assert_eq!(quotient_dims("x^3 + y^3 + z^3 - 3/2*x*y*z", 3, 8), [0, 1, 2, 2]);
}

#[test]
fn localization_of_fermat_cubic() {
    // 0 -> A -> A_f -> A_f/A -> 0 with H(A) = [1,0,0,0] and all connecting maps zero.
    let spec = ModuleSpec::hypersurface(parse_poly("x^3 + y^3 + z^3", Some(3)).unwrap(), false).unwrap();
    let (dims, rep) = derham_stabilized(&spec, 1, 8, (0, 0)).unwrap();
    assert!(rep.stabilized);
    assert_eq!(dims.dims, [1, 1, 2, 2]);
}

#[test]
fn direct_sums_add() {
    let spec = ModuleSpec::DirectSum {
        summands: vec![ModuleSpec::InjectiveHull { vars: 2 }, ModuleSpec::monomial_localization(2, vec![1]).unwrap()],
    };
    let (dims, rep) = derham_stabilized(&spec, 1, 8, (0, 0)).unwrap();
    assert!(rep.stabilized);
    assert_eq!(dims, derham_closed_form(&spec).unwrap());
    assert_eq!(dims.dims, [1, 1, 1]);
}
