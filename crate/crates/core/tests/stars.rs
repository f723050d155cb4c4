use pcells::cells::{compute_cells, CellSide, ColouredWGraph};
use pcells::coxeter::Side;
use pcells::stars::*;
use pcells::{CoxeterSystem, Error, KLTable, PCanTable};

fn setup(label: &str) -> (CoxeterSystem, KLTable, PCanTable) {
    let w = CoxeterSystem::of_type(label).unwrap();
    let kl = KLTable::compute(&w);
    (w, kl, PCanTable::identity_table())
}

#[test]
fn relation_checkers_pass_at_p0() {
    for label in ["A3", "B3", "G2", "C3"] {
        let (w, kl, table) = setup(label);
        for (r, t) in star_pairs(&w) {
            let reports = [
                ("sliding", check_coefficient_sliding(&w, &table, &kl, r, t).unwrap()),
                ("base-change", check_base_change_relations(&w, &table, r, t).unwrap()),
                ("structure", check_structure_coefficient_relations(&w, &table, &kl, r, t).unwrap()),
                ("vanishing", check_string_vanishing(&w, &table, &kl, r, t).unwrap()),
            ];
            for (name, rep) in reports {
                assert!(rep.is_pass(), "{label} {name} ({r},{t}): {rep}");
                assert!(rep.checks > 0, "{label} {name} ran no checks");
            }
        }
    }
}

#[test]
fn star_closure_and_string_relations_at_p0() {
    for label in ["A3", "B3", "G2"] {
        let (w, kl, table) = setup(label);
        let left = compute_cells(&w, &table, &kl, CellSide::Left);
        let right = compute_cells(&w, &table, &kl, CellSide::Right);
        let rep = star_closure_check(&w, &left, &right).unwrap();
        assert!(rep.is_pass(), "{label}: {rep}");
        for (r, t) in star_pairs(&w) {
            let (rep, counts) = string_relation_report(&w, &left, r, t).unwrap();
            assert!(rep.is_pass(), "{label} ({r},{t}): {rep} {counts:?}");
        }
        let rep = check_wgraph_star_isomorphism(&w, &table, &kl, &left).unwrap();
        assert!(rep.is_pass(), "{label}: {rep}");
    }
}

#[test]
fn wgraphs_of_left_cells_satisfy_hecke_relations() {
    for label in ["A3", "B3"] {
        let (w, kl, table) = setup(label);
        let left = compute_cells(&w, &table, &kl, CellSide::Left);
        for cell in &left.cells {
            let g = ColouredWGraph::from_vertices(&w, &table, &kl, cell, Side::Left);
            let rep = g.verify_relations(&w);
            assert!(rep.is_pass(), "{label}: {rep}");
        }
    }
}

#[test]
fn star_is_an_involution_preserving_right_cells() {
    for label in ["A3", "B3", "G2"] {
        let (w, kl, table) = setup(label);
        let right = compute_cells(&w, &table, &kl, CellSide::Right);
        for (r, t) in star_pairs(&w) {
            for x in string_domain(&w, r, t) {
                let y = star_right(&w, x, r, t).unwrap();
                assert_eq!(star_right(&w, y, r, t).unwrap(), x);
                assert!(right.same_cell(x, y));
                let xi = w.inverse(x);
                assert_eq!(star_left(&w, star_left(&w, xi, r, t).unwrap(), r, t).unwrap(), xi);
            }
        }
    }
}

#[test]
fn tau_classes_are_left_cells_in_type_a() {
    for label in ["A1", "A2", "A3", "A4"] {
        let (w, kl, table) = setup(label);
        let left = compute_cells(&w, &table, &kl, CellSide::Left);
        let tau = tau_partition(&w);
        assert!(tau.equals_partition(&left), "{label}");
    }
}

#[test]
fn left_cells_refine_tau_tilde_in_b3() {
    let (w, kl, table) = setup("B3");
    let left = compute_cells(&w, &table, &kl, CellSide::Left);
    assert!(tau_tilde_partition(&w).is_refined_by(&left));
    assert!(tau_partition(&w).is_refined_by(&left));
    let tau = tau_tilde_partition(&w);
    assert_eq!(tau.classes[0], vec![0]);
}

#[test]
fn below_bound_is_refused() {
    let (w, kl, _) = setup("B2");
    let fake = PCanTable::from_entries(2, pcells::pcanonical::Provenance::Identity, std::iter::empty());
    assert!(matches!(
        check_base_change_relations(&w, &fake, 0, 1),
        Err(Error::PrimeBelowBound { p: 2, m: 4, bound: 2 })
    ));
    assert!(check_string_vanishing(&w, &fake, &kl, 0, 1).is_err());
}

#[test]
fn fabricated_table_is_rejected() {
    let (w, kl, _) = setup("A3");
    let (y, x) = (w.parse_digits("2").unwrap(), w.parse_digits("232").unwrap());
    let poly = pcells::LaurentPoly::one();
    let bad = PCanTable::from_entries(5, pcells::pcanonical::Provenance::Identity, [(y, x, poly)]);
    let rep = check_base_change_relations(&w, &bad, 0, 1).unwrap();
    assert!(!rep.is_pass());
    assert!(rep.violations.iter().all(|v| v.r == Some(0) && v.t == Some(1)));
    let rep = check_string_vanishing(&w, &bad, &kl, 1, 2).unwrap();
    assert!(!rep.is_pass(), "{rep}");
    assert!(rep.violations[0].witnesses.len() == 2);
}
