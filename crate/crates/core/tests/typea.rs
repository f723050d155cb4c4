use std::collections::BTreeSet;

use pcells::cells::{compute_cells, CellSide};
use pcells::stars::{in_string_domain, star_pairs, star_right};
use pcells::typea::*;
use pcells::{CoxeterSystem, KLTable, PCanTable};
use proptest::prelude::*;

fn cells_of(label: &str) -> (CoxeterSystem, [pcells::CellPartition; 3]) {
    let w = CoxeterSystem::of_type(label).unwrap();
    let kl = KLTable::compute(&w);
    let table = PCanTable::identity_table();
    let parts = [CellSide::Left, CellSide::Right, CellSide::TwoSided].map(|side| compute_cells(&w, &table, &kl, side));
    (w, parts)
}

#[test]
fn cells_are_tableau_fibers_up_to_s6() {
    for n in 1..=5 {
        let (w, [left, right, two]) = cells_of(&format!("A{n}"));
        let rep = verify_typea_cell_theorem(&w, &left, &right, &two).unwrap();
        assert!(rep.is_pass(), "A{n}: {rep}");
        assert_eq!(two.len(), Partition::all(n + 1).len());
    }
}

#[test]
fn involution_counts() {
    let counts: Vec<usize> = (1..=6)
        .map(|n| Permutation::all(n).into_iter().filter(Permutation::is_involution).count())
        .collect();
    assert_eq!(counts, vec![1, 2, 4, 10, 26, 76]);
}

#[test]
fn knuth_moves_are_right_stars() {
    for n in 2..=4 {
        let w = CoxeterSystem::of_type(&format!("A{n}")).unwrap();
        for (r, t) in star_pairs(&w) {
            let i = r + 2;
            for x in w.elements() {
                let p = Permutation::from_element(&w, x);
                let knuth = knuth_move(&p, i);
                if in_string_domain(&w, x, r, t, pcells::Side::Right) {
                    let star = star_right(&w, x, r, t).unwrap();
                    assert_eq!(knuth, Some(Permutation::from_element(&w, star)), "{p} at {i}");
                } else {
                    assert_eq!(knuth, None, "{p} at {i}");
                }
            }
        }
    }
}

#[test]
fn knuth_classes_are_right_cells() {
    let (w, [_, right, _]) = cells_of("A3");
    for cell in &right.cells {
        let p = Permutation::from_element(&w, cell[0]);
        let class: BTreeSet<_> = knuth_class(&p).into_iter().map(|q| q.to_element(&w).unwrap()).collect();
        assert_eq!(class, cell.iter().copied().collect(), "{p}");
    }
}

#[test]
fn hook_formula_matches_enumeration() {
    for n in 1..=8 {
        let mut total = 0u128;
        for shape in Partition::all(n) {
            let f = shape.hook_length_count();
            assert_eq!(f, shape.count_tableaux_brute_force(), "{shape}");
            assert_eq!(f, shape.standard_tableaux().len() as u128, "{shape}");
            total += f * f;
        }
        assert_eq!(total, (1..=n as u128).product::<u128>());
    }
}

#[test]
fn rs_is_a_bijection() {
    for n in 1..=6 {
        let mut seen = BTreeSet::new();
        for p in Permutation::all(n) {
            let (a, b) = rs_correspondence(&p);
            a.validate().unwrap();
            b.validate().unwrap();
            assert_eq!(inverse_rs(&a, &b).unwrap(), p);
            let (ai, bi) = rs_correspondence(&p.inverse());
            assert_eq!((ai, bi), (b.clone(), a.clone()));
            assert!(seen.insert((a, b)));
        }
    }
}

#[test]
fn column_superstandard_is_standard() {
    for shape in Partition::all(6) {
        let t = column_superstandard(&shape);
        t.validate().unwrap();
        assert_eq!(t.shape(), shape);
    }
}

fn arb_perm() -> impl Strategy<Value = Permutation> {
    (1usize..9).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle()).prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn rs_round_trip(p in arb_perm()) {
        let (a, b) = rs_correspondence(&p);
        prop_assert_eq!(inverse_rs(&a, &b).unwrap(), p.clone());
        prop_assert_eq!(a.shape(), b.shape());
    }

    #[test]
    fn knuth_moves_preserve_p(p in arb_perm()) {
        let (a, _) = rs_correspondence(&p);
        for (_, q) in knuth_moves(&p) {
            prop_assert_eq!(&rs_correspondence(&q).0, &a);
            prop_assert!(knuth_move(&q, 0).is_none());
        }
    }

    #[test]
    fn display_parses_back(p in arb_perm()) {
        prop_assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p);
    }
}

#[test]
fn knuth_classes_are_p_fibers_in_s4() {
    let perms = Permutation::all(4);
    for x in &perms {
        for y in &perms {
            let same_p = rs_correspondence(x).0 == rs_correspondence(y).0;
            assert_eq!(knuth_equivalent(x, y), same_p, "{x} {y}");
        }
    }
}
