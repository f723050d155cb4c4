use pcells::golden;
use pcells::hecke::{bar_involution, change_basis, iota, std_multiply};
use pcells::verify::{self, Suite};
use pcells::{Basis, CoxeterSystem, GenSet, HeckeElt, KLTable, LaurentPoly, Side};
use proptest::prelude::*;
use std::sync::OnceLock;

fn b3() -> &'static (CoxeterSystem, KLTable) {
    static G: OnceLock<(CoxeterSystem, KLTable)> = OnceLock::new();
    G.get_or_init(|| {
        let w = CoxeterSystem::of_type("B3").unwrap();
        let kl = KLTable::compute(&w);
        (w, kl)
    })
}

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i32..=3, -4i64..=4), 0..4).prop_map(LaurentPoly::from_terms)
}

fn arb_elt(basis: Basis) -> impl Strategy<Value = HeckeElt> {
    prop::collection::vec((0usize..48, arb_poly()), 0..5).prop_map(move |t| HeckeElt::from_terms(basis, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bar_is_an_involution(a in arb_elt(Basis::Standard)) {
        let (w, _) = b3();
        prop_assert_eq!(bar_involution(w, &bar_involution(w, &a)), a);
    }

    #[test]
    fn bar_is_multiplicative(a in arb_elt(Basis::Standard), b in arb_elt(Basis::Standard)) {
        let (w, _) = b3();
        let lhs = bar_involution(w, &std_multiply(w, &a, &b).unwrap());
        let rhs = std_multiply(w, &bar_involution(w, &a), &bar_involution(w, &b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn iota_reverses_products(a in arb_elt(Basis::Standard), b in arb_elt(Basis::Standard)) {
        let (w, _) = b3();
        let lhs = iota(w, &std_multiply(w, &a, &b).unwrap());
        let rhs = std_multiply(w, &iota(w, &b), &iota(w, &a)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kl_basis_round_trip(a in arb_elt(Basis::KazhdanLusztig)) {
        let (_, kl) = b3();
        let s = change_basis(&a, Basis::Standard, kl, None).unwrap();
        prop_assert_eq!(change_basis(&s, Basis::KazhdanLusztig, kl, None).unwrap(), a);
    }

    #[test]
    fn kl_elements_are_bar_invariant(x in 0usize..48) {
        let (w, kl) = b3();
        let c = kl.kl_element(x);
        let s = change_basis(&c, Basis::Standard, kl, None).unwrap();
        prop_assert_eq!(bar_involution(w, &s), s);
    }

    #[test]
    fn coset_factorization_multiplies_back(x in 0usize..48, mask in 0u8..8) {
        let (w, _) = b3();
        let mut subset = GenSet::default();
        for s in 0..3 {
            if mask & (1 << s) != 0 {
                subset.insert(s);
            }
        }
        let (rep, par) = w.coset_factorize(x, subset);
        prop_assert_eq!(w.mul(rep, par), x);
        prop_assert_eq!(w.length(rep) + w.length(par), w.length(x));
        prop_assert!(w.right_descents(rep).intersection(subset).is_empty());
    }

    #[test]
    fn descents_agree_with_lengths(x in 0usize..48, s in 0usize..3) {
        let (w, _) = b3();
        prop_assert_eq!(w.right_descents(x).contains(s), w.length(w.right_mul(x, s)) < w.length(x));
        prop_assert_eq!(w.left_descents(x).contains(s), w.descents(w.inverse(x), Side::Right).contains(s));
    }
}

#[test]
fn golden_files_parse_and_resolve() {
    for (name, text) in [("B2", golden::B2), ("G2", golden::G2), ("C3", golden::C3)] {
        let g = golden::GoldenFile::parse(text).unwrap();
        let w = CoxeterSystem::of_type(name).unwrap();
        for part in &g.partitions {
            let cells = part.resolve(&w).unwrap();
            let total: usize = cells.iter().map(|(_, c)| c.len()).sum();
            assert_eq!(total, w.len(), "{name} {}", part.name);
        }
    }
}

#[test]
fn named_suites_pass() {
    for name in ["b2", "g2", "c3", "stars", "tau", "negative"] {
        for outcome in verify::run_all(&verify::suites_named(name, 4).unwrap()) {
            assert!(outcome.is_pass(), "{outcome}");
        }
    }
    assert!(verify::suites_named("nonsense", 4).is_err());
    assert_eq!(Suite::TypeA { n: 5 }.to_string(), "typea(n<=5)");
}
