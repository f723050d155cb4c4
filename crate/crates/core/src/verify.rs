//! Named verification suites, shared by the command line and the acceptance tests.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::cells::{
    check_descent_invariant, check_identity_cell, compute_cells, decomposition_criterion, extract_wgraph,
    inverse_duality_check, right_connectedness_report, verify_parabolic_compatibility, CellPartition, CellSide,
    ColouredWGraph,
};
use crate::coxeter::{CoxeterSystem, Elt, GenSet, IDENTITY};
use crate::error::{Error, Result};
use crate::golden::{self, GoldenFile};
use crate::hecke::KLTable;
use crate::laurent::LaurentPoly;
use crate::pcanonical::{verify_parabolic_factorization, PCanTable, Provenance, TableFile};
use crate::report::{Report, Violation};
use crate::stars::{
    check_base_change_relations, check_coefficient_sliding, check_string_vanishing,
    check_structure_coefficient_relations, check_wgraph_star_isomorphism, star_closure_check, star_pairs,
    string_relation_report, tau_partition, tau_partition_for_pairs, tau_tilde_partition,
};
use crate::typea::{verify_typea_cell_theorem, Partition, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    B2,
    G2,
    C3Kl,
    C3P2,
    /// Symmetric groups `S_3 .. S_n`.
    TypeA { n: usize },
    Invariants,
    Stars,
    Tau,
    Negative,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Suite::B2 => f.write_str("b2"),
            Suite::G2 => f.write_str("g2"),
            Suite::C3Kl => f.write_str("c3-kl"),
            Suite::C3P2 => f.write_str("c3-p2"),
            Suite::TypeA { n } => write!(f, "typea(n<={n})"),
            Suite::Invariants => f.write_str("invariants"),
            Suite::Stars => f.write_str("stars"),
            Suite::Tau => f.write_str("tau"),
            Suite::Negative => f.write_str("negative"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub report: Report,
    pub notes: Vec<String>,
    pub elapsed_ms: u128,
}

impl SuiteOutcome {
    pub fn is_pass(&self) -> bool {
        self.report.is_pass()
    }

    pub fn elapsed(&self) -> Duration {
        Duration::from_millis(self.elapsed_ms as u64)
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.is_pass() { "PASS" } else { "FAIL" };
        writeln!(f, "{status} {} ({} ms): {}", self.suite, self.elapsed_ms, self.report)?;
        for n in &self.notes {
            writeln!(f, "  {n}")?;
        }
        Ok(())
    }
}

/// Suites selected by a command line name.
pub fn suites_named(name: &str, typea_n: usize) -> Result<Vec<Suite>> {
    let all = vec![
        Suite::B2,
        Suite::G2,
        Suite::C3Kl,
        Suite::C3P2,
        Suite::TypeA { n: typea_n },
        Suite::Invariants,
        Suite::Stars,
        Suite::Tau,
        Suite::Negative,
    ];
    Ok(match name.to_ascii_lowercase().as_str() {
        "b2" => vec![Suite::B2],
        "g2" => vec![Suite::G2],
        "c3" => vec![Suite::C3Kl, Suite::C3P2],
        "c3-kl" => vec![Suite::C3Kl],
        "c3-p2" | "c3p2" => vec![Suite::C3P2],
        "typea" => vec![Suite::TypeA { n: typea_n }],
        "invariants" | "parabolic" => vec![Suite::Invariants],
        "stars" => vec![Suite::Stars],
        "tau" => vec![Suite::Tau],
        "negative" => vec![Suite::Negative],
        "all" => all,
        other => return Err(Error::Schema(format!("unknown suite `{other}`"))),
    })
}

impl Suite {
    pub fn run(self) -> Result<SuiteOutcome> {
        let start = Instant::now();
        let mut notes = Vec::new();
        let report = match self {
            Suite::B2 => suite_b2(&mut notes)?,
            Suite::G2 => suite_g2(&mut notes)?,
            Suite::C3Kl => suite_c3_kl(&mut notes)?,
            Suite::C3P2 => suite_c3_p2(&mut notes)?,
            Suite::TypeA { n } => suite_typea(n, &mut notes)?,
            Suite::Invariants => suite_invariants(&mut notes)?,
            Suite::Stars => suite_stars(&mut notes)?,
            Suite::Tau => suite_tau(&mut notes)?,
            Suite::Negative => suite_negative(&mut notes)?,
        };
        Ok(SuiteOutcome { suite: self.to_string(), report, notes, elapsed_ms: start.elapsed().as_millis() })
    }
}

/// Named p-canonical table fixtures.
pub fn table_fixture(name: &str) -> Result<&'static str> {
    match name.to_ascii_lowercase().as_str() {
        "c3p2" | "c3-p2" => Ok(golden::C3_P2_TABLE),
        other => Err(Error::Schema(format!("no fixture named `{other}`"))),
    }
}

/// The C3 group, its KL table and the 2-canonical table.
pub fn load_c3_p2() -> Result<(CoxeterSystem, KLTable, PCanTable)> {
    let w = CoxeterSystem::of_type("C3")?;
    let kl = KLTable::compute(&w);
    let table = PCanTable::from_json_str(golden::C3_P2_TABLE, &w, &kl, Provenance::Fixture("c3p2".into()), true)?;
    Ok((w, kl, table))
}

fn setup(label: &str) -> Result<(CoxeterSystem, KLTable, PCanTable)> {
    let w = CoxeterSystem::of_type(label)?;
    let kl = KLTable::compute(&w);
    Ok((w, kl, PCanTable::identity_table()))
}

fn gens(list: &[usize]) -> GenSet {
    let mut g = GenSet::default();
    for &s in list {
        g.insert(s);
    }
    g
}

/// Moves a table along an isomorphism of Coxeter systems given on generators,
/// after checking that it matches the Cartan matrices.
pub fn transport_table(
    from: &CoxeterSystem,
    table: &PCanTable,
    to: &CoxeterSystem,
    perm: &[usize],
) -> Result<PCanTable> {
    let n = from.rank();
    let ok = n == to.rank()
        && perm.len() == n
        && (0..n).all(|i| (0..n).all(|j| from.cartan()[i][j] == to.cartan()[perm[i]][perm[j]]));
    if !ok {
        return Err(Error::InvalidAutomorphism(format!("{perm:?} does not match the Cartan matrices")));
    }
    let image = |x: Elt| -> Result<Elt> {
        let word: Vec<usize> = from.reduced_word(x).iter().map(|&s| perm[s]).collect();
        to.word_to_element(&word)
    };
    let entries = table.entries().map(|(y, x, c)| Ok((image(y)?, image(x)?, c.clone()))).collect::<Result<Vec<_>>>()?;
    Ok(PCanTable::from_entries(table.prime(), table.provenance().clone(), entries))
}

/// The 2-canonical table of B2 (labels of `CoxeterSystem::of_type("B2")`),
/// obtained by restricting the C3 table to the parabolic subgroup on `{1, 2}`.
pub fn b2_p2_table(b2: &CoxeterSystem) -> Result<PCanTable> {
    let (c3, _, table) = load_c3_p2()?;
    let (sub, _, sub_table) = table.restrict_to_parabolic(&c3, gens(&[0, 1]))?;
    transport_table(&sub, &sub_table, b2, &[1, 0])
}

fn suite_b2(notes: &mut Vec<String>) -> Result<Report> {
    let golden = GoldenFile::named("b2")?;
    let (w, kl, zero) = setup("B2")?;
    let mut report = Report::new();
    let right = compute_cells(&w, &zero, &kl, CellSide::Right);
    let two = compute_cells(&w, &zero, &kl, CellSide::TwoSided);
    report.merge(golden.partition("kl-right")?.compare(&w, &right, None)?);
    report.merge(golden.partition("kl-two-sided")?.compare(&w, &two, None)?);

    let table = b2_p2_table(&w)?;
    report.merge(table.validate(&w, &kl));
    let right = compute_cells(&w, &table, &kl, CellSide::Right);
    let two = compute_cells(&w, &table, &kl, CellSide::TwoSided);
    report.merge(golden.partition("p2-right")?.compare(&w, &right, None)?);
    report.merge(golden.partition("p2-two-sided")?.compare(&w, &two, None)?);
    notes.push("p = 2 table: restriction of the C3 fixture to generators {1,2}".into());
    Ok(report)
}

/// Number of reduced words of `x`, by brute force over all words of length `l(x)`.
pub fn reduced_word_count(w: &CoxeterSystem, x: Elt) -> usize {
    let len = w.length(x);
    let rank = w.rank();
    let total = rank.pow(len as u32);
    (0..total)
        .filter(|&code| {
            let mut y = IDENTITY;
            let mut c = code;
            for _ in 0..len {
                let s = c % rank;
                c /= rank;
                let next = w.right_mul(y, s);
                if w.length(next) <= w.length(y) {
                    return false;
                }
                y = next;
            }
            y == x
        })
        .count()
}

fn suite_g2(notes: &mut Vec<String>) -> Result<Report> {
    let golden = GoldenFile::named("g2")?;
    let (w, kl, zero) = setup("G2")?;
    let mut report = Report::new();
    let right = compute_cells(&w, &zero, &kl, CellSide::Right);
    let two = compute_cells(&w, &zero, &kl, CellSide::TwoSided);
    report.merge(golden.partition("kl-right")?.compare(&w, &right, None)?);
    report.merge(golden.partition("kl-two-sided")?.compare(&w, &two, None)?);

    let unique: BTreeSet<Elt> = w.elements().filter(|&x| x != IDENTITY && reduced_word_count(&w, x) == 1).collect();
    let resolve = |part: &str, cell: &str| -> Result<BTreeSet<Elt>> {
        golden.partition(part)?.resolve(&w)?.remove(cell).ok_or_else(|| Error::Schema(format!("no cell {cell}")))
    };
    report.check(resolve("kl-two-sided", "C")? == unique, || {
        Violation::new("unique-reduced", vec!["C".into()], "C is not the set of elements with a unique reduced expression")
    });
    for (name, s) in [("sC", 0), ("tC", 1)] {
        let expected: BTreeSet<Elt> =
            unique.iter().copied().filter(|&x| w.left_descents(x) == GenSet::singleton(s)).collect();
        report.check(resolve("kl-right", name)? == expected, || {
            Violation::new("unique-reduced", vec![name.into()], "cell differs from the elements of C with this left descent")
        });
    }
    notes.push(format!("|C| = {} by brute-force reduced word count", unique.len()));
    Ok(report)
}

fn suite_c3_kl(notes: &mut Vec<String>) -> Result<Report> {
    let golden = GoldenFile::named("c3")?;
    let (w, kl, zero) = setup("C3")?;
    let mut report = Report::new();
    let right = compute_cells(&w, &zero, &kl, CellSide::Right);
    let left = compute_cells(&w, &zero, &kl, CellSide::Left);
    let two = compute_cells(&w, &zero, &kl, CellSide::TwoSided);
    report.merge(golden.partition("kl-right")?.compare(&w, &right, Some(&two))?);

    // The left diagram is the image of the right one under inversion.
    let inverse_cell = |i: usize| left.cell_of[w.inverse(right.cells[i][0])];
    for (i, cell) in right.cells.iter().enumerate() {
        let image: BTreeSet<Elt> = cell.iter().map(|&x| w.inverse(x)).collect();
        let got: BTreeSet<Elt> = left.cells[inverse_cell(i)].iter().copied().collect();
        report.check(image == got, || {
            Violation::new("left-cells", vec![w.digits(cell[0])], "left cell is not the inverse of the right cell")
        });
    }
    let mapped: BTreeSet<(usize, usize)> =
        right.hasse_edges().into_iter().map(|(a, b)| (inverse_cell(a), inverse_cell(b))).collect();
    let got: BTreeSet<(usize, usize)> = left.hasse_edges().into_iter().collect();
    report.check(mapped == got, || Violation::new("left-hasse", vec![], "left Hasse diagram is not the inverted right one"));
    notes.push(format!("{} right cells, {} two-sided cells", right.len(), two.len()));
    Ok(report)
}

fn suite_c3_p2(notes: &mut Vec<String>) -> Result<Report> {
    let golden = GoldenFile::named("c3")?;
    let (w, kl, table) = load_c3_p2()?;
    let mut report = Report::new();
    let right = compute_cells(&w, &table, &kl, CellSide::Right);
    let two = compute_cells(&w, &table, &kl, CellSide::TwoSided);
    report.merge(golden.partition("p2-right")?.compare(&w, &right, Some(&two))?);

    let expected = golden.wgraph.as_ref().ok_or_else(|| Error::Schema("c3 golden has no W-graph".into()))?;
    let vertices = expected.vertex_elements(&w)?;
    let graph = ColouredWGraph::from_vertices(&w, &table, &kl, &vertices, expected.side);
    report.merge(expected.compare(&w, &graph)?);
    report.merge(graph.verify_relations(&w));

    let labels: Vec<String> = graph
        .edge_list(&w)
        .into_iter()
        .filter(|e| e.3 != "1")
        .map(|(x, y, s, l)| format!("{x}->{y} s={s} label {l}"))
        .collect();
    notes.push(format!("{} right 2-cells; non-unit W-graph labels: {}", right.len(), labels.join("; ")));
    Ok(report)
}

fn suite_typea(n_max: usize, notes: &mut Vec<String>) -> Result<Report> {
    let mut report = Report::new();
    let involutions: Vec<usize> =
        (1..=n_max.max(6)).map(|n| Permutation::all(n).iter().filter(|p| p.is_involution()).count()).collect();
    report.check(involutions[..6] == [1, 2, 4, 10, 26, 76], || {
        Violation::new("involution-count", vec![], format!("brute force gives {involutions:?}"))
    });
    for n in 3..=n_max {
        let (w, kl, zero) = setup(&format!("A{}", n - 1))?;
        let left = compute_cells(&w, &zero, &kl, CellSide::Left);
        let right = compute_cells(&w, &zero, &kl, CellSide::Right);
        let two = compute_cells(&w, &zero, &kl, CellSide::TwoSided);
        report.merge(verify_typea_cell_theorem(&w, &left, &right, &two)?);
        report.check(left.len() == involutions[n - 1], || {
            Violation::new("left-cell-count", vec![format!("n={n}")], format!("{} left cells, {} involutions", left.len(), involutions[n - 1]))
        });
        notes.push(format!("S{n}: {} left cells, {} two-sided cells", left.len(), two.len()));
    }
    for n in 1..=8 {
        for shape in Partition::all(n) {
            let (hook, brute) = (shape.hook_length_count(), shape.count_tableaux_brute_force());
            report.check(hook == brute, || {
                Violation::new("hook-length", vec![shape.to_string()], format!("hook formula {hook}, enumeration {brute}"))
            });
        }
    }
    Ok(report)
}

/// All non-empty proper subsets of the generators.
fn proper_subsets(rank: usize) -> Vec<GenSet> {
    (1..(1u32 << rank) - 1).map(GenSet).collect()
}

fn invariant_report(w: &CoxeterSystem, kl: &KLTable, table: &PCanTable) -> Result<Report> {
    let mut report = table.validate(w, kl);
    let left = compute_cells(w, table, kl, CellSide::Left);
    let right = compute_cells(w, table, kl, CellSide::Right);
    let two = compute_cells(w, table, kl, CellSide::TwoSided);
    for part in [&left, &right, &two] {
        report.merge(check_descent_invariant(w, part));
        report.merge(check_identity_cell(part));
    }
    report.merge(inverse_duality_check(w, &left, &right));
    if table.prime() == 0 {
        report.merge(right_connectedness_report(w, &right));
    }
    for subset in proper_subsets(w.rank()) {
        report.merge(verify_parabolic_compatibility(w, table, kl, subset)?);
        report.merge(verify_parabolic_factorization(w, table, kl, subset));
    }
    Ok(report)
}

fn suite_invariants(notes: &mut Vec<String>) -> Result<Report> {
    let mut report = Report::new();
    for label in ["B3", "C3"] {
        let (w, kl, zero) = setup(label)?;
        let r = invariant_report(&w, &kl, &zero)?;
        notes.push(format!("{label} p=0: {} checks", r.checks));
        report.merge(r);
    }
    let (w, kl, table) = load_c3_p2()?;
    let r = invariant_report(&w, &kl, &table)?;
    notes.push(format!("C3 p=2: {} checks", r.checks));
    report.merge(r);
    Ok(report)
}

fn suite_stars(notes: &mut Vec<String>) -> Result<Report> {
    let mut report = Report::new();
    for label in ["A3", "B3"] {
        let (w, kl, table) = setup(label)?;
        let left = compute_cells(&w, &table, &kl, CellSide::Left);
        let right = compute_cells(&w, &table, &kl, CellSide::Right);
        for (r, t) in star_pairs(&w) {
            report.merge(check_coefficient_sliding(&w, &table, &kl, r, t)?);
            report.merge(check_base_change_relations(&w, &table, r, t)?);
            report.merge(check_structure_coefficient_relations(&w, &table, &kl, r, t)?);
            report.merge(check_string_vanishing(&w, &table, &kl, r, t)?);
            let (rep, counts) = string_relation_report(&w, &left, r, t)?;
            report.merge(rep);
            notes.push(format!("{label} ({},{}) string relations {counts:?}", r + 1, t + 1));
        }
        report.merge(star_closure_check(&w, &left, &right)?);
        report.merge(check_wgraph_star_isomorphism(&w, &table, &kl, &left)?);
        let mut graphs = 0;
        for part in [&left, &right] {
            for i in 0..part.len() {
                let g = extract_wgraph(&w, part, i, &table, &kl).expect("one-sided partition");
                report.merge(g.verify_relations(&w));
                graphs += 1;
            }
        }
        notes.push(format!("{label}: Hecke relations checked on {graphs} cell W-graphs"));
    }
    Ok(report)
}

fn suite_tau(notes: &mut Vec<String>) -> Result<Report> {
    let mut report = Report::new();
    for label in ["A2", "A3", "A4"] {
        let (w, kl, zero) = setup(label)?;
        let left = compute_cells(&w, &zero, &kl, CellSide::Left);
        let tau = tau_partition(&w);
        report.check(tau.equals_partition(&left), || {
            Violation::new("tau-type-a", vec![label.into()], format!("{} tau classes, {} left cells", tau.len(), left.len()))
        });
    }
    {
        let (w, kl, zero) = setup("B3")?;
        let left = compute_cells(&w, &zero, &kl, CellSide::Left);
        let tilde = tau_tilde_partition(&w);
        report.check(tilde.is_refined_by(&left), || Violation::new("tau-tilde-b3", vec![], "left cells do not refine tau-tilde classes"));
        let tau = tau_partition(&w);
        report.check(tau.is_refined_by(&left), || Violation::new("tau-b3", vec![], "left cells do not refine tau classes"));
        notes.push(format!("B3: {} left cells, {} tau classes, {} tau-tilde classes", left.len(), tau.len(), tilde.len()));
    }

    let (w, kl, table) = load_c3_p2()?;
    let pairs: Vec<(usize, usize)> = star_pairs(&w).into_iter().filter(|&(r, t)| w.m(r, t) == Some(3)).collect();
    let left_p = compute_cells(&w, &table, &kl, CellSide::Left);
    let tau3 = tau_partition_for_pairs(&w, &pairs);
    report.check(tau3.is_refined_by(&left_p), || {
        Violation::new("tau-c3-p2", vec![], "left 2-cells do not refine tau classes of the m = 3 pairs")
    });

    let zero = PCanTable::identity_table();
    let kl_right = compute_cells(&w, &zero, &kl, CellSide::Right);
    let c12 = kl_right.cell_of[w.parse_digits("232123")?];
    let crit = decomposition_criterion(&w, &table, &kl_right);
    report.check(!crit[c12].hypothesis, || {
        Violation::new("decomposition-criterion", vec!["C12".into()], "C12 satisfies the hypothesis but should not")
    });
    let failing: Vec<String> = crit
        .iter()
        .filter(|c| !c.hypothesis)
        .map(|c| format!("{{{}}}", kl_right.cells[c.cell].iter().map(|&x| w.digits(x)).collect::<Vec<_>>().join(",")))
        .collect();
    notes.push(format!("C3 p=2: cells failing the hypothesis: {}", failing.join(" ")));

    for n in 3..=5 {
        let (w, kl, zero) = setup(&format!("A{}", n - 1))?;
        let right = compute_cells(&w, &zero, &kl, CellSide::Right);
        let crit = decomposition_criterion(&w, &zero, &right);
        report.check(crit.iter().all(|c| c.hypothesis && c.decomposes), || {
            Violation::new("decomposition-criterion", vec![format!("S{n}")], "a cell fails the hypothesis at p = 0")
        });
    }
    Ok(report)
}

/// Detected iff the report fails with a violation of `check` whose witnesses mention every `at`.
fn located(report: &Report, check: &str, at: &[&str]) -> bool {
    report
        .violations
        .iter()
        .any(|v| v.check.ends_with(check) && at.iter().all(|a| v.witnesses.iter().any(|x| x.contains(a))))
}

fn corrupt_c3(edit: impl FnOnce(&mut TableFile)) -> Result<(CoxeterSystem, KLTable, PCanTable)> {
    let w = CoxeterSystem::of_type("C3")?;
    let kl = KLTable::compute(&w);
    let mut file: TableFile = serde_json::from_str(golden::C3_P2_TABLE)?;
    edit(&mut file);
    let table = PCanTable::from_file_data(&file, &w, &kl, Provenance::External("corrupted".into()), false)?;
    Ok((w, kl, table))
}

fn set_term(file: &mut TableFile, x: &[usize], y: &[usize], coeff: Option<LaurentPoly>) {
    let entry = match file.entries.iter_mut().find(|e| e.x == x) {
        Some(e) => e,
        None => {
            file.entries.push(crate::pcanonical::EntryFile { x: x.to_vec(), terms: vec![] });
            file.entries.last_mut().expect("just pushed")
        }
    };
    entry.terms.retain(|t| t.y != y);
    if let Some(coeff) = coeff {
        entry.terms.push(crate::pcanonical::TermFile { y: y.to_vec(), coeff });
    }
}

fn suite_negative(notes: &mut Vec<String>) -> Result<Report> {
    let mut report = Report::new();
    let mut expect = |name: &str, detected: bool, rep: &Report| {
        notes.push(format!("{name}: {}", rep.violations.first().map(|v| v.to_string()).unwrap_or_else(|| "not detected".into())));
        report.check(detected, || Violation::new("negative", vec![name.into()], "corruption was not detected"));
    };

    let (w, kl, t) = corrupt_c3(|f| set_term(f, &[2, 3, 2, 1, 2, 3], &[2, 3, 2], Some(LaurentPoly::v())))?;
    let rep = t.validate(&w, &kl);
    expect("non-self-dual entry", located(&rep, "self-dual", &["232", "232123"]), &rep);

    let (w, kl, t) = corrupt_c3(|f| set_term(f, &[3, 2, 1, 2], &[3, 2], None))?;
    let rep = t.validate(&w, &kl);
    expect("missing mirrored entry", located(&rep, "iota-symmetry", &["23", "2123"]), &rep);

    let (w, kl, t) = corrupt_c3(|f| set_term(f, &[2, 1, 2], &[1], Some(LaurentPoly::one())))?;
    let rep = t.validate(&w, &kl);
    expect("entry violating descents", located(&rep, "descent", &["1", "212"]), &rep);

    let (w, kl, t) = corrupt_c3(|f| set_term(f, &[2, 3, 2, 1, 2, 3], &[2, 3, 2], Some(LaurentPoly::monomial(-1, 0))))?;
    let rep = t.validate(&w, &kl);
    expect("negative entry", located(&rep, "nonnegative", &["232", "232123"]), &rep);

    // A table that passes the elementary checks but breaks the string relations.
    let a3 = CoxeterSystem::of_type("A3")?;
    let a3kl = KLTable::compute(&a3);
    let fake = PCanTable::from_entries(
        5,
        Provenance::External("fabricated".into()),
        [(a3.parse_digits("2")?, a3.parse_digits("232")?, LaurentPoly::one())],
    );
    let rep = check_base_change_relations(&a3, &fake, 0, 1)?;
    let mut vanishing = check_string_vanishing(&a3, &fake, &a3kl, 1, 2)?;
    let ok = located(&rep, "base-change", &["232"]) && rep.violations.iter().all(|v| v.r == Some(0) && v.t == Some(1));
    expect("fabricated A3 table", ok, &rep);
    vanishing.violations.retain(|v| v.r == Some(1) && v.t == Some(2));
    expect("fabricated A3 table, vanishing", !vanishing.is_pass(), &vanishing);

    // A perturbed W-graph: one label 2 replaced by 1.
    let golden_c3 = GoldenFile::named("c3")?;
    let mut graph = golden_c3.wgraph.clone().ok_or_else(|| Error::Schema("no W-graph".into()))?;
    let (w, _, _) = load_c3_p2()?;
    let original = graph.to_graph(&w)?;
    let edge = graph.edges.iter_mut().find(|e| e.from == "23212" && e.to == "2321" && e.s == 1).expect("edge is listed");
    edge.label = "1".into();
    let perturbed = graph.to_graph(&w)?;
    let rel = perturbed.verify_relations(&w);
    let cmp = golden_c3.wgraph.as_ref().expect("checked").compare(&w, &perturbed)?;
    let mut both = rel.clone();
    both.merge(cmp.clone());
    let ok = original.verify_relations(&w).is_pass() && !rel.is_pass() && located(&cmp, "wgraph-missing", &["23212", "2321", "s=1"]);
    expect("perturbed C3 W-graph", ok, &both);

    // A perturbed left-cell graph of A3.
    let (w, kl, zero) = setup("A3")?;
    let left = compute_cells(&w, &zero, &kl, CellSide::Left);
    let i = (0..left.len()).find(|&i| left.cells[i].len() > 1).expect("A3 has non-trivial cells");
    let mut g = extract_wgraph(&w, &left, i, &zero, &kl).expect("left partition");
    let key = *g.edges.keys().next().expect("cell graph has an edge");
    if let Some(label) = g.edges.get_mut(&key).and_then(|m| m.values_mut().next()) {
        *label = LaurentPoly::monomial(2, 0);
    }
    let rep = g.verify_relations(&w);
    expect("perturbed A3 W-graph", !rep.is_pass(), &rep);

    Ok(report)
}

/// Runs a list of suites; errors become failed outcomes.
pub fn run_all(suites: &[Suite]) -> Vec<SuiteOutcome> {
    suites
        .iter()
        .map(|&s| {
            let start = Instant::now();
            s.run().unwrap_or_else(|e| {
                let mut report = Report::new();
                report.push(Violation::new("error", vec![], e.to_string()));
                SuiteOutcome { suite: s.to_string(), report, notes: vec![], elapsed_ms: start.elapsed().as_millis() }
            })
        })
        .collect()
}

/// Checks a user-supplied table: elementary properties, string relations for
/// the pairs meeting the p-bound, and the Hecke relations of every right cell graph.
pub fn verify_table(w: &CoxeterSystem, kl: &KLTable, table: &PCanTable) -> Result<Report> {
    let mut report = table.validate(w, kl);
    for (r, t) in star_pairs(w) {
        if crate::stars::require_prime_bound(w, table.prime(), r, t).is_err() {
            continue;
        }
        report.merge(check_base_change_relations(w, table, r, t)?);
        report.merge(check_structure_coefficient_relations(w, table, kl, r, t)?);
        report.merge(check_string_vanishing(w, table, kl, r, t)?);
    }
    let right = compute_cells(w, table, kl, CellSide::Right);
    for i in 0..right.len() {
        if let Some(g) = extract_wgraph(w, &right, i, table, kl) {
            report.merge(g.verify_relations(w));
        }
    }
    Ok(report)
}

/// Partitions used by several commands.
pub fn partitions(w: &CoxeterSystem, kl: &KLTable, table: &PCanTable) -> [CellPartition; 3] {
    [CellSide::Left, CellSide::Right, CellSide::TwoSided].map(|s| compute_cells(w, table, kl, s))
}
