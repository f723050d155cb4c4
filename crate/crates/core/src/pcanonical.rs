//! p-canonical basis tables: `pB_x = C_x + sum_{y < x} pm_{y,x} C_y`.
//!
//! Tables are ingested from JSON files (or synthesized as the identity for
//! `p = 0`) and validated against the elementary properties of the basis.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSystem, Elt, GenSet, GroupSpec, Side};
use crate::error::{Error, Result};
use crate::hecke::{change_basis, kl_multiply, std_multiply, Basis, HeckeElt, KLTable};
use crate::laurent::LaurentPoly;
use crate::report::{Report, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// The `p = 0` table, equal to the Kazhdan-Lusztig basis.
    Identity,
    /// A data file shipped with the crate.
    Fixture(String),
    /// A user-supplied file.
    External(String),
}

#[derive(Debug, Clone)]
pub struct PCanTable {
    prime: u32,
    provenance: Provenance,
    /// Nontrivial columns only: for each `x`, the nonzero `pm_{y,x}` with `y != x`, sorted by `y`.
    columns: BTreeMap<Elt, Vec<(Elt, LaurentPoly)>>,
}

impl PartialEq for PCanTable {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && self.columns == other.columns
    }
}

/// On-disk format. Words are 1-based generator labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableFile {
    #[serde(flatten)]
    pub group: GroupSpec,
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub entries: Vec<EntryFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryFile {
    pub x: Vec<usize>,
    pub terms: Vec<TermFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermFile {
    pub y: Vec<usize>,
    pub coeff: LaurentPoly,
}

impl PCanTable {
    /// The `p = 0` table: `pm_{y,x} = delta_{y,x}`.
    pub fn identity_table() -> Self {
        PCanTable { prime: 0, provenance: Provenance::Identity, columns: BTreeMap::new() }
    }

    pub(crate) fn identity_ref() -> &'static PCanTable {
        static TABLE: OnceLock<PCanTable> = OnceLock::new();
        TABLE.get_or_init(PCanTable::identity_table)
    }

    /// Builds a table from off-diagonal entries `(y, x, pm_{y,x})` without validating it.
    pub fn from_entries<I>(prime: u32, provenance: Provenance, entries: I) -> Self
    where
        I: IntoIterator<Item = (Elt, Elt, LaurentPoly)>,
    {
        let mut columns: BTreeMap<Elt, BTreeMap<Elt, LaurentPoly>> = BTreeMap::new();
        for (y, x, c) in entries {
            if y == x || c.is_zero() {
                continue;
            }
            columns.entry(x).or_default().insert(y, c);
        }
        let columns = columns
            .into_iter()
            .map(|(x, col)| (x, col.into_iter().collect::<Vec<_>>()))
            .filter(|(_, col)| !col.is_empty())
            .collect();
        PCanTable { prime, provenance, columns }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn basis(&self) -> Basis {
        Basis::PCanonical(self.prime)
    }

    pub fn pm(&self, y: Elt, x: Elt) -> LaurentPoly {
        if y == x {
            return LaurentPoly::one();
        }
        self.column(x)
            .binary_search_by_key(&y, |(z, _)| *z)
            .map(|i| self.column(x)[i].1.clone())
            .unwrap_or_default()
    }

    /// Off-diagonal nonzero entries of column `x`.
    pub fn column(&self, x: Elt) -> &[(Elt, LaurentPoly)] {
        self.columns.get(&x).map_or(&[], |c| c.as_slice())
    }

    /// All off-diagonal nonzero entries `(y, x, pm_{y,x})`.
    pub fn entries(&self) -> impl Iterator<Item = (Elt, Elt, &LaurentPoly)> {
        self.columns.iter().flat_map(|(&x, col)| col.iter().map(move |(y, c)| (*y, x, c)))
    }

    /// Elements whose p-canonical basis element differs from the KL basis element.
    pub fn nontrivial(&self) -> impl Iterator<Item = Elt> + '_ {
        self.columns.keys().copied()
    }

    /// `pB_x` in the KL basis.
    pub fn pcan_in_kl(&self, x: Elt) -> HeckeElt {
        let mut out = HeckeElt::basis_element(Basis::KazhdanLusztig, x);
        for (y, c) in self.column(x) {
            out.add_term(*y, c);
        }
        out
    }

    /// Converts a KL-basis element to this p-canonical basis (unitriangular solve).
    pub fn kl_to_pcan(&self, a: &HeckeElt) -> HeckeElt {
        assert_eq!(a.basis(), Basis::KazhdanLusztig, "expected an element in the KL basis");
        let mut rest = a.clone();
        let mut out = HeckeElt::zero(self.basis());
        while let Some((x, c)) = rest.top_term() {
            out.add_term(x, &c);
            rest.add_term(x, &-&c);
            for (y, m) in self.column(x) {
                rest.add_term(*y, &-(&c * m));
            }
        }
        out
    }

    /// Checks every elementary property of p-canonical tables.
    pub fn validate(&self, w: &CoxeterSystem, kl: &KLTable) -> Report {
        let mut report = Report::new();
        let pair = |y: Elt, x: Elt| vec![format!("(y,x)=({},{})", w.digits(y), w.digits(x))];
        for (y, x, c) in self.entries() {
            if x >= w.len() || y >= w.len() {
                report.push(Violation::new("range", vec![format!("({y},{x})")], "element id out of range"));
                continue;
            }
            report.check(w.bruhat_lt(y, x), || {
                Violation::new("unitriangular", pair(y, x), format!("pm = {c} but y is not below x"))
            });
            report.check(c.is_self_dual(), || Violation::new("self-dual", pair(y, x), format!("pm = {c}")));
            report.check(c.is_nonnegative(), || Violation::new("nonnegative", pair(y, x), format!("pm = {c}")));
            report.check(
                w.left_descents(x).is_subset(w.left_descents(y)) && w.right_descents(x).is_subset(w.right_descents(y)),
                || Violation::new("descent", pair(y, x), format!("pm = {c} but the descent sets of x are not inside those of y")),
            );
            let mirrored = self.pm(w.inverse(y), w.inverse(x));
            report.check(&mirrored == c, || {
                Violation::new("iota-symmetry", pair(y, x), format!("pm = {c} but pm at inverses = {mirrored}"))
            });
        }
        for x in self.nontrivial() {
            if x >= w.len() {
                continue;
            }
            for (y, ph) in p_h_column(self, kl, x).iter() {
                report.check(ph.is_nonnegative(), || {
                    Violation::new("ph-nonnegative", pair(y, x), format!("ph = {ph}"))
                });
            }
        }
        report
    }

    /// Parses and validates a table. Violations become an [`Error::InvariantViolation`]
    /// naming the offending pairs unless `strict` is false.
    pub fn from_json_str(
        json: &str,
        w: &CoxeterSystem,
        kl: &KLTable,
        provenance: Provenance,
        strict: bool,
    ) -> Result<Self> {
        let file: TableFile = serde_json::from_str(json)?;
        Self::from_file_data(&file, w, kl, provenance, strict)
    }

    pub fn from_file_data(
        file: &TableFile,
        w: &CoxeterSystem,
        kl: &KLTable,
        provenance: Provenance,
        strict: bool,
    ) -> Result<Self> {
        let word = |labels: &[usize]| -> Result<Elt> {
            let e = w.labels_to_element(labels)?;
            if w.length(e) != labels.len() {
                return Err(Error::Schema(format!("word {labels:?} is not reduced")));
            }
            Ok(e)
        };
        let mut seen = std::collections::HashSet::new();
        let mut entries = Vec::new();
        for entry in &file.entries {
            let x = word(&entry.x)?;
            if !seen.insert(x) {
                return Err(Error::Schema(format!("duplicate entry for x = {}", w.digits(x))));
            }
            for term in &entry.terms {
                let y = word(&term.y)?;
                if y == x {
                    if !term.coeff.is_one() {
                        return Err(Error::InvariantViolation(format!(
                            "[unitriangular] at (y,x)=({0},{0}): diagonal coefficient {1} is not 1",
                            w.digits(x),
                            term.coeff
                        )));
                    }
                    continue;
                }
                entries.push((y, x, term.coeff.clone()));
            }
        }
        let table = PCanTable::from_entries(file.p, provenance, entries);
        if strict {
            let report = table.validate(w, kl);
            if !report.is_pass() {
                let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
                return Err(Error::InvariantViolation(msgs.join("; ")));
            }
        }
        Ok(table)
    }

    /// Reads a table file; the group is the one described by the file.
    pub fn load(path: &Path, cap: usize, strict: bool) -> Result<(CoxeterSystem, KLTable, PCanTable)> {
        let text = std::fs::read_to_string(path)?;
        let file: TableFile = serde_json::from_str(&text)?;
        let w = file.group.build(cap)?;
        let kl = KLTable::compute(&w);
        let provenance = Provenance::External(path.display().to_string());
        let table = Self::from_file_data(&file, &w, &kl, provenance, strict)?;
        Ok((w, kl, table))
    }

    /// Reads a table file for an already constructed group.
    pub fn load_table(path: &Path, w: &CoxeterSystem, kl: &KLTable) -> Result<PCanTable> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text, w, kl, Provenance::External(path.display().to_string()), true)
    }

    pub fn to_file_data(&self, w: &CoxeterSystem, group: GroupSpec) -> TableFile {
        let entries = self
            .columns
            .iter()
            .map(|(&x, col)| {
                let mut terms = vec![TermFile { y: w.labels(x), coeff: LaurentPoly::one() }];
                terms.extend(col.iter().rev().map(|(y, c)| TermFile { y: w.labels(*y), coeff: c.clone() }));
                EntryFile { x: w.labels(x), terms }
            })
            .collect();
        TableFile { group, p: self.prime, description: None, entries }
    }

    /// Relabels the table along a diagram automorphism: the new table has
    /// `pm_{phi(y), phi(x)} = pm_{y,x}`.
    pub fn apply_automorphism(&self, w: &CoxeterSystem, phi: &[usize]) -> Result<PCanTable> {
        w.check_diagram_automorphism(phi)?;
        let image = |e: Elt| w.apply_automorphism_unchecked(phi, e);
        Ok(PCanTable::from_entries(
            self.prime,
            self.provenance.clone(),
            self.entries().map(|(y, x, c)| (image(y), image(x), c.clone())),
        ))
    }

    /// The table of the standard parabolic subgroup `W_I`, with the embedding of its ids.
    pub fn restrict_to_parabolic(
        &self,
        w: &CoxeterSystem,
        subset: GenSet,
    ) -> Result<(CoxeterSystem, Vec<Elt>, PCanTable)> {
        let (sub, embed) = w.parabolic_subsystem(subset)?;
        let back: BTreeMap<Elt, Elt> = embed.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let entries: Vec<_> = self
            .entries()
            .filter_map(|(y, x, c)| Some((*back.get(&y)?, *back.get(&x)?, c.clone())))
            .collect();
        let table = PCanTable::from_entries(self.prime, self.provenance.clone(), entries);
        Ok((sub, embed, table))
    }
}

fn p_h_column(table: &PCanTable, kl: &KLTable, x: Elt) -> HeckeElt {
    let pb = table.pcan_in_kl(x);
    change_basis(&pb, Basis::Standard, kl, None).expect("KL to standard needs no table")
}

/// `ph_{y,x}`: the coefficient of `H_y` in `pB_x`.
pub fn p_h(table: &PCanTable, kl: &KLTable, y: Elt, x: Elt) -> LaurentPoly {
    table
        .column(x)
        .iter()
        .map(|(z, m)| m * &kl.h(y, *z))
        .fold(kl.h(y, x), |acc, t| acc + t)
}

/// `pB_x` in the standard basis.
pub fn pcan_in_standard(table: &PCanTable, kl: &KLTable, x: Elt) -> HeckeElt {
    p_h_column(table, kl, x)
}

/// The coefficients of `pB_x C_s` (right) or `C_s pB_x` (left) in the p-canonical basis.
pub fn structure_coefficients(
    w: &CoxeterSystem,
    table: &PCanTable,
    kl: &KLTable,
    x: Elt,
    s: usize,
    side: Side,
) -> HeckeElt {
    let prod = kl_multiply(w, kl, &table.pcan_in_kl(x), s, side).expect("KL basis");
    table.kl_to_pcan(&prod)
}

/// `pB_x pB_y` in the p-canonical basis.
pub fn pcan_product(w: &CoxeterSystem, table: &PCanTable, kl: &KLTable, x: Elt, y: Elt) -> HeckeElt {
    let a = pcan_in_standard(table, kl, x);
    let b = pcan_in_standard(table, kl, y);
    let prod = std_multiply(w, &a, &b).expect("standard basis");
    change_basis(&prod, table.basis(), kl, Some(table)).expect("table is present")
}

/// Checks `ph_{xy,xz} = ph_{y,z}` and `pmu^{xz}_{xy,u} = pmu^z_{y,u}` for
/// all `x` in `W^I` and `y, z, u` in `W_I`.
pub fn verify_parabolic_factorization(
    w: &CoxeterSystem,
    table: &PCanTable,
    kl: &KLTable,
    subset: GenSet,
) -> Report {
    let mut report = Report::new();
    let wi = w.parabolic_elements(subset);
    let reps = w.minimal_coset_representatives(subset, Side::Right);
    let products: BTreeMap<(Elt, Elt), HeckeElt> = wi
        .iter()
        .flat_map(|&y| wi.iter().map(move |&u| (y, u)))
        .map(|(y, u)| ((y, u), pcan_product(w, table, kl, y, u)))
        .collect();
    for &x in &reps {
        for &y in &wi {
            let xy = w.mul(x, y);
            for &z in &wi {
                let xz = w.mul(x, z);
                let (lhs, rhs) = (p_h(table, kl, xy, xz), p_h(table, kl, y, z));
                report.check(lhs == rhs, || {
                    Violation::new(
                        "parabolic-ph",
                        vec![w.digits(x), w.digits(y), w.digits(z)],
                        format!("ph(xy,xz) = {lhs} but ph(y,z) = {rhs}"),
                    )
                });
            }
            if x == crate::coxeter::IDENTITY {
                continue;
            }
            for &u in &wi {
                let big = pcan_product(w, table, kl, xy, u);
                let small = &products[&(y, u)];
                for &z in &wi {
                    let (lhs, rhs) = (big.coefficient(w.mul(x, z)), small.coefficient(z));
                    report.check(lhs == rhs, || {
                        Violation::new(
                            "parabolic-mu",
                            vec![w.digits(x), w.digits(y), w.digits(z), w.digits(u)],
                            format!("pmu^(xz)_(xy,u) = {lhs} but pmu^z_(y,u) = {rhs}"),
                        )
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_table_is_kl() {
        let b2 = CoxeterSystem::of_type("B2").unwrap();
        let kl = KLTable::compute(&b2);
        let t = PCanTable::identity_table();
        assert!(t.validate(&b2, &kl).is_pass());
        for x in b2.elements() {
            assert_eq!(t.pm(x, x), LaurentPoly::one());
            for y in b2.elements() {
                assert_eq!(p_h(&t, &kl, y, x), kl.h(y, x));
                if y != x {
                    assert!(t.pm(y, x).is_zero());
                }
            }
            assert_eq!(pcan_in_standard(&t, &kl, x), kl.kl_element(x));
        }
    }

    #[test]
    fn rejects_non_self_dual_entry() {
        let b2 = CoxeterSystem::of_type("B2").unwrap();
        let kl = KLTable::compute(&b2);
        let json = r#"{"type": "B2", "p": 2, "entries": [
            {"x": [1,2,1], "terms": [{"y": [1,2,1], "coeff": [[0,1]]}, {"y": [1], "coeff": [[1,1]]}]}]}"#;
        let err = PCanTable::from_json_str(json, &b2, &kl, Provenance::External("test".into()), true).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("self-dual") && msg.contains("(y,x)=(1,121)"), "{msg}");
    }

    #[test]
    fn rejects_bad_descents_and_words() {
        let b2 = CoxeterSystem::of_type("B2").unwrap();
        let kl = KLTable::compute(&b2);
        let json = r#"{"type": "B2", "p": 2, "entries": [
            {"x": [1,2,1], "terms": [{"y": [2], "coeff": [[0,1]]}]}]}"#;
        let err = PCanTable::from_json_str(json, &b2, &kl, Provenance::External("t".into()), true).unwrap_err();
        assert!(err.to_string().contains("descent"));
        let json = r#"{"type": "B2", "p": 2, "entries": [{"x": [1,1], "terms": []}]}"#;
        assert!(matches!(
            PCanTable::from_json_str(json, &b2, &kl, Provenance::External("t".into()), true),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn structure_coefficient_descent_case() {
        let a2 = CoxeterSystem::of_type("A2").unwrap();
        let kl = KLTable::compute(&a2);
        let t = PCanTable::identity_table();
        let s = a2.generator(0);
        let r = structure_coefficients(&a2, &t, &kl, s, 0, Side::Right);
        assert_eq!(r, HeckeElt::monomial(Basis::PCanonical(0), s, LaurentPoly::v_plus_v_inv()));
        let r = structure_coefficients(&a2, &t, &kl, s, 1, Side::Right);
        assert_eq!(r, HeckeElt::basis_element(Basis::PCanonical(0), a2.parse_digits("12").unwrap()));
    }

    #[test]
    fn automorphism_of_a3_preserves_kl_table() {
        let a3 = CoxeterSystem::of_type("A3").unwrap();
        let t = PCanTable::identity_table();
        assert_eq!(t.apply_automorphism(&a3, &[2, 1, 0]).unwrap(), t);
        assert_eq!(t.apply_automorphism(&a3, &[0, 1, 2]).unwrap(), t);
        let c3 = CoxeterSystem::of_type("C3").unwrap();
        assert!(t.apply_automorphism(&c3, &[2, 1, 0]).is_err());
    }

    #[test]
    fn parabolic_factorization_at_zero() {
        let b3 = CoxeterSystem::of_type("B3").unwrap();
        let kl = KLTable::compute(&b3);
        let t = PCanTable::identity_table();
        for mask in [0b011, 0b101, 0b110] {
            let r = verify_parabolic_factorization(&b3, &t, &kl, GenSet(mask));
            assert!(r.is_pass(), "{r}");
        }
    }
}
