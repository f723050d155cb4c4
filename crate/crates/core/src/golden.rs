//! Published cell tables shipped as JSON and their comparison with computed partitions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cells::{CellPartition, CellSide, ColouredWGraph};
use crate::coxeter::{CoxeterSystem, Elt, Side};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::report::{Report, Violation};

pub const B2: &str = include_str!("../fixtures/golden/b2.json");
pub const G2: &str = include_str!("../fixtures/golden/g2.json");
pub const C3: &str = include_str!("../fixtures/golden/c3.json");
/// The 2-canonical table of C3.
pub const C3_P2_TABLE: &str = include_str!("../fixtures/c3_p2.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenFile {
    #[serde(rename = "type")]
    pub type_label: String,
    #[serde(default)]
    pub description: String,
    pub partitions: Vec<GoldenPartition>,
    #[serde(default)]
    pub wgraph: Option<GoldenWGraph>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenPartition {
    pub name: String,
    pub side: CellSide,
    pub p: u32,
    pub cells: Vec<NamedCell>,
    /// `[upper, lower]` cell names.
    pub hasse: Vec<[String; 2]>,
    /// Groups of right or left cells forming one two-sided cell each.
    #[serde(default)]
    pub heights: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedCell {
    pub name: String,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenWGraph {
    pub side: Side,
    pub p: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<GoldenEdge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenEdge {
    pub from: String,
    pub to: String,
    /// 1-based generator.
    pub s: usize,
    pub label: String,
}

impl GoldenFile {
    pub fn parse(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    /// `"b2"`, `"g2"` or `"c3"`.
    pub fn named(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "b2" => Self::parse(B2),
            "g2" => Self::parse(G2),
            "c3" => Self::parse(C3),
            other => Err(Error::Schema(format!("no golden table named `{other}`"))),
        }
    }

    pub fn partition(&self, name: &str) -> Result<&GoldenPartition> {
        self.partitions
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::Schema(format!("golden {} has no partition `{name}`", self.type_label)))
    }
}

/// Parses a reduced word of a golden file; `"w0"` is the longest element.
pub fn parse_word(w: &CoxeterSystem, word: &str) -> Result<Elt> {
    if word == "w0" {
        return Ok(w.longest());
    }
    let x = w.parse_digits(word)?;
    let len = if word == "e" { 0 } else { word.len() };
    if w.length(x) != len {
        return Err(Error::InvalidWord(format!("`{word}` is not reduced")));
    }
    Ok(x)
}

impl GoldenPartition {
    /// Cell name to element set.
    pub fn resolve(&self, w: &CoxeterSystem) -> Result<BTreeMap<String, BTreeSet<Elt>>> {
        let mut out = BTreeMap::new();
        for cell in &self.cells {
            let set = cell.elements.iter().map(|x| parse_word(w, x)).collect::<Result<BTreeSet<_>>>()?;
            if set.len() != cell.elements.len() {
                return Err(Error::Schema(format!("cell {} lists an element twice", cell.name)));
            }
            if out.insert(cell.name.clone(), set).is_some() {
                return Err(Error::Schema(format!("duplicate cell name {}", cell.name)));
            }
        }
        Ok(out)
    }

    /// Compares cells, Hasse diagram and, when heights are given, the
    /// two-sided grouping with computed partitions.
    pub fn compare(
        &self,
        w: &CoxeterSystem,
        computed: &CellPartition,
        two_sided: Option<&CellPartition>,
    ) -> Result<Report> {
        let mut report = Report::new();
        let tag = |check: &str| format!("{}:{check}", self.name);
        let named = self.resolve(w)?;
        let fmt_set = |s: &BTreeSet<Elt>| s.iter().map(|&x| w.digits(x)).collect::<Vec<_>>();

        report.check(computed.side == self.side && computed.prime == self.p, || {
            Violation::new(
                &tag("header"),
                vec![],
                format!("computed {} cells at p = {}, expected {} at p = {}", computed.side, computed.prime, self.side, self.p),
            )
        });

        let mut index_of: BTreeMap<&str, usize> = BTreeMap::new();
        for (name, set) in &named {
            let first = *set.iter().next().expect("cells are non-empty");
            let i = computed.cell_of[first];
            let got: BTreeSet<Elt> = computed.cells[i].iter().copied().collect();
            report.check(&got == set, || {
                Violation::new(&tag("cell"), vec![name.clone()], format!("expected {:?}, computed {:?}", fmt_set(set), fmt_set(&got)))
            });
            index_of.insert(name, i);
        }
        let covered: usize = named.values().map(BTreeSet::len).sum();
        report.check(computed.len() == named.len() && covered == w.len(), || {
            Violation::new(
                &tag("cell-count"),
                vec![],
                format!("expected {} cells covering {covered} elements, computed {} cells of {}", named.len(), computed.len(), w.len()),
            )
        });

        let expected: BTreeSet<(usize, usize)> = self
            .hasse
            .iter()
            .map(|[a, b]| {
                let look = |n: &String| index_of.get(n.as_str()).copied().ok_or_else(|| Error::Schema(format!("unknown cell {n}")));
                Ok((look(a)?, look(b)?))
            })
            .collect::<Result<_>>()?;
        let got: BTreeSet<(usize, usize)> = computed.hasse_edges().into_iter().collect();
        let name_of = |i: usize| {
            index_of.iter().find(|(_, &j)| j == i).map(|(n, _)| n.to_string()).unwrap_or_else(|| format!("#{i}"))
        };
        for &(a, b) in expected.difference(&got) {
            report.push(Violation::new(&tag("hasse-missing"), vec![name_of(a), name_of(b)], "printed edge not computed"));
        }
        for &(a, b) in got.difference(&expected) {
            report.push(Violation::new(&tag("hasse-extra"), vec![name_of(a), name_of(b)], "computed edge not printed"));
        }
        report.checks += expected.intersection(&got).count();

        if !self.heights.is_empty() {
            let two = two_sided.ok_or_else(|| Error::Schema(format!("{} has heights but no two-sided partition was given", self.name)))?;
            for group in &self.heights {
                let union: BTreeSet<Elt> = group
                    .iter()
                    .map(|n| named.get(n).ok_or_else(|| Error::Schema(format!("unknown cell {n}"))))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .flatten()
                    .copied()
                    .collect();
                let first = *union.iter().next().expect("non-empty");
                let got: BTreeSet<Elt> = two.cell(first).iter().copied().collect();
                report.check(got == union, || {
                    Violation::new(&tag("two-sided"), group.clone(), format!("two-sided cell is {:?}", fmt_set(&got)))
                });
            }
        }
        Ok(report)
    }
}

impl GoldenWGraph {
    pub fn vertex_elements(&self, w: &CoxeterSystem) -> Result<Vec<Elt>> {
        self.vertices.iter().map(|x| parse_word(w, x)).collect()
    }

    /// The graph as written, with descent sets taken from the group.
    pub fn to_graph(&self, w: &CoxeterSystem) -> Result<ColouredWGraph> {
        let mut vertices = self.vertex_elements(w)?;
        vertices.sort_unstable();
        vertices.dedup();
        let index: BTreeMap<Elt, usize> = vertices.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let position = |word: &str| -> Result<usize> {
            let x = parse_word(w, word)?;
            index.get(&x).copied().ok_or_else(|| Error::Schema(format!("edge endpoint {word} is not a vertex")))
        };
        let mut edges: BTreeMap<(usize, usize), BTreeMap<usize, LaurentPoly>> = BTreeMap::new();
        for e in &self.edges {
            if e.s == 0 || e.s > w.rank() {
                return Err(Error::Schema(format!("generator {} out of range", e.s)));
            }
            let label: LaurentPoly = e.label.parse().map_err(|err| Error::Schema(format!("{err}")))?;
            edges.entry((position(&e.from)?, position(&e.to)?)).or_default().insert(e.s - 1, label);
        }
        Ok(ColouredWGraph {
            side: self.side,
            rank: w.rank(),
            descents: vertices.iter().map(|&x| w.descents(x, self.side)).collect(),
            vertices,
            edges,
        })
    }

    /// Edge by edge comparison; labels are compared in their printed form.
    pub fn compare(&self, w: &CoxeterSystem, graph: &ColouredWGraph) -> Result<Report> {
        let mut report = Report::new();
        let mut expected = BTreeSet::new();
        for e in &self.edges {
            expected.insert((parse_word(w, &e.from)?, parse_word(w, &e.to)?, e.s, e.label.clone()));
        }
        let mut got = BTreeSet::new();
        for (&(i, j), labels) in &graph.edges {
            for (s, c) in labels {
                got.insert((graph.vertices[i], graph.vertices[j], s + 1, c.to_string()));
            }
        }
        let show = |(x, y, s, l): &(Elt, Elt, usize, String)| vec![w.digits(*x), w.digits(*y), format!("s={s}"), l.clone()];
        for e in expected.difference(&got) {
            report.push(Violation::new("wgraph-missing", show(e), "printed edge not computed"));
        }
        for e in got.difference(&expected) {
            report.push(Violation::new("wgraph-extra", show(e), "computed edge not printed"));
        }
        report.checks += expected.intersection(&got).count();
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_files_parse() {
        for name in ["b2", "g2", "c3"] {
            let g = GoldenFile::named(name).unwrap();
            let w = CoxeterSystem::of_type(&g.type_label).unwrap();
            for p in &g.partitions {
                let cells = p.resolve(&w).unwrap();
                let total: usize = cells.values().map(BTreeSet::len).sum();
                assert_eq!(total, w.len(), "{name} {}", p.name);
            }
        }
    }
}
