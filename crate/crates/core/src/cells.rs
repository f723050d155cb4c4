//! Left, right and two-sided p-cells, their preorders and related checks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::coxeter::{CoxeterSystem, Elt, GenSet, Side, IDENTITY};
use crate::hecke::KLTable;
use crate::laurent::LaurentPoly;
use crate::pcanonical::{structure_coefficients, PCanTable};
use crate::report::{Report, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellSide {
    Left,
    Right,
    TwoSided,
}

impl fmt::Display for CellSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellSide::Left => "left",
            CellSide::Right => "right",
            CellSide::TwoSided => "two-sided",
        })
    }
}

impl From<Side> for CellSide {
    fn from(side: Side) -> Self {
        match side {
            Side::Left => CellSide::Left,
            Side::Right => CellSide::Right,
        }
    }
}

/// Adjacency of the elementary relations: `graph[y]` contains `x` whenever
/// `pB_x` appears in `pB_y C_s` (right) or `C_s pB_y` (left) for some `s`,
/// so that `x <= y`. Self-loops from descents are included.
pub fn elementary_relations(w: &CoxeterSystem, table: &PCanTable, kl: &KLTable, side: Side) -> Vec<BTreeSet<Elt>> {
    w.elements()
        .map(|y| {
            let mut out = BTreeSet::new();
            for s in 0..w.rank() {
                if w.descents(y, side).contains(s) {
                    out.insert(y);
                    continue;
                }
                out.extend(structure_coefficients(w, table, kl, y, s, side).support());
            }
            out
        })
        .collect()
}

/// A partition of `W` into cells together with the cell preorder.
#[derive(Debug, Clone)]
pub struct CellPartition {
    pub side: CellSide,
    pub prime: u32,
    /// Cells ordered by their smallest element id (hence by minimal length).
    pub cells: Vec<Vec<Elt>>,
    pub cell_of: Vec<usize>,
    /// `reach[i][j]`: cell `j` lies below or equal to cell `i`.
    reach: Vec<Vec<bool>>,
}

impl CellPartition {
    /// Builds the partition from the strongly connected components of `graph`
    /// (where `graph[y]` lists the `x <= y`).
    pub fn from_relations(side: CellSide, prime: u32, graph: &[BTreeSet<Elt>]) -> Self {
        let n = graph.len();
        let mut g = DiGraph::<Elt, ()>::with_capacity(n, 0);
        let nodes: Vec<_> = (0..n).map(|x| g.add_node(x)).collect();
        for (y, targets) in graph.iter().enumerate() {
            for &x in targets {
                if x != y {
                    g.add_edge(nodes[y], nodes[x], ());
                }
            }
        }
        let mut cells: Vec<Vec<Elt>> = tarjan_scc(&g)
            .into_iter()
            .map(|comp| {
                let mut c: Vec<Elt> = comp.into_iter().map(|i| g[i]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        cells.sort_by_key(|c| c[0]);
        let mut cell_of = vec![0; n];
        for (i, c) in cells.iter().enumerate() {
            for &x in c {
                cell_of[x] = i;
            }
        }
        let k = cells.len();
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
        for (y, targets) in graph.iter().enumerate() {
            for &x in targets {
                if cell_of[x] != cell_of[y] {
                    succ[cell_of[y]].insert(cell_of[x]);
                }
            }
        }
        let mut reach = vec![vec![false; k]; k];
        for i in 0..k {
            let mut queue = VecDeque::from([i]);
            reach[i][i] = true;
            while let Some(a) = queue.pop_front() {
                for &b in &succ[a] {
                    if !reach[i][b] {
                        reach[i][b] = true;
                        queue.push_back(b);
                    }
                }
            }
        }
        CellPartition { side, prime, cells, cell_of, reach }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, x: Elt) -> &[Elt] {
        &self.cells[self.cell_of[x]]
    }

    /// `x <= y` in the cell preorder.
    pub fn leq(&self, x: Elt, y: Elt) -> bool {
        self.reach[self.cell_of[y]][self.cell_of[x]]
    }

    pub fn same_cell(&self, x: Elt, y: Elt) -> bool {
        self.cell_of[x] == self.cell_of[y]
    }

    /// Cell `j` lies below or equal to cell `i`.
    pub fn cell_leq(&self, j: usize, i: usize) -> bool {
        self.reach[i][j]
    }

    /// Hasse diagram of the condensation: `(i, j)` when cell `j` is covered by cell `i`.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let k = self.len();
        let mut edges = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i == j || !self.reach[i][j] {
                    continue;
                }
                let covered = (0..k).any(|m| m != i && m != j && self.reach[i][m] && self.reach[m][j]);
                if !covered {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// Index of the cell of each element of `set`, deduplicated and sorted.
    pub fn cells_meeting(&self, set: &[Elt]) -> Vec<usize> {
        let s: BTreeSet<usize> = set.iter().map(|&x| self.cell_of[x]).collect();
        s.into_iter().collect()
    }

    /// Whether every cell of `self` lies inside a cell of `coarser`.
    pub fn refines(&self, coarser: &CellPartition) -> bool {
        self.cells.iter().all(|c| c.iter().all(|&x| coarser.same_cell(x, c[0])))
    }

    pub fn to_json(&self, w: &CoxeterSystem) -> serde_json::Value {
        let cells: Vec<Vec<Vec<usize>>> =
            self.cells.iter().map(|c| c.iter().map(|&x| w.labels(x)).collect()).collect();
        json!({
            "side": self.side,
            "p": self.prime,
            "cells": cells,
            "edges": self.hasse_edges(),
        })
    }

    pub fn to_dot(&self, w: &CoxeterSystem) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph cells {{");
        let _ = writeln!(out, "  rankdir=TB;");
        for (i, c) in self.cells.iter().enumerate() {
            let label: Vec<String> = c.iter().map(|&x| w.digits(x)).collect();
            let _ = writeln!(out, "  c{i} [label=\"{i}: {{{}}}\"];", label.join(","));
        }
        for (i, j) in self.hasse_edges() {
            let _ = writeln!(out, "  c{i} -> c{j};");
        }
        out.push_str("}\n");
        out
    }

    /// Human-readable listing, one cell per line.
    pub fn to_text(&self, w: &CoxeterSystem) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} cells (p = {}): {}", self.side, self.prime, self.len());
        for (i, c) in self.cells.iter().enumerate() {
            let label: Vec<String> = c.iter().map(|&x| w.digits(x)).collect();
            let _ = writeln!(out, "  C{i} = {{{}}}", label.join(", "));
        }
        let edges: Vec<String> = self.hasse_edges().iter().map(|(i, j)| format!("C{i}-C{j}")).collect();
        let _ = writeln!(out, "Hasse: {}", edges.join(" "));
        out
    }
}

/// Cells of the requested side. Two-sided cells use the union of the left
/// and right elementary relations.
pub fn compute_cells(w: &CoxeterSystem, table: &PCanTable, kl: &KLTable, side: CellSide) -> CellPartition {
    let graph = match side {
        CellSide::Left => elementary_relations(w, table, kl, Side::Left),
        CellSide::Right => elementary_relations(w, table, kl, Side::Right),
        CellSide::TwoSided => {
            let mut g = elementary_relations(w, table, kl, Side::Left);
            for (y, r) in elementary_relations(w, table, kl, Side::Right).into_iter().enumerate() {
                g[y].extend(r);
            }
            g
        }
    };
    CellPartition::from_relations(side, table.prime(), &graph)
}

/// `y <= x` in a right preorder forces `D_L(x) ⊆ D_L(y)` (mirror for left).
/// Within a cell the descent sets therefore agree.
pub fn check_descent_invariant(w: &CoxeterSystem, partition: &CellPartition) -> Report {
    let mut report = Report::new();
    let desc_side = match partition.side {
        CellSide::Right => Side::Left,
        CellSide::Left => Side::Right,
        CellSide::TwoSided => return report,
    };
    for x in w.elements() {
        for y in w.elements() {
            if partition.leq(y, x) {
                let (dx, dy) = (w.descents(x, desc_side), w.descents(y, desc_side));
                report.check(dx.is_subset(dy), || {
                    Violation::new(
                        "descent-invariant",
                        vec![w.digits(y), w.digits(x)],
                        format!("y <= x but D({}) = {dx:?} is not inside D({}) = {dy:?}", w.digits(x), w.digits(y)),
                    )
                });
            }
        }
    }
    report
}

/// `x <=_L y` iff `x^-1 <=_R y^-1`.
pub fn inverse_duality_check(w: &CoxeterSystem, left: &CellPartition, right: &CellPartition) -> Report {
    let mut report = Report::new();
    for x in w.elements() {
        for y in w.elements() {
            let (a, b) = (left.leq(x, y), right.leq(w.inverse(x), w.inverse(y)));
            report.check(a == b, || {
                Violation::new(
                    "inverse-duality",
                    vec![w.digits(x), w.digits(y)],
                    format!("left relation {a} but right relation at inverses {b}"),
                )
            });
        }
    }
    report
}

/// `{e}` is a cell on its own.
pub fn check_identity_cell(partition: &CellPartition) -> Report {
    let mut report = Report::new();
    report.check(partition.cell(IDENTITY) == [IDENTITY], || {
        Violation::new("identity-cell", vec!["e".into()], format!("cell of e has {} elements", partition.cell(IDENTITY).len()))
    });
    report
}

/// Components of `subset` under "differ by a simple reflection on the right".
pub fn right_connected_components(w: &CoxeterSystem, subset: &[Elt]) -> Vec<Vec<Elt>> {
    let members: BTreeSet<Elt> = subset.iter().copied().collect();
    let mut seen: BTreeSet<Elt> = BTreeSet::new();
    let mut out = Vec::new();
    for &start in &members {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for s in 0..w.rank() {
                let xs = w.right_mul(x, s);
                if members.contains(&xs) && seen.insert(xs) {
                    comp.push(xs);
                    queue.push_back(xs);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Elements of `subset` with no smaller right neighbour `xs < x` inside the subset.
pub fn right_minimal_elements(w: &CoxeterSystem, subset: &[Elt]) -> Vec<Elt> {
    let members: BTreeSet<Elt> = subset.iter().copied().collect();
    members
        .iter()
        .copied()
        .filter(|&x| !w.right_descents(x).iter().any(|s| members.contains(&w.right_mul(x, s))))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CellCriterion {
    pub cell: usize,
    pub right_minimal: Vec<String>,
    /// The hypothesis holds for this cell.
    pub hypothesis: bool,
    /// The hypothesis holds for every KL right cell below or equal to this one,
    /// so this cell is a union of right p-cells.
    pub decomposes: bool,
    /// Pairs `(y, x)` with `x` right-minimal, `pm_{y,x} != 0` and `y` not `<=_R x` at `p = 0`.
    pub witnesses: Vec<(String, String)>,
}

/// For each KL right cell `C`: do all right-minimal `x` in `C` and all `y`
/// with `pm_{y,x} != 0` satisfy `y <=_R x` in the KL preorder?
pub fn decomposition_criterion(w: &CoxeterSystem, table: &PCanTable, kl_right: &CellPartition) -> Vec<CellCriterion> {
    let mut out: Vec<CellCriterion> = kl_right
        .cells
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            let minimal = right_minimal_elements(w, cell);
            let mut witnesses = Vec::new();
            for &x in &minimal {
                for (y, _) in table.column(x) {
                    if !kl_right.leq(*y, x) {
                        witnesses.push((w.digits(*y), w.digits(x)));
                    }
                }
            }
            CellCriterion {
                cell: i,
                right_minimal: minimal.iter().map(|&x| w.digits(x)).collect(),
                hypothesis: witnesses.is_empty(),
                decomposes: false,
                witnesses,
            }
        })
        .collect();
    let hyp: Vec<bool> = out.iter().map(|c| c.hypothesis).collect();
    for (i, c) in out.iter_mut().enumerate() {
        c.decomposes = (0..hyp.len()).filter(|&j| kl_right.cell_leq(j, i)).all(|j| hyp[j]);
    }
    out
}

/// A coloured W-graph on a set of vertices of a p-cell module.
///
/// `descents[i]` is `I_x` (left descents for a left module, right descents for
/// a right module); `edges[(i, j)][s]` is the coefficient of `pB_y` in
/// `C_s pB_x` (resp. `pB_x C_s`) where `x = vertices[i]`, `y = vertices[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredWGraph {
    pub side: Side,
    pub rank: usize,
    pub vertices: Vec<Elt>,
    pub descents: Vec<GenSet>,
    pub edges: BTreeMap<(usize, usize), BTreeMap<usize, LaurentPoly>>,
}

impl ColouredWGraph {
    /// The graph of the subquotient spanned by `vertices`: structure
    /// coefficients landing outside the vertex set are dropped.
    pub fn from_vertices(w: &CoxeterSystem, table: &PCanTable, kl: &KLTable, vertices: &[Elt], side: Side) -> Self {
        let mut vertices = vertices.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let index: BTreeMap<Elt, usize> = vertices.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let descents: Vec<GenSet> = vertices.iter().map(|&x| w.descents(x, side)).collect();
        let mut edges: BTreeMap<(usize, usize), BTreeMap<usize, LaurentPoly>> = BTreeMap::new();
        for (i, &x) in vertices.iter().enumerate() {
            for s in 0..w.rank() {
                if descents[i].contains(s) {
                    continue;
                }
                for (y, c) in structure_coefficients(w, table, kl, x, s, side).iter() {
                    if let Some(&j) = index.get(&y) {
                        edges.entry((i, j)).or_default().insert(s, c.clone());
                    }
                }
            }
        }
        ColouredWGraph { side, rank: w.rank(), vertices, descents, edges }
    }

    pub fn label(&self, x: Elt, y: Elt, s: usize) -> LaurentPoly {
        let (Some(i), Some(j)) = (self.position(x), self.position(y)) else {
            return LaurentPoly::zero();
        };
        self.edges.get(&(i, j)).and_then(|m| m.get(&s)).cloned().unwrap_or_default()
    }

    pub fn position(&self, x: Elt) -> Option<usize> {
        self.vertices.binary_search(&x).ok()
    }

    /// Matrix of `tau_s`; column `i` holds `tau_s(vertices[i])`.
    pub fn tau_matrix(&self, s: usize) -> Matrix {
        let n = self.vertices.len();
        let mut m = Matrix::zero(n);
        for i in 0..n {
            if self.descents[i].contains(s) {
                m.0[i][i] = LaurentPoly::v_plus_v_inv();
            }
        }
        for (&(i, j), labels) in &self.edges {
            if let Some(c) = labels.get(&s) {
                if self.descents[j].contains(s) && !self.descents[i].contains(s) {
                    m.0[j][i] += c;
                }
            }
        }
        m
    }

    /// Checks `tau_s^2 = (v + v^-1) tau_s` and, with `T_s = tau_s - v`, the braid relations.
    pub fn verify_relations(&self, w: &CoxeterSystem) -> Report {
        let mut report = Report::new();
        let n = self.vertices.len();
        let taus: Vec<Matrix> = (0..self.rank).map(|s| self.tau_matrix(s)).collect();
        let vid = Matrix::scalar(n, LaurentPoly::v());
        let ts: Vec<Matrix> = taus.iter().map(|t| t.sub(&vid)).collect();
        for s in 0..self.rank {
            let lhs = taus[s].mul(&taus[s]);
            let rhs = taus[s].scale(&LaurentPoly::v_plus_v_inv());
            report.check(lhs == rhs, || {
                Violation::new("quadratic", vec![format!("s={}", s + 1)], "tau_s^2 != (v+v^-1) tau_s")
            });
        }
        for s in 0..self.rank {
            for t in s + 1..self.rank {
                let Some(m) = w.m(s, t) else { continue };
                let alt = |a: usize, b: usize| {
                    (0..m as usize).fold(Matrix::scalar(n, LaurentPoly::one()), |acc, k| {
                        acc.mul(&ts[if k % 2 == 0 { a } else { b }])
                    })
                };
                report.check(alt(s, t) == alt(t, s), || {
                    Violation::new("braid", vec![format!("s={}", s + 1), format!("t={}", t + 1)], format!("braid relation of length {m} fails"))
                });
            }
        }
        report
    }

    /// Whether `f` maps this graph onto `other`, preserving descent sets and labels.
    pub fn is_isomorphic_via(&self, other: &ColouredWGraph, f: impl Fn(Elt) -> Elt) -> bool {
        if self.vertices.len() != other.vertices.len() {
            return false;
        }
        let mut map = Vec::with_capacity(self.vertices.len());
        for (i, &x) in self.vertices.iter().enumerate() {
            match other.position(f(x)) {
                Some(j) if other.descents[j] == self.descents[i] => map.push(j),
                _ => return false,
            }
        }
        let mapped: BTreeMap<(usize, usize), BTreeMap<usize, LaurentPoly>> =
            self.edges.iter().map(|(&(i, j), l)| ((map[i], map[j]), l.clone())).collect();
        mapped == other.edges
    }

    pub fn to_dot(&self, w: &CoxeterSystem) -> String {
        let mut out = String::from("digraph wgraph {\n");
        for (i, &x) in self.vertices.iter().enumerate() {
            let desc: Vec<String> = self.descents[i].iter().map(|s| (s + 1).to_string()).collect();
            let _ = writeln!(out, "  v{i} [label=\"{} {{{}}}\"];", w.digits(x), desc.join(","));
        }
        for (&(i, j), labels) in &self.edges {
            for (s, c) in labels {
                if i == j {
                    continue;
                }
                if c.is_one() {
                    let _ = writeln!(out, "  v{i} -> v{j} [color=\"{}\"];", colour(*s));
                } else {
                    let _ = writeln!(out, "  v{i} -> v{j} [color=\"{}\", label=\"{c}\"];", colour(*s));
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Edges as `(x, y, s, label)` with digit strings and 1-based `s`.
    pub fn edge_list(&self, w: &CoxeterSystem) -> Vec<(String, String, usize, String)> {
        self.edges
            .iter()
            .flat_map(|(&(i, j), labels)| {
                labels.iter().map(move |(s, c)| {
                    (w.digits(self.vertices[i]), w.digits(self.vertices[j]), s + 1, c.to_string())
                })
            })
            .collect()
    }
}

fn colour(s: usize) -> &'static str {
    ["red", "blue", "gold", "green", "purple", "orange", "brown", "gray"][s % 8]
}

/// Extracts the W-graph of one cell of a left or right partition.
pub fn extract_wgraph(
    w: &CoxeterSystem,
    partition: &CellPartition,
    cell: usize,
    table: &PCanTable,
    kl: &KLTable,
) -> Option<ColouredWGraph> {
    let side = match partition.side {
        CellSide::Left => Side::Left,
        CellSide::Right => Side::Right,
        CellSide::TwoSided => return None,
    };
    Some(ColouredWGraph::from_vertices(w, table, kl, &partition.cells[cell], side))
}

/// Square matrix over `Z[v, v^-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix(pub Vec<Vec<LaurentPoly>>);

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix(vec![vec![LaurentPoly::zero(); n]; n])
    }

    pub fn scalar(n: usize, c: LaurentPoly) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.0[i][i] = c.clone();
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.0.len();
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                if self.0[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !other.0[k][j].is_zero() {
                        let prod = &self.0[i][k] * &other.0[k][j];
                        out.0[i][j] += &prod;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect(),
        )
    }

    pub fn scale(&self, c: &LaurentPoly) -> Matrix {
        Matrix(self.0.iter().map(|row| row.iter().map(|x| c * x).collect()).collect())
    }
}

/// Outcome of the parabolic non-decomposition propagation check.
#[derive(Debug, Clone, Serialize)]
pub struct PropagationReport {
    /// Some right p-cell of the parabolic subgroup meets two of its KL right cells.
    pub parabolic_nondecomposition: bool,
    /// Some right p-cell of `W` meets two KL right cells of `W`.
    pub ambient_nondecomposition: bool,
    pub report: Report,
}

/// Checks the containments behind the propagation of non-decomposition from a
/// standard parabolic subgroup `W_I` to `W`:
/// p-cells and KL cells of `W_I` embed into cells of `W`, `C X` is a union of
/// KL right cells of `W` (`X` the minimal representatives of `W_I \ W`), and a
/// witness of non-decomposition in `W_I` lifts to one in `W`.
pub fn propagate_nondecomposition(
    w: &CoxeterSystem,
    table: &PCanTable,
    kl: &KLTable,
    subset: GenSet,
) -> crate::Result<PropagationReport> {
    let mut report = Report::new();
    let (sub, embed, sub_table) = table.restrict_to_parabolic(w, subset)?;
    let sub_kl = KLTable::compute(&sub);
    let zero = PCanTable::identity_table();
    let h_kl = compute_cells(&sub, &zero, &sub_kl, CellSide::Right);
    let h_p = compute_cells(&sub, &sub_table, &sub_kl, CellSide::Right);
    let w_kl = compute_cells(w, &zero, kl, CellSide::Right);
    let w_p = compute_cells(w, table, kl, CellSide::Right);

    for (name, small, big) in [("kl", &h_kl, &w_kl), ("p", &h_p, &w_p)] {
        for cell in &small.cells {
            let image: Vec<Elt> = cell.iter().map(|&x| embed[x]).collect();
            let meets = big.cells_meeting(&image);
            report.check(meets.len() == 1, || {
                Violation::new(
                    "parabolic-embedding",
                    image.iter().map(|&x| w.digits(x)).collect(),
                    format!("{name} cell of the parabolic subgroup meets {} cells of W", meets.len()),
                )
            });
        }
    }

    let reps = w.minimal_coset_representatives(subset, Side::Left);
    for cell in &h_kl.cells {
        let induced: BTreeSet<Elt> =
            cell.iter().flat_map(|&c| reps.iter().map(move |&x| (c, x))).map(|(c, x)| w.mul(embed[c], x)).collect();
        for &z in &induced {
            let ok = w_kl.cell(z).iter().all(|u| induced.contains(u));
            report.check(ok, || {
                Violation::new("induction", vec![w.digits(z)], "C X is not a union of KL right cells of W")
            });
        }
    }

    let split = |p: &CellPartition, k: &CellPartition| p.cells.iter().any(|c| k.cells_meeting(c).len() > 1);
    let parabolic_nondecomposition = split(&h_p, &h_kl);
    let ambient_nondecomposition = split(&w_p, &w_kl);
    if parabolic_nondecomposition {
        report.check(ambient_nondecomposition, || {
            Violation::new("propagation", vec![], "non-decomposition in the parabolic subgroup did not lift to W")
        });
    }
    Ok(PropagationReport { parabolic_nondecomposition, ambient_nondecomposition, report })
}

/// For `y, z` in `W_I`: `z <= y` in `W_I` iff `xz <= xy` in `W` for all `x` in `W^I`.
pub fn verify_parabolic_compatibility(
    w: &CoxeterSystem,
    table: &PCanTable,
    kl: &KLTable,
    subset: GenSet,
) -> crate::Result<Report> {
    let mut report = Report::new();
    let (sub, embed, sub_table) = table.restrict_to_parabolic(w, subset)?;
    let sub_kl = KLTable::compute(&sub);
    let small = compute_cells(&sub, &sub_table, &sub_kl, CellSide::Right);
    let big = compute_cells(w, table, kl, CellSide::Right);
    let reps = w.minimal_coset_representatives(subset, Side::Right);
    for y in sub.elements() {
        for z in sub.elements() {
            let rel = small.leq(z, y);
            let mut all = true;
            for &x in &reps {
                let lifted = big.leq(w.mul(x, embed[z]), w.mul(x, embed[y]));
                all &= lifted;
                if rel {
                    report.check(lifted, || {
                        Violation::new(
                            "parabolic-compatibility",
                            vec![w.digits(x), w.digits(embed[y]), w.digits(embed[z])],
                            "z <= y in W_I but not xz <= xy in W",
                        )
                    });
                }
            }
            report.check(rel || !all, || {
                Violation::new(
                    "parabolic-compatibility",
                    vec![w.digits(embed[y]), w.digits(embed[z])],
                    "xz <= xy in W for every x in W^I but not z <= y in W_I",
                )
            });
        }
    }
    Ok(report)
}

/// Every KL right cell is right-connected (tested, not assumed).
pub fn right_connectedness_report(w: &CoxeterSystem, partition: &CellPartition) -> Report {
    let mut report = Report::new();
    for cell in &partition.cells {
        let comps = right_connected_components(w, cell);
        report.check(comps.len() == 1, || {
            Violation::new(
                "right-connected",
                cell.iter().map(|&x| w.digits(x)).collect(),
                format!("{} components", comps.len()),
            )
        });
    }
    report
}
