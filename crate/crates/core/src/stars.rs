//! Dihedral strings, star operations and the relation checkers built on them.
//!
//! Strings are right strings unless stated otherwise; left versions go through
//! the inverse map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::cells::{CellPartition, ColouredWGraph};
use crate::coxeter::{CoxeterSystem, Elt, GenSet, Side};
use crate::error::{Error, Result};
use crate::hecke::{kl_multiply, KLTable};
use crate::laurent::LaurentPoly;
use crate::pcanonical::{structure_coefficients, PCanTable};
use crate::report::{Report, Violation};

/// The right coset `w~ <r,t>` split into its minimum, its two strings and its maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StringDecomposition {
    pub r: usize,
    pub t: usize,
    pub m: u32,
    pub coset_min: Elt,
    /// `w~ r, w~ rt, ...` (length `m - 1`).
    pub string_r: Vec<Elt>,
    /// `w~ t, w~ tr, ...` (length `m - 1`).
    pub string_t: Vec<Elt>,
    pub coset_max: Elt,
}

impl StringDecomposition {
    /// The string through `x` and the 1-based position of `x` in it.
    pub fn locate(&self, x: Elt) -> Option<(&[Elt], usize)> {
        [&self.string_r, &self.string_t]
            .into_iter()
            .find_map(|s| s.iter().position(|&y| y == x).map(|k| (s.as_slice(), k + 1)))
    }
}

fn pair_set(r: usize, t: usize) -> GenSet {
    let mut g = GenSet::singleton(r);
    g.insert(t);
    g
}

fn finite_m(w: &CoxeterSystem, r: usize, t: usize) -> Result<u32> {
    if r == t || r >= w.rank() || t >= w.rank() {
        return Err(Error::UnsupportedPair { r: r + 1, t: t + 1, m: "n/a".into() });
    }
    w.m(r, t).ok_or(Error::UnsupportedPair { r: r + 1, t: t + 1, m: "infinity".into() })
}

fn star_m(w: &CoxeterSystem, r: usize, t: usize) -> Result<u32> {
    let m = finite_m(w, r, t)?;
    if m < 3 {
        return Err(Error::UnsupportedPair { r: r + 1, t: t + 1, m: m.to_string() });
    }
    Ok(m)
}

/// `x` lies in `D_R(r,t)` (or `D_L(r,t)`): exactly one of `r, t` is a descent.
pub fn in_string_domain(w: &CoxeterSystem, x: Elt, r: usize, t: usize, side: Side) -> bool {
    w.descents(x, side).intersection(pair_set(r, t)).len() == 1
}

/// The elements of `D_R(r,t)`.
pub fn string_domain(w: &CoxeterSystem, r: usize, t: usize) -> Vec<Elt> {
    w.elements().filter(|&x| in_string_domain(w, x, r, t, Side::Right)).collect()
}

fn alternate(w: &CoxeterSystem, start: Elt, a: usize, b: usize, len: usize) -> Vec<Elt> {
    let mut out = Vec::with_capacity(len);
    let mut x = start;
    for k in 0..len {
        x = w.right_mul(x, if k % 2 == 0 { a } else { b });
        out.push(x);
    }
    out
}

fn decomposition(w: &CoxeterSystem, coset_min: Elt, r: usize, t: usize, m: u32) -> StringDecomposition {
    let len = m as usize - 1;
    let string_r = alternate(w, coset_min, r, t, len);
    let string_t = alternate(w, coset_min, t, r, len);
    let last = *string_r.last().unwrap_or(&coset_min);
    let coset_max = w.right_mul(last, if len % 2 == 0 { r } else { t });
    StringDecomposition { r, t, m, coset_min, string_r, string_t, coset_max }
}

/// The decomposition of the right `<r,t>`-coset of `x` and the position of `x`
/// in its string.
pub fn string_of(w: &CoxeterSystem, x: Elt, r: usize, t: usize) -> Result<(StringDecomposition, usize)> {
    let m = finite_m(w, r, t)?;
    if !in_string_domain(w, x, r, t, Side::Right) {
        return Err(Error::NotInStringDomain { element: w.digits(x), side: "R", r: r + 1, t: t + 1 });
    }
    let (min, _) = w.coset_factorize(x, pair_set(r, t));
    let dec = decomposition(w, min, r, t, m);
    let k = dec.locate(x).map(|(_, k)| k).expect("x lies in a string of its coset");
    Ok((dec, k))
}

/// All right `<r,t>`-strings, two per coset, ordered by coset minimum.
pub fn all_strings(w: &CoxeterSystem, r: usize, t: usize) -> Result<Vec<Vec<Elt>>> {
    let m = finite_m(w, r, t)?;
    let mut out = Vec::new();
    for min in w.minimal_coset_representatives(pair_set(r, t), Side::Right) {
        let dec = decomposition(w, min, r, t, m);
        out.push(dec.string_r);
        out.push(dec.string_t);
    }
    Ok(out)
}

/// Right star operation: position `k` goes to position `m - k` of the same string.
pub fn star_right(w: &CoxeterSystem, x: Elt, r: usize, t: usize) -> Result<Elt> {
    let m = star_m(w, r, t)?;
    let (dec, k) = string_of(w, x, r, t)?;
    let (string, _) = dec.locate(x).expect("located above");
    Ok(string[m as usize - k - 1])
}

/// Left star operation `*x = ((x^-1)*)^-1`.
pub fn star_left(w: &CoxeterSystem, x: Elt, r: usize, t: usize) -> Result<Elt> {
    star_m(w, r, t)?;
    if !in_string_domain(w, x, r, t, Side::Left) {
        return Err(Error::NotInStringDomain { element: w.digits(x), side: "L", r: r + 1, t: t + 1 });
    }
    Ok(w.inverse(star_right(w, w.inverse(x), r, t)?))
}

/// `{xr, xt} ∩ D_R(r,t)` as a two-element multiset.
pub fn t_neighbors(w: &CoxeterSystem, x: Elt, r: usize, t: usize) -> Result<[Elt; 2]> {
    finite_m(w, r, t)?;
    if !in_string_domain(w, x, r, t, Side::Right) {
        return Err(Error::NotInStringDomain { element: w.digits(x), side: "R", r: r + 1, t: t + 1 });
    }
    let ns: Vec<Elt> = [w.right_mul(x, r), w.right_mul(x, t)]
        .into_iter()
        .filter(|&y| in_string_domain(w, y, r, t, Side::Right))
        .collect();
    Ok(match ns.as_slice() {
        [a] => [*a, *a],
        [a, b] => [(*a).min(*b), (*a).max(*b)],
        _ => unreachable!("a string element has one or two neighbours"),
    })
}

/// Pairs `r < t` with `3 <= m(r,t) < infinity`.
pub fn star_pairs(w: &CoxeterSystem) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..w.rank() {
        for t in r + 1..w.rank() {
            if matches!(w.m(r, t), Some(m) if m >= 3) {
                out.push((r, t));
            }
        }
    }
    out
}

/// Smallest admissible prime is `bound + 1` (or `p = 0`).
pub fn prime_bound(m: u32) -> Option<u32> {
    match m {
        3 => Some(1),
        4 => Some(2),
        6 => Some(3),
        _ => None,
    }
}

/// Refuses primes at or below the bound for `m(r,t)`.
pub fn require_prime_bound(w: &CoxeterSystem, p: u32, r: usize, t: usize) -> Result<u32> {
    let m = star_m(w, r, t)?;
    let bound = prime_bound(m).ok_or(Error::UnsupportedPair { r: r + 1, t: t + 1, m: m.to_string() })?;
    if p != 0 && p <= bound {
        return Err(Error::PrimeBelowBound { p, m, bound });
    }
    Ok(m)
}

/// A chain of equal sums; each sum lists `(j, i)` for `a_{j,i}` (1-based).
type Chain = Vec<Vec<(usize, usize)>>;

/// The relation systems among `a_{j,i}` for two strings of length `m - 1`.
pub fn relation_system(m: u32) -> Vec<Chain> {
    let c = |sums: &[&[(usize, usize)]]| -> Chain { sums.iter().map(|s| s.to_vec()).collect() };
    match m {
        3 => vec![c(&[&[(1, 1)], &[(2, 2)]]), c(&[&[(2, 1)], &[(1, 2)]])],
        4 => vec![
            c(&[&[(1, 1)], &[(3, 3)]]),
            c(&[&[(2, 1)], &[(1, 2)], &[(3, 2)], &[(2, 3)]]),
            c(&[&[(3, 1)], &[(1, 3)]]),
            c(&[&[(2, 2)], &[(1, 1), (3, 1)]]),
        ],
        6 => vec![
            c(&[&[(1, 1)], &[(5, 5)]]),
            c(&[&[(2, 1)], &[(1, 2)], &[(5, 4)], &[(4, 5)]]),
            c(&[&[(3, 1)], &[(1, 3)], &[(5, 3)], &[(3, 5)]]),
            c(&[&[(4, 1)], &[(1, 4)], &[(5, 2)], &[(2, 5)]]),
            c(&[&[(5, 1)], &[(1, 5)]]),
            c(&[&[(2, 2)], &[(4, 4)], &[(1, 1), (3, 1)]]),
            c(&[&[(3, 2)], &[(2, 3)], &[(4, 3)], &[(3, 4)], &[(2, 1), (4, 1)]]),
            c(&[&[(4, 2)], &[(2, 4)], &[(3, 1), (5, 1)]]),
            c(&[&[(3, 3)], &[(1, 1), (3, 1), (5, 1)]]),
        ],
        _ => Vec::new(),
    }
}

/// Evaluates every chain on `a` (indexed `a[j-1][i-1]`) and returns the
/// first failing chain as text.
fn failing_chains(a: &[Vec<LaurentPoly>], system: &[Chain]) -> Vec<String> {
    let eval = |sum: &[(usize, usize)]| {
        sum.iter().fold(LaurentPoly::zero(), |acc, &(j, i)| &acc + &a[j - 1][i - 1])
    };
    let show = |sum: &[(usize, usize)]| {
        sum.iter().map(|(j, i)| format!("a{j}{i}")).collect::<Vec<_>>().join("+")
    };
    let mut out = Vec::new();
    for chain in system {
        let first = eval(&chain[0]);
        for sum in &chain[1..] {
            let val = eval(sum);
            if val != first {
                out.push(format!("{} = {first} but {} = {val}", show(&chain[0]), show(sum)));
            }
        }
    }
    out
}

/// Element -> (string index, 1-based position).
fn string_index(strings: &[Vec<Elt>]) -> BTreeMap<Elt, (usize, usize)> {
    strings
        .iter()
        .enumerate()
        .flat_map(|(n, s)| s.iter().enumerate().map(move |(k, &x)| (x, (n, k + 1))))
        .collect()
}

fn string_label(w: &CoxeterSystem, s: &[Elt]) -> String {
    let d: Vec<String> = s.iter().map(|&x| w.digits(x)).collect();
    format!("[{}]", d.join(","))
}

/// Coefficient of `C_z` in `pB_x C_t` is `[zr in D_R] pm_{zr,x} + [zt in D_R] pm_{zt,x}`
/// for `x, z` in `D_R(r,t)` with `r` in `D_R(x)` (and with `r`, `t` swapped).
pub fn check_coefficient_sliding(
    w: &CoxeterSystem,
    table: &PCanTable,
    kl: &KLTable,
    r: usize,
    t: usize,
) -> Result<Report> {
    require_prime_bound(w, table.prime(), r, t)?;
    let mut report = Report::new();
    let dom = |x: Elt| in_string_domain(w, x, r, t, Side::Right);
    for (a, b) in [(r, t), (t, r)] {
        for x in string_domain(w, r, t) {
            if !w.right_descents(x).contains(a) {
                continue;
            }
            let prod = kl_multiply(w, kl, &table.pcan_in_kl(x), b, Side::Right)?;
            let mut candidates: BTreeSet<Elt> = prod.support().collect();
            for y in std::iter::once(x).chain(table.column(x).iter().map(|(y, _)| *y)) {
                candidates.insert(w.right_mul(y, a));
                candidates.insert(w.right_mul(y, b));
            }
            for z in candidates.into_iter().filter(|&z| dom(z)) {
                let mut expected = LaurentPoly::zero();
                for s in [a, b] {
                    let zs = w.right_mul(z, s);
                    if dom(zs) {
                        expected += &table.pm(zs, x);
                    }
                }
                let got = prod.coefficient(z);
                report.check(got == expected, || {
                    Violation::new(
                        "coefficient-sliding",
                        vec![w.digits(x), w.digits(z)],
                        format!("coefficient of C_z in pB_x C_{} is {got}, expected {expected}", b + 1),
                    )
                    .with_pair(r, t)
                });
            }
        }
    }
    Ok(report)
}

/// The base-change relations between every pair of strings, plus
/// `pm_{z,x} = pm_{z*,x*}`.
pub fn check_base_change_relations(w: &CoxeterSystem, table: &PCanTable, r: usize, t: usize) -> Result<Report> {
    let m = require_prime_bound(w, table.prime(), r, t)?;
    let n = m as usize - 1;
    let system = relation_system(m);
    let strings = all_strings(w, r, t)?;
    let index = string_index(&strings);
    let mut report = Report::new();
    for sx in &strings {
        let mut partners = BTreeSet::new();
        for &x in sx {
            partners.extend(index.get(&x).map(|&(k, _)| k));
            for (y, _) in table.column(x) {
                partners.extend(index.get(y).map(|&(k, _)| k));
            }
        }
        for &k in &partners {
            let sz = &strings[k];
            let a: Vec<Vec<LaurentPoly>> =
                (0..n).map(|j| (0..n).map(|i| table.pm(sz[j], sx[i])).collect()).collect();
            check_matrix(w, &mut report, "base-change", "star-base-change", &a, &system, sx, sz, r, t);
        }
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn check_matrix(
    w: &CoxeterSystem,
    report: &mut Report,
    name: &str,
    star_name: &str,
    a: &[Vec<LaurentPoly>],
    system: &[Chain],
    sx: &[Elt],
    sz: &[Elt],
    r: usize,
    t: usize,
) {
    let n = a.len();
    let fails = failing_chains(a, system);
    report.check(fails.is_empty(), || {
        Violation::new(name, vec![string_label(w, sx), string_label(w, sz)], fails.join("; ")).with_pair(r, t)
    });
    for j in 0..n {
        for i in 0..n {
            let (lhs, rhs) = (&a[j][i], &a[n - 1 - j][n - 1 - i]);
            report.check(lhs == rhs, || {
                Violation::new(
                    star_name,
                    vec![w.digits(sz[j]), w.digits(sx[i])],
                    format!("{lhs} != {rhs} at the star images"),
                )
                .with_pair(r, t)
            });
        }
    }
}

/// The same relation systems on the left structure coefficients
/// `pmu^{z_j}_{s,x_i}` for `s` not in `D_L(x_1)`, plus the star corollary.
pub fn check_structure_coefficient_relations(
    w: &CoxeterSystem,
    table: &PCanTable,
    kl: &KLTable,
    r: usize,
    t: usize,
) -> Result<Report> {
    let m = require_prime_bound(w, table.prime(), r, t)?;
    let n = m as usize - 1;
    let system = relation_system(m);
    let strings = all_strings(w, r, t)?;
    let index = string_index(&strings);
    let mut report = Report::new();
    for sx in &strings {
        for s in 0..w.rank() {
            if w.left_descents(sx[0]).contains(s) {
                continue;
            }
            for &x in sx {
                report.check(!w.left_descents(x).contains(s), || {
                    Violation::new(
                        "string-left-descents",
                        vec![string_label(w, sx)],
                        format!("s={} is a left descent of {} but not of the first element", s + 1, w.digits(x)),
                    )
                    .with_pair(r, t)
                });
            }
            let prods: Vec<_> =
                sx.iter().map(|&x| structure_coefficients(w, table, kl, x, s, Side::Left)).collect();
            let partners: BTreeSet<usize> =
                prods.iter().flat_map(|p| p.support()).filter_map(|z| index.get(&z).map(|&(k, _)| k)).collect();
            for &k in &partners {
                let sz = &strings[k];
                let a: Vec<Vec<LaurentPoly>> =
                    (0..n).map(|j| (0..n).map(|i| prods[i].coefficient(sz[j])).collect()).collect();
                check_matrix(w, &mut report, "structure-coefficients", "star-structure-coefficients", &a, &system, sx, sz, r, t);
            }
        }
    }
    Ok(report)
}

/// `pmu^z_{x,t}` (coefficient of `pB_z` in `pB_x C_t`) vanishes for
/// `x, z` in `D_R(r,t)`, `xt > x`, unless `z` neighbours `x` in its string.
pub fn check_string_vanishing(
    w: &CoxeterSystem,
    table: &PCanTable,
    kl: &KLTable,
    r: usize,
    t: usize,
) -> Result<Report> {
    require_prime_bound(w, table.prime(), r, t)?;
    let mut report = Report::new();
    for (_, b) in [(r, t), (t, r)] {
        for x in string_domain(w, r, t) {
            if w.right_descents(x).contains(b) {
                continue;
            }
            let nbrs = t_neighbors(w, x, r, t)?;
            let prod = structure_coefficients(w, table, kl, x, b, Side::Right);
            for (z, c) in prod.iter() {
                if !in_string_domain(w, z, r, t, Side::Right) {
                    continue;
                }
                report.check(nbrs.contains(&z), || {
                    Violation::new(
                        "string-vanishing",
                        vec![w.digits(x), w.digits(z)],
                        format!("pB_z occurs with coefficient {c} in pB_x C_{}", b + 1),
                    )
                    .with_pair(r, t)
                });
            }
        }
    }
    Ok(report)
}

/// The possible shapes of the relations `x_i <= y_j` between two strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StringRelation {
    Empty,
    Trivial,
    Permuted,
    Neighbour(usize),
    PermutedNeighbour(usize),
    ZigZag,
    Nonstandard,
}

impl fmt::Display for StringRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StringRelation::Empty => write!(f, "empty"),
            StringRelation::Trivial => write!(f, "T"),
            StringRelation::Permuted => write!(f, "P"),
            StringRelation::Neighbour(k) => write!(f, "N{k}"),
            StringRelation::PermutedNeighbour(l) => write!(f, "PN{l}"),
            StringRelation::ZigZag => write!(f, "Z"),
            StringRelation::Nonstandard => write!(f, "nonstandard"),
        }
    }
}

/// `(1, m-1)(2, m-2)` on `{1, ..., m-1}`.
fn pi(m: usize, i: usize) -> usize {
    let swap = |a: usize, b: usize, x: usize| if x == a { b } else if x == b { a } else { x };
    swap(1, m - 1, swap(2, m - 2, i))
}

/// `T^k(i)` on positions `1..=m-1`.
fn t_power(m: usize, k: usize, i: usize) -> BTreeSet<usize> {
    let mut cur = BTreeSet::from([i]);
    for _ in 0..k {
        cur = cur.iter().flat_map(|&a| [a.wrapping_sub(1), a + 1]).filter(|&b| b >= 1 && b < m).collect();
    }
    cur
}

/// Candidate relation patterns for `m`, in the order they are tried.
pub fn relation_patterns(m: usize) -> Vec<(StringRelation, BTreeSet<(usize, usize)>)> {
    let n = m - 1;
    let mut out = vec![
        (StringRelation::Empty, BTreeSet::new()),
        (StringRelation::Trivial, (1..=n).map(|i| (i, i)).collect()),
        (StringRelation::Permuted, (1..=n).map(|i| (i, pi(m, i))).collect()),
    ];
    for k in 1..=m.saturating_sub(2) {
        let set = (1..=n).flat_map(|i| t_power(m, k, i).into_iter().map(move |j| (i, j))).collect();
        out.push((StringRelation::Neighbour(k), set));
    }
    for l in 1..=m.saturating_sub(4) {
        let set = (1..=n).flat_map(|i| t_power(m, l, i).into_iter().map(move |j| (i, pi(m, j)))).collect();
        out.push((StringRelation::PermutedNeighbour(l), set));
    }
    let zig = (2..=m.saturating_sub(2)).flat_map(|i| [(i - 1, i + 1), (i, i), (i + 1, i - 1)]).collect();
    out.push((StringRelation::ZigZag, zig));
    out
}

/// Classifies `{(i, j) : x_i <= y_j}`.
pub fn classify_string_relation(leq: impl Fn(Elt, Elt) -> bool, sx: &[Elt], sy: &[Elt]) -> StringRelation {
    let m = sx.len() + 1;
    let rel: BTreeSet<(usize, usize)> = (1..m)
        .flat_map(|i| (1..m).map(move |j| (i, j)))
        .filter(|&(i, j)| leq(sx[i - 1], sy[j - 1]))
        .collect();
    relation_patterns(m)
        .into_iter()
        .find(|(_, pat)| *pat == rel)
        .map(|(label, _)| label)
        .unwrap_or(StringRelation::Nonstandard)
}

/// Classifies all ordered pairs of `<r,t>`-strings under the left preorder
/// and reports nonstandard pairs.
pub fn string_relation_report(
    w: &CoxeterSystem,
    left: &CellPartition,
    r: usize,
    t: usize,
) -> Result<(Report, BTreeMap<String, usize>)> {
    require_prime_bound(w, left.prime, r, t)?;
    let strings = all_strings(w, r, t)?;
    let mut counts = BTreeMap::new();
    let mut report = Report::new();
    for sx in &strings {
        for sy in &strings {
            let label = classify_string_relation(|a, b| left.leq(a, b), sx, sy);
            *counts.entry(label.to_string()).or_insert(0) += 1;
            report.check(label != StringRelation::Nonstandard, || {
                Violation::new(
                    "string-relation",
                    vec![string_label(w, sx), string_label(w, sy)],
                    "left relations between the strings match no standard case",
                )
                .with_pair(r, t)
            });
        }
    }
    Ok((report, counts))
}

/// Star compatibility of a left and a right partition for every admissible pair:
/// strings lie in one right cell, `Γ*` is a left cell, `x <= y` iff `x* <= y*`,
/// and `Γ~` is a union of at most `m - 2` left cells.
pub fn star_closure_check(w: &CoxeterSystem, left: &CellPartition, right: &CellPartition) -> Result<Report> {
    let mut report = Report::new();
    for (r, t) in star_pairs(w) {
        let m = require_prime_bound(w, left.prime, r, t)? as usize;
        require_prime_bound(w, right.prime, r, t)?;
        let strings = all_strings(w, r, t)?;
        for s in &strings {
            let n = right.cells_meeting(s).len();
            report.check(n == 1, || {
                Violation::new("string-in-right-cell", vec![string_label(w, s)], format!("string meets {n} right cells"))
                    .with_pair(r, t)
            });
        }
        let index = string_index(&strings);
        let dom = string_domain(w, r, t);
        let star: BTreeMap<Elt, Elt> =
            dom.iter().map(|&x| Ok((x, star_right(w, x, r, t)?))).collect::<Result<_>>()?;

        for cell in &left.cells {
            if !cell.iter().all(|x| star.contains_key(x)) {
                continue;
            }
            let image: BTreeSet<Elt> = cell.iter().map(|x| star[x]).collect();
            let target: BTreeSet<Elt> = left.cell(*image.first().expect("cells are nonempty")).iter().copied().collect();
            report.check(image == target, || {
                Violation::new(
                    "star-left-cell",
                    cell.iter().map(|&x| w.digits(x)).collect(),
                    "the star image of the left cell is not a left cell",
                )
                .with_pair(r, t)
            });

            let members: BTreeSet<Elt> = cell.iter().copied().collect();
            let hull: BTreeSet<Elt> = cell
                .iter()
                .flat_map(|x| strings[index[x].0].iter().copied())
                .filter(|x| !members.contains(x))
                .collect();
            let hull_vec: Vec<Elt> = hull.iter().copied().collect();
            let meets = left.cells_meeting(&hull_vec);
            let union_ok = meets.iter().all(|&c| left.cells[c].iter().all(|x| hull.contains(x)));
            report.check(union_ok && meets.len() <= m - 2, || {
                Violation::new(
                    "star-complement",
                    cell.iter().map(|&x| w.digits(x)).collect(),
                    format!("complement in the strings meets {} left cells (union of cells: {union_ok})", meets.len()),
                )
                .with_pair(r, t)
            });
        }

        for &x in &dom {
            for &y in &dom {
                let (a, b) = (left.leq(x, y), left.leq(star[&x], star[&y]));
                report.check(a == b, || {
                    Violation::new(
                        "star-preorder",
                        vec![w.digits(x), w.digits(y)],
                        format!("x <=_L y is {a} but x* <=_L y* is {b}"),
                    )
                    .with_pair(r, t)
                });
            }
        }
    }
    Ok(report)
}

/// For each left cell inside `D_R(r,t)`, its coloured W-graph is isomorphic
/// to that of its star image via the star map.
pub fn check_wgraph_star_isomorphism(
    w: &CoxeterSystem,
    table: &PCanTable,
    kl: &KLTable,
    left: &CellPartition,
) -> Result<Report> {
    let mut report = Report::new();
    for (r, t) in star_pairs(w) {
        require_prime_bound(w, table.prime(), r, t)?;
        for cell in &left.cells {
            if !cell.iter().all(|&x| in_string_domain(w, x, r, t, Side::Right)) {
                continue;
            }
            let image: Vec<Elt> = cell.iter().map(|&x| star_right(w, x, r, t)).collect::<Result<_>>()?;
            let g = ColouredWGraph::from_vertices(w, table, kl, cell, Side::Left);
            let h = ColouredWGraph::from_vertices(w, table, kl, &image, Side::Left);
            let ok = g.is_isomorphic_via(&h, |x| star_right(w, x, r, t).expect("x lies in the domain"));
            report.check(ok, || {
                Violation::new(
                    "wgraph-star",
                    cell.iter().map(|&x| w.digits(x)).collect(),
                    "W-graphs of the cell and its star image differ",
                )
                .with_pair(r, t)
            });
        }
    }
    Ok(report)
}

/// Classes of a generalized tau invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauPartition {
    /// Classes sorted by smallest element.
    pub classes: Vec<Vec<Elt>>,
    pub class_of: Vec<usize>,
    /// First `n` with `≈_n = ≈_{n+1}`.
    pub stabilized_at: usize,
}

impl TauPartition {
    fn from_keys<K: Ord>(keys: Vec<K>, stabilized_at: usize) -> Self {
        let mut groups: BTreeMap<&K, Vec<Elt>> = BTreeMap::new();
        for (x, k) in keys.iter().enumerate() {
            groups.entry(k).or_default().push(x);
        }
        let mut classes: Vec<Vec<Elt>> = groups.into_values().collect();
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![0; keys.len()];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = i;
            }
        }
        TauPartition { classes, class_of, stabilized_at }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn same_class(&self, x: Elt, y: Elt) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    /// Every cell of `partition` lies inside one class.
    pub fn is_refined_by(&self, partition: &CellPartition) -> bool {
        partition.cells.iter().all(|c| c.iter().all(|&x| self.same_class(x, c[0])))
    }

    /// Same classes as the cells of `partition`.
    pub fn equals_partition(&self, partition: &CellPartition) -> bool {
        let mut a = self.classes.clone();
        let mut b = partition.cells.clone();
        a.sort();
        b.sort();
        a == b
    }

    pub fn to_json(&self, w: &CoxeterSystem) -> serde_json::Value {
        let classes: Vec<Vec<Vec<usize>>> =
            self.classes.iter().map(|c| c.iter().map(|&x| w.labels(x)).collect()).collect();
        json!({ "classes": classes, "stabilized_at": self.stabilized_at })
    }

    pub fn to_text(&self, w: &CoxeterSystem) -> String {
        let mut out = format!("{} classes (stable after {} steps)\n", self.len(), self.stabilized_at);
        for (i, c) in self.classes.iter().enumerate() {
            let d: Vec<String> = c.iter().map(|&x| w.digits(x)).collect();
            out.push_str(&format!("  T{i} = {{{}}}\n", d.join(", ")));
        }
        out
    }
}

/// Refines `≈_0` (equal right descent sets) by `step` until it stabilizes.
fn refine<F>(w: &CoxeterSystem, step: F) -> TauPartition
where
    F: Fn(&[usize], Elt) -> Vec<Option<Vec<usize>>>,
{
    let start: Vec<u32> = w.elements().map(|x| w.right_descents(x).iter().fold(0u32, |a, s| a | 1 << s)).collect();
    let mut part = TauPartition::from_keys(start, 0);
    loop {
        let keys: Vec<(usize, Vec<Option<Vec<usize>>>)> =
            w.elements().map(|x| (part.class_of[x], step(&part.class_of, x))).collect();
        let next = TauPartition::from_keys(keys, part.stabilized_at + 1);
        if next.len() == part.len() {
            return part;
        }
        part = next;
    }
}

/// Generalized tau invariant: pairs with `m in {3, 4}`, comparing the classes of
/// the string neighbours as unordered pairs.
pub fn tau_partition(w: &CoxeterSystem) -> TauPartition {
    let pairs: Vec<(usize, usize)> =
        star_pairs(w).into_iter().filter(|&(r, t)| matches!(w.m(r, t), Some(3 | 4))).collect();
    tau_partition_for_pairs(w, &pairs)
}

/// [`tau_partition`] using only the given pairs, e.g. those meeting a p-bound.
pub fn tau_partition_for_pairs(w: &CoxeterSystem, pairs: &[(usize, usize)]) -> TauPartition {
    refine(w, |class_of, x| {
        pairs
            .iter()
            .map(|&(r, t)| {
                t_neighbors(w, x, r, t).ok().map(|[a, b]| {
                    let mut v = vec![class_of[a], class_of[b]];
                    v.sort_unstable();
                    v
                })
            })
            .collect()
    })
}

/// The tilde variant: refines by the class of the right star image for every
/// pair with `3 <= m < infinity`.
pub fn tau_tilde_partition(w: &CoxeterSystem) -> TauPartition {
    let pairs = star_pairs(w);
    refine(w, |class_of, x| {
        pairs.iter().map(|&(r, t)| star_right(w, x, r, t).ok().map(|y| vec![class_of[y]])).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{compute_cells, CellSide};

    fn el(w: &CoxeterSystem, d: &str) -> Elt {
        w.parse_digits(d).unwrap()
    }

    #[test]
    fn strings_in_a2() {
        let w = CoxeterSystem::of_type("A2").unwrap();
        let (dec, k) = string_of(&w, el(&w, "1"), 0, 1).unwrap();
        assert_eq!(dec.coset_min, 0);
        assert_eq!(dec.string_r, vec![el(&w, "1"), el(&w, "12")]);
        assert_eq!(k, 1);
        assert_eq!(string_of(&w, el(&w, "12"), 0, 1).unwrap().1, 2);
        assert_eq!(dec.coset_max, w.longest());
        assert!(matches!(string_of(&w, 0, 0, 1), Err(Error::NotInStringDomain { .. })));
    }

    #[test]
    fn stars_in_rank_two() {
        let a2 = CoxeterSystem::of_type("A2").unwrap();
        assert_eq!(star_right(&a2, el(&a2, "1"), 0, 1).unwrap(), el(&a2, "12"));
        assert_eq!(star_right(&a2, el(&a2, "12"), 0, 1).unwrap(), el(&a2, "1"));
        assert_eq!(star_left(&a2, el(&a2, "1"), 0, 1).unwrap(), el(&a2, "21"));
        let b2 = CoxeterSystem::of_type("B2").unwrap();
        let (dec, k) = string_of(&b2, el(&b2, "121"), 0, 1).unwrap();
        assert_eq!(dec.locate(el(&b2, "121")).unwrap().0, &[el(&b2, "1"), el(&b2, "12"), el(&b2, "121")]);
        assert_eq!(k, 3);
        assert_eq!(star_right(&b2, el(&b2, "12"), 0, 1).unwrap(), el(&b2, "12"));
        assert_eq!(star_left(&b2, el(&b2, "121"), 0, 1).unwrap(), el(&b2, "1"));
        assert_eq!(t_neighbors(&b2, el(&b2, "12"), 0, 1).unwrap(), [el(&b2, "1"), el(&b2, "121")]);
        assert_eq!(t_neighbors(&b2, el(&b2, "1"), 0, 1).unwrap(), [el(&b2, "12"); 2]);
    }

    #[test]
    fn a1_times_a1_has_no_star() {
        let w = CoxeterSystem::of_type("A3").unwrap();
        assert!(matches!(star_right(&w, el(&w, "1"), 0, 2), Err(Error::UnsupportedPair { .. })));
    }

    #[test]
    fn prime_bound_is_enforced() {
        let w = CoxeterSystem::of_type("B2").unwrap();
        assert!(require_prime_bound(&w, 2, 0, 1).is_err());
        assert!(require_prime_bound(&w, 3, 0, 1).is_ok());
        assert!(require_prime_bound(&w, 0, 0, 1).is_ok());
    }

    #[test]
    fn patterns_collapse_for_small_m() {
        let p3 = relation_patterns(3);
        assert_eq!(p3[1].1, p3[2].1);
        assert!(p3.last().unwrap().1.is_empty());
        let p4 = relation_patterns(4);
        let perm = &p4.iter().find(|(l, _)| *l == StringRelation::Permuted).unwrap().1;
        let zig = &p4.iter().find(|(l, _)| *l == StringRelation::ZigZag).unwrap().1;
        assert_eq!(perm, zig);
        assert_eq!(pi(6, 1), 5);
        assert_eq!(pi(6, 3), 3);
        assert_eq!(pi(3, 1), 1);
    }

    #[test]
    fn tau_on_a2() {
        let w = CoxeterSystem::of_type("A2").unwrap();
        let tau = tau_partition(&w);
        let kl = KLTable::compute(&w);
        let left = compute_cells(&w, &PCanTable::identity_table(), &kl, CellSide::Left);
        assert!(tau.equals_partition(&left));
        assert_eq!(tau.len(), 4);
        assert_eq!(tau_tilde_partition(&w).classes, tau.classes);
    }
}
