//! Symmetric groups: one-line notation, Knuth moves, Robinson-Schensted and
//! the tableau description of cells.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cells::CellPartition;
use crate::coxeter::{CoxeterSystem, Elt};
use crate::error::{Error, Result};
use crate::report::{Report, Violation};

/// A permutation in one-line notation `w(1) w(2) ... w(n)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &a in &images {
            if a == 0 || a > n || seen[a] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection of 1..{n}")));
            }
            seen[a] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &a) in self.0.iter().enumerate() {
            inv[a - 1] = i + 1;
        }
        Permutation(inv)
    }

    pub fn is_involution(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &a)| self.0[a - 1] == i + 1)
    }

    /// `w s_i` for `1 <= i < n`: swaps positions `i` and `i + 1`.
    pub fn right_mul(&self, i: usize) -> Self {
        let mut out = self.0.clone();
        out.swap(i - 1, i);
        Permutation(out)
    }

    /// Right descents `i` (1-based): `w(i) > w(i + 1)`.
    pub fn right_descents(&self) -> Vec<usize> {
        (1..self.n()).filter(|&i| self.0[i - 1] > self.0[i]).collect()
    }

    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n + 1];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for a in 1..=n {
                if !used[a] {
                    used[a] = true;
                    cur.push(a);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[a] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }

    /// The permutation of an element of a type `A_{n-1}` system: generator
    /// `i - 1` is the transposition of positions `i, i + 1`.
    pub fn from_element(w: &CoxeterSystem, x: Elt) -> Self {
        w.reduced_word(x).iter().fold(Permutation::identity(w.rank() + 1), |p, &s| p.right_mul(s + 1))
    }

    /// Inverse of [`Permutation::from_element`].
    pub fn to_element(&self, w: &CoxeterSystem) -> Result<Elt> {
        if self.n() != w.rank() + 1 {
            return Err(Error::InvalidPermutation(format!("expected {} letters", w.rank() + 1)));
        }
        let mut p = self.clone();
        let mut word = Vec::new();
        while let Some(&i) = p.right_descents().first() {
            p = p.right_mul(i);
            word.push(i - 1);
        }
        word.reverse();
        w.word_to_element(&word)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// `"312"`, or comma/space separated for `n >= 10`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parts: Vec<&str> = if s.contains([',', ' ']) {
            s.split([',', ' ']).filter(|p| !p.is_empty()).collect()
        } else {
            s.split("").filter(|p| !p.is_empty()).collect()
        };
        let images = parts
            .iter()
            .map(|p| p.parse::<usize>().map_err(|_| Error::InvalidPermutation(format!("bad entry `{p}` in `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        if images.is_empty() {
            return Err(Error::InvalidPermutation("empty".into()));
        }
        Permutation::new(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() >= 10 { "," } else { "" };
        let s: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", s.join(sep))
    }
}

/// Weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition(pub Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Column lengths.
    pub fn conjugate(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition((0..width).map(|j| self.0.iter().filter(|&&r| r > j).count()).collect())
    }

    /// Number of standard tableaux via the hook length formula.
    pub fn hook_length_count(&self) -> u128 {
        let conj = self.conjugate();
        let mut hooks: u128 = 1;
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row {
                hooks *= (row - j + conj.0[j] - i - 1) as u128;
            }
        }
        (1..=self.size() as u128).product::<u128>() / hooks
    }

    /// Number of standard tableaux by removing the largest entry from every corner.
    pub fn count_tableaux_brute_force(&self) -> u128 {
        fn rec(parts: &mut Vec<usize>, memo: &mut BTreeMap<Vec<usize>, u128>) -> u128 {
            if parts.iter().all(|&p| p == 0) {
                return 1;
            }
            if let Some(&c) = memo.get(parts) {
                return c;
            }
            let mut total = 0;
            for i in 0..parts.len() {
                let corner = parts[i] > 0 && parts.get(i + 1).is_none_or(|&next| next < parts[i]);
                if corner {
                    parts[i] -= 1;
                    total += rec(parts, memo);
                    parts[i] += 1;
                }
            }
            memo.insert(parts.clone(), total);
            total
        }
        rec(&mut self.0.clone(), &mut BTreeMap::new())
    }

    /// All standard tableaux of this shape.
    pub fn standard_tableaux(&self) -> Vec<StandardTableau> {
        let n = self.size();
        let mut out = Vec::new();
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); self.0.len()];
        fn rec(shape: &[usize], k: usize, n: usize, rows: &mut Vec<Vec<usize>>, out: &mut Vec<StandardTableau>) {
            if k > n {
                out.push(StandardTableau { rows: rows.clone() });
                return;
            }
            for i in 0..shape.len() {
                let len = rows[i].len();
                let fits = len < shape[i] && (i == 0 || rows[i - 1].len() > len);
                if fits {
                    rows[i].push(k);
                    rec(shape, k + 1, n, rows, out);
                    rows[i].pop();
                }
            }
        }
        rec(&self.0, 1, n, &mut rows, &mut out);
        out
    }

    /// All partitions of `n`, largest first.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Rows of a standard Young tableau.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StandardTableau {
    pub rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let t = StandardTableau { rows };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let n: usize = self.rows.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        for (i, row) in self.rows.iter().enumerate() {
            if row.is_empty() || (i > 0 && row.len() > self.rows[i - 1].len()) {
                return Err(Error::InvalidTableau(format!("row lengths of {:?} are not a partition", self.rows)));
            }
            for (j, &a) in row.iter().enumerate() {
                if a == 0 || a > n || seen[a] {
                    return Err(Error::InvalidTableau(format!("entries of {:?} are not 1..{n}", self.rows)));
                }
                seen[a] = true;
                if (j > 0 && row[j - 1] >= a) || (i > 0 && self.rows[i - 1][j] >= a) {
                    return Err(Error::InvalidTableau(format!("{:?} is not increasing at ({i},{j})", self.rows)));
                }
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> Partition {
        Partition(self.rows.iter().map(Vec::len).collect())
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", rows.join(" / "))
    }
}

/// Row insertion of `w(1), ..., w(n)`; `Q` records where each box was added.
pub fn rs_correspondence(w: &Permutation) -> (StandardTableau, StandardTableau) {
    let mut p: Vec<Vec<usize>> = Vec::new();
    let mut q: Vec<Vec<usize>> = Vec::new();
    for (k, &a) in w.images().iter().enumerate() {
        let mut x = a;
        let mut row = 0;
        loop {
            if row == p.len() {
                p.push(vec![x]);
                q.push(vec![k + 1]);
                break;
            }
            match p[row].iter().position(|&b| b > x) {
                Some(j) => {
                    x = std::mem::replace(&mut p[row][j], x);
                    row += 1;
                }
                None => {
                    p[row].push(x);
                    q[row].push(k + 1);
                    break;
                }
            }
        }
    }
    (StandardTableau { rows: p }, StandardTableau { rows: q })
}

/// The permutation with the given `P` and `Q` symbols.
pub fn inverse_rs(p: &StandardTableau, q: &StandardTableau) -> Result<Permutation> {
    p.validate()?;
    q.validate()?;
    if p.shape() != q.shape() {
        return Err(Error::ShapeMismatch(format!("P has shape {} but Q has shape {}", p.shape(), q.shape())));
    }
    let n = p.size();
    let mut p = p.rows.clone();
    let mut q = q.rows.clone();
    let mut images = vec![0; n];
    for k in (1..=n).rev() {
        let row = q.iter().position(|r| r.last() == Some(&k)).expect("k sits at a corner of Q");
        q[row].pop();
        let mut x = p[row].pop().expect("same shape");
        for r in (0..row).rev() {
            let j = p[r].iter().rposition(|&b| b < x).expect("row above has a smaller entry");
            x = std::mem::replace(&mut p[r][j], x);
        }
        images[k - 1] = x;
        if q[row].is_empty() {
            q.remove(row);
            p.remove(row);
        }
    }
    Permutation::new(images)
}

/// Columns filled left to right, each top to bottom with consecutive integers.
pub fn column_superstandard(shape: &Partition) -> StandardTableau {
    let mut rows: Vec<Vec<usize>> = shape.0.iter().map(|&r| Vec::with_capacity(r)).collect();
    let mut k = 1;
    for len in shape.conjugate().0 {
        for row in rows.iter_mut().take(len) {
            row.push(k);
            k += 1;
        }
    }
    StandardTableau { rows }
}

/// Elementary Knuth move `K_i` on positions `i - 1, i, i + 1`, if it applies.
pub fn knuth_move(w: &Permutation, i: usize) -> Option<Permutation> {
    if i < 2 || i >= w.n() {
        return None;
    }
    let (a, b, c) = (i - 2, i - 1, i);
    let (p, q, r) = (w.0[a], w.0[b], w.0[c]);
    let mut out = w.0.clone();
    if (q > p && p > r) || (r > p && p > q) {
        out.swap(b, c);
    } else if (p > r && r > q) || (q > r && r > p) {
        out.swap(a, b);
    } else {
        return None;
    }
    Some(Permutation(out))
}

/// All applicable Knuth moves.
pub fn knuth_moves(w: &Permutation) -> Vec<(usize, Permutation)> {
    (2..w.n()).filter_map(|i| knuth_move(w, i).map(|y| (i, y))).collect()
}

/// The Knuth class of `w` by breadth-first search.
pub fn knuth_class(w: &Permutation) -> BTreeSet<Permutation> {
    let mut seen = BTreeSet::from([w.clone()]);
    let mut queue = VecDeque::from([w.clone()]);
    while let Some(x) = queue.pop_front() {
        for (_, y) in knuth_moves(&x) {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Breadth-first search over Knuth moves.
pub fn knuth_equivalent(x: &Permutation, y: &Permutation) -> bool {
    x.n() == y.n() && knuth_class(x).contains(y)
}

/// Whether `w` is of type `A_n` with the standard labelling (a path of 3s).
pub fn is_type_a(w: &CoxeterSystem) -> bool {
    (0..w.rank()).all(|s| {
        (0..w.rank()).all(|t| {
            let want = if s == t { Some(1) } else if s.abs_diff(t) == 1 { Some(3) } else { Some(2) };
            w.m(s, t) == want
        })
    })
}

fn fibers<K: Ord>(keys: impl Iterator<Item = (Elt, K)>) -> BTreeSet<Vec<Elt>> {
    let mut map: BTreeMap<K, Vec<Elt>> = BTreeMap::new();
    for (x, k) in keys {
        map.entry(k).or_default().push(x);
    }
    map.into_values().collect()
}

fn as_set(p: &CellPartition) -> BTreeSet<Vec<Elt>> {
    p.cells.iter().cloned().collect()
}

/// Checks that left, right and two-sided cells are the `Q`-, `P`- and shape
/// fibers, together with the counting consequences.
pub fn verify_typea_cell_theorem(
    w: &CoxeterSystem,
    left: &CellPartition,
    right: &CellPartition,
    two_sided: &CellPartition,
) -> Result<Report> {
    if !is_type_a(w) {
        return Err(Error::InvariantViolation("the system is not of type A".into()));
    }
    let mut report = Report::new();
    let perms: Vec<Permutation> = w.elements().map(|x| Permutation::from_element(w, x)).collect();
    let rs: Vec<(StandardTableau, StandardTableau)> = perms.iter().map(rs_correspondence).collect();

    let checks: [(&str, &CellPartition, BTreeSet<Vec<Elt>>); 3] = [
        ("left-cells-q", left, fibers(w.elements().map(|x| (x, rs[x].1.clone())))),
        ("right-cells-p", right, fibers(w.elements().map(|x| (x, rs[x].0.clone())))),
        ("two-sided-cells-shape", two_sided, fibers(w.elements().map(|x| (x, rs[x].0.shape())))),
    ];
    for (name, part, expected) in checks {
        let got = as_set(part);
        let missing: Vec<String> = expected
            .difference(&got)
            .take(3)
            .map(|c| c.iter().map(|&x| perms[x].to_string()).collect::<Vec<_>>().join(","))
            .collect();
        report.check(got == expected, || {
            Violation::new(name, missing, format!("{} cells but {} tableau fibers", got.len(), expected.len()))
        });
    }

    for cell in &left.cells {
        let inv: Vec<Elt> = cell.iter().copied().filter(|&x| perms[x].is_involution()).collect();
        report.check(inv.len() == 1, || {
            Violation::new(
                "unique-involution",
                cell.iter().map(|&x| perms[x].to_string()).collect(),
                format!("{} involutions in the left cell", inv.len()),
            )
        });
    }

    for cl in &left.cells {
        for cr in &right.cells {
            let meet = cl.iter().filter(|&&x| right.same_cell(x, cr[0])).count();
            let same = two_sided.same_cell(cl[0], cr[0]);
            let want = usize::from(same);
            report.check(meet == want, || {
                Violation::new(
                    "left-right-intersection",
                    vec![perms[cl[0]].to_string(), perms[cr[0]].to_string()],
                    format!("intersection has {meet} elements, expected {want}"),
                )
            });
        }
    }

    for cell in &two_sided.cells {
        let shape = rs[cell[0]].0.shape();
        let f = shape.hook_length_count() as usize;
        let lefts = left.cells_meeting(cell).len();
        report.check(lefts == f, || {
            Violation::new("left-cells-per-two-sided", vec![shape.to_string()], format!("{lefts} left cells, f = {f}"))
        });
        let rights = right.cells_meeting(cell).len();
        report.check(rights == f, || {
            Violation::new("right-cells-per-two-sided", vec![shape.to_string()], format!("{rights} right cells, f = {f}"))
        });
        for &c in &left.cells_meeting(cell) {
            let size = left.cells[c].len();
            report.check(size == f, || {
                Violation::new("left-cell-size", vec![shape.to_string()], format!("left cell of size {size}, f = {f}"))
            });
        }
        let longest = cell.iter().any(|&x| {
            let desc = w.right_descents(x);
            if desc.is_empty() {
                return x == crate::coxeter::IDENTITY;
            }
            let (sub, embed) = w.parabolic_subsystem(desc).expect("parabolic of a finite group");
            embed[sub.longest()] == x
        });
        report.check(longest, || {
            Violation::new(
                "parabolic-longest",
                vec![shape.to_string()],
                "two-sided cell contains no longest element of a standard parabolic",
            )
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn rs_examples() {
        let (p, q) = rs_correspondence(&perm("312"));
        assert_eq!(p.rows, vec![vec![1, 2], vec![3]]);
        assert_eq!(q.rows, vec![vec![1, 3], vec![2]]);
        let (p, q) = rs_correspondence(&perm("123"));
        assert_eq!((p.rows.clone(), q.rows), (vec![vec![1, 2, 3]], vec![vec![1, 2, 3]]));
        let (p, _) = rs_correspondence(&perm("321"));
        assert_eq!(p.rows, vec![vec![1], vec![2], vec![3]]);
        assert_eq!(inverse_rs(&p, &p).unwrap(), perm("321"));
    }

    #[test]
    fn knuth_examples() {
        assert_eq!(knuth_moves(&perm("312")), vec![(2, perm("132"))]);
        assert!(knuth_moves(&perm("1234")).is_empty());
        assert!(knuth_equivalent(&perm("312"), &perm("132")));
        assert!(!knuth_equivalent(&perm("312"), &perm("213")));
    }

    #[test]
    fn tableaux() {
        assert_eq!(column_superstandard(&Partition::new(vec![2, 1])).rows, vec![vec![1, 3], vec![2]]);
        assert_eq!(Partition::new(vec![2, 1]).hook_length_count(), 2);
        assert_eq!(Partition::new(vec![3, 2]).count_tableaux_brute_force(), 5);
        assert_eq!(Partition::all(4).len(), 5);
        assert!(StandardTableau::new(vec![vec![1, 3], vec![2]]).is_ok());
        assert!(StandardTableau::new(vec![vec![2, 1]]).is_err());
        let err = inverse_rs(&StandardTableau { rows: vec![vec![1, 2]] }, &StandardTableau { rows: vec![vec![1], vec![2]] });
        assert!(matches!(err, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn element_round_trip() {
        let w = CoxeterSystem::of_type("A3").unwrap();
        for x in w.elements() {
            let p = Permutation::from_element(&w, x);
            assert_eq!(p.to_element(&w).unwrap(), x);
            assert_eq!(p.right_descents().iter().map(|i| i - 1).collect::<Vec<_>>(), w.right_descents(x).iter().collect::<Vec<_>>());
        }
        assert!("3 1 2".parse::<Permutation>().is_ok());
        assert!("311".parse::<Permutation>().is_err());
    }
}
