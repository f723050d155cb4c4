//! Finite crystallographic Coxeter groups built from a (generalized) Cartan matrix.
//!
//! Elements are identified through the integer geometric representation on
//! the root lattice: the simple reflection `s` sends `alpha_t` to
//! `alpha_t - a_{s,t} alpha_s`, and an element is stored as the images of the
//! simple roots. Elements receive dense ids in breadth-first order, so ids
//! are sorted by length and the identity is `0`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense element id inside one [`CoxeterSystem`].
pub type Elt = usize;

pub const IDENTITY: Elt = 0;

pub const DEFAULT_CAP: usize = 1_000_000;

/// A subset of the generators, stored as a bitmask (rank at most 32).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenSet(pub u32);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn full(rank: usize) -> Self {
        GenSet(if rank >= 32 { u32::MAX } else { (1u32 << rank) - 1 })
    }

    pub fn singleton(s: usize) -> Self {
        GenSet(1 << s)
    }

    pub fn contains(self, s: usize) -> bool {
        self.0 >> s & 1 == 1
    }

    pub fn insert(&mut self, s: usize) {
        self.0 |= 1 << s;
    }

    pub fn is_subset(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: GenSet) -> GenSet {
        GenSet(self.0 & other.0)
    }

    pub fn difference(self, other: GenSet) -> GenSet {
        GenSet(self.0 & !other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&s| self.contains(s))
    }
}

impl FromIterator<usize> for GenSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut g = GenSet::EMPTY;
        for s in iter {
            g.insert(s);
        }
        g
    }
}

impl fmt::Debug for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// JSON group description: `{"type": "C3"}`, `{"cartan": [[...]]}` or `{"coxeter": [[...]]}`.
///
/// Coxeter matrix entries use `0` for infinity.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub type_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coxeter: Option<Vec<Vec<u32>>>,
}

impl GroupSpec {
    pub fn of_type(label: &str) -> Self {
        GroupSpec { type_label: Some(label.to_string()), ..Default::default() }
    }

    pub fn build(&self, cap: usize) -> Result<CoxeterSystem> {
        match (&self.type_label, &self.cartan, &self.coxeter) {
            (Some(t), None, None) => CoxeterSystem::of_type_with_cap(t, cap),
            (None, Some(a), None) => CoxeterSystem::from_cartan_with_cap(a, cap),
            (None, None, Some(m)) => CoxeterSystem::from_coxeter_matrix_with_cap(m, cap),
            _ => Err(Error::Schema(
                "group spec needs exactly one of `type`, `cartan`, `coxeter`".into(),
            )),
        }
    }
}

/// Up/Down decoration of one step of a Bruhat stroll, combined with the bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decoration {
    U0,
    U1,
    D0,
    D1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedSubexpression {
    pub bits: Vec<bool>,
    pub decorations: Vec<Decoration>,
    pub defect: i32,
}

/// An enumerated finite Coxeter group with Cayley tables, lengths and descents.
pub struct CoxeterSystem {
    rank: usize,
    label: Option<String>,
    cartan: Vec<Vec<i64>>,
    cartan_given: bool,
    /// `None` encodes infinity.
    coxeter: Vec<Vec<Option<u32>>>,
    right_mul: Vec<Vec<Elt>>,
    left_mul: Vec<Vec<Elt>>,
    length: Vec<usize>,
    inverse: Vec<Elt>,
    right_desc: Vec<GenSet>,
    left_desc: Vec<GenSet>,
    normal_form: Vec<Vec<usize>>,
    bruhat: OnceLock<Vec<Vec<u64>>>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("label", &self.label)
            .field("rank", &self.rank)
            .field("order", &self.len())
            .finish()
    }
}

/// Coxeter matrix entry from the product `a_{st} a_{ts}` of Cartan entries.
fn m_from_cartan_product(prod: i64) -> Option<u32> {
    match prod {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    }
}

fn validate_cartan(a: &[Vec<i64>]) -> Result<()> {
    let n = a.len();
    if n == 0 {
        return Err(Error::InvalidCartan("empty matrix".into()));
    }
    if n > 32 {
        return Err(Error::InvalidCartan("rank above 32 is not supported".into()));
    }
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidCartan(format!("row {i} has length {}, expected {n}", row.len())));
        }
        for (j, &x) in row.iter().enumerate() {
            if i == j && x != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry ({i},{i}) is {x}, expected 2")));
            }
            if i != j {
                if x > 0 {
                    return Err(Error::InvalidCartan(format!("off-diagonal entry ({i},{j}) = {x} is positive")));
                }
                if (x == 0) != (a[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!("entries ({i},{j}) and ({j},{i}) must vanish together")));
                }
            }
        }
    }
    Ok(())
}

/// Fixed Cartan matrices for the named types. Generators are `0..rank`.
///
/// `B_n`: generator 0 is the short simple root next to the double bond.
/// `C_n`: generator 0 is the long simple root, `a_{1,0} = -2`.
/// `G2`: generator 0 is short.
pub fn cartan_of_type(label: &str) -> Result<Vec<Vec<i64>>> {
    let bad = || Error::UnknownType(label.to_string());
    let upper = label.trim().to_ascii_uppercase();
    let (family, n) = upper.split_at(1);
    let n: usize = n.parse().map_err(|_| bad())?;
    let chain = |n: usize| {
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            if i + 1 < n {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        a
    };
    let a = match (family, n) {
        ("A", n) if n >= 1 => chain(n),
        ("B", n) if n >= 2 => {
            let mut a = chain(n);
            a[0][1] = -2;
            a
        }
        ("C", n) if n >= 2 => {
            let mut a = chain(n);
            a[1][0] = -2;
            a
        }
        ("D", n) if n >= 4 => {
            let mut a = chain(n);
            a[n - 2][n - 1] = 0;
            a[n - 1][n - 2] = 0;
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
            a
        }
        ("E", n) if (6..=8).contains(&n) => {
            // Bourbaki labels 1..n: 1-3-4-5-..., with 2 attached to 4.
            let mut a = vec![vec![0i64; n]; n];
            let mut edges = vec![(0, 2), (1, 3), (2, 3)];
            for i in 3..n - 1 {
                edges.push((i, i + 1));
            }
            for i in 0..n {
                a[i][i] = 2;
            }
            for (i, j) in edges {
                a[i][j] = -1;
                a[j][i] = -1;
            }
            a
        }
        ("F", 4) => vec![
            vec![2, -1, 0, 0],
            vec![-1, 2, -2, 0],
            vec![0, -1, 2, -1],
            vec![0, 0, -1, 2],
        ],
        ("G", 2) => vec![vec![2, -3], vec![-1, 2]],
        _ => return Err(bad()),
    };
    Ok(a)
}

impl CoxeterSystem {
    pub fn from_cartan(cartan: &[Vec<i64>]) -> Result<Self> {
        Self::from_cartan_with_cap(cartan, DEFAULT_CAP)
    }

    pub fn from_cartan_with_cap(cartan: &[Vec<i64>], cap: usize) -> Result<Self> {
        validate_cartan(cartan)?;
        Self::enumerate(cartan.to_vec(), true, None, cap)
    }

    pub fn of_type(label: &str) -> Result<Self> {
        Self::of_type_with_cap(label, DEFAULT_CAP)
    }

    pub fn of_type_with_cap(label: &str, cap: usize) -> Result<Self> {
        let a = cartan_of_type(label)?;
        Self::enumerate(a, true, Some(label.trim().to_ascii_uppercase()), cap)
    }

    /// Builds the group from a crystallographic Coxeter matrix (`0` = infinity).
    ///
    /// A generalized Cartan matrix with the same Coxeter matrix is chosen
    /// (`a_{st} = -1`, `a_{ts} = -(m-dependent)` for `s < t`); the Weyl group
    /// only depends on the Coxeter matrix.
    pub fn from_coxeter_matrix(m: &[Vec<u32>]) -> Result<Self> {
        Self::from_coxeter_matrix_with_cap(m, DEFAULT_CAP)
    }

    pub fn from_coxeter_matrix_with_cap(m: &[Vec<u32>], cap: usize) -> Result<Self> {
        let n = m.len();
        if n == 0 || n > 32 {
            return Err(Error::InvalidCoxeter("rank must be between 1 and 32".into()));
        }
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            if m[i].len() != n {
                return Err(Error::InvalidCoxeter(format!("row {i} has wrong length")));
            }
            if m[i][i] != 1 {
                return Err(Error::InvalidCoxeter(format!("diagonal entry ({i},{i}) must be 1")));
            }
            a[i][i] = 2;
            for j in 0..n {
                if i == j {
                    continue;
                }
                if m[i][j] != m[j][i] {
                    return Err(Error::InvalidCoxeter(format!("not symmetric at ({i},{j})")));
                }
                if i < j {
                    let (x, y) = match m[i][j] {
                        2 => (0, 0),
                        3 => (-1, -1),
                        4 => (-1, -2),
                        6 => (-1, -3),
                        0 => (-2, -2),
                        other => {
                            return Err(Error::InvalidCoxeter(format!(
                                "m({i},{j}) = {other} is not crystallographic"
                            )))
                        }
                    };
                    a[i][j] = x;
                    a[j][i] = y;
                }
            }
        }
        Self::enumerate(a, false, None, cap)
    }

    fn enumerate(cartan: Vec<Vec<i64>>, cartan_given: bool, label: Option<String>, cap: usize) -> Result<Self> {
        let rank = cartan.len();
        let coxeter: Vec<Vec<Option<u32>>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| if i == j { Some(1) } else { m_from_cartan_product(cartan[i][j] * cartan[j][i]) })
                    .collect()
            })
            .collect();

        // Column t of an element matrix holds w(alpha_t) in the simple-root basis.
        let mut identity = vec![0i64; rank * rank];
        for i in 0..rank {
            identity[i * rank + i] = 1;
        }
        let right_act = |mat: &[i64], s: usize| -> Vec<i64> {
            let mut out = mat.to_vec();
            for t in 0..rank {
                let a = cartan[s][t];
                if a != 0 {
                    for i in 0..rank {
                        out[i * rank + t] -= a * mat[i * rank + s];
                    }
                }
            }
            out
        };
        let left_act = |mat: &[i64], s: usize| -> Vec<i64> {
            let mut out = mat.to_vec();
            for t in 0..rank {
                let pairing: i64 = (0..rank).map(|u| mat[u * rank + t] * cartan[s][u]).sum();
                out[s * rank + t] -= pairing;
            }
            out
        };

        let mut index: HashMap<Vec<i64>, Elt> = HashMap::new();
        let mut mats: Vec<Vec<i64>> = vec![identity.clone()];
        let mut length = vec![0usize];
        let mut right_mul: Vec<Vec<Elt>> = Vec::new();
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            let mut row = Vec::with_capacity(rank);
            for s in 0..rank {
                let next = right_act(&mats[w], s);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = mats.len();
                        if id >= cap {
                            return Err(Error::GroupExceedsCap { cap });
                        }
                        index.insert(next.clone(), id);
                        mats.push(next);
                        length.push(length[w] + 1);
                        queue.push_back(id);
                        id
                    }
                };
                row.push(id);
            }
            right_mul.push(row);
        }

        let order = mats.len();
        let left_mul: Vec<Vec<Elt>> = (0..order)
            .map(|w| (0..rank).map(|s| index[&left_act(&mats[w], s)]).collect())
            .collect();
        let right_desc: Vec<GenSet> = (0..order)
            .map(|w| (0..rank).filter(|&s| length[right_mul[w][s]] < length[w]).collect())
            .collect();
        let left_desc: Vec<GenSet> = (0..order)
            .map(|w| (0..rank).filter(|&s| length[left_mul[w][s]] < length[w]).collect())
            .collect();
        debug_assert!((0..order).all(|w| (0..rank).all(|s| {
            let negative = (0..rank).all(|i| mats[w][i * rank + s] <= 0);
            negative == right_desc[w].contains(s)
        })));

        // ShortLex normal form: peel off the smallest left descent.
        let mut normal_form: Vec<Vec<usize>> = vec![Vec::new(); order];
        for w in 1..order {
            let s = left_desc[w].iter().next().expect("non-identity element has a left descent");
            let rest = left_mul[w][s];
            let mut word = Vec::with_capacity(length[w]);
            word.push(s);
            word.extend_from_slice(&normal_form[rest]);
            normal_form[w] = word;
        }
        let inverse: Vec<Elt> = (0..order)
            .map(|w| normal_form[w].iter().rev().fold(IDENTITY, |acc, &s| right_mul[acc][s]))
            .collect();

        Ok(CoxeterSystem {
            rank,
            label,
            cartan,
            cartan_given,
            coxeter,
            right_mul,
            left_mul,
            length,
            inverse,
            right_desc,
            left_desc,
            normal_form,
            bruhat: OnceLock::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.length.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Whether the Cartan matrix was supplied (as opposed to derived from a Coxeter matrix).
    pub fn cartan_given(&self) -> bool {
        self.cartan_given
    }

    /// Coxeter matrix entry; `None` is infinity.
    pub fn m(&self, s: usize, t: usize) -> Option<u32> {
        self.coxeter[s][t]
    }

    pub fn elements(&self) -> std::ops::Range<Elt> {
        0..self.len()
    }

    pub fn generators(&self) -> GenSet {
        GenSet::full(self.rank)
    }

    pub fn generator(&self, s: usize) -> Elt {
        self.right_mul[IDENTITY][s]
    }

    pub fn length(&self, w: Elt) -> usize {
        self.length[w]
    }

    pub fn right_mul(&self, w: Elt, s: usize) -> Elt {
        self.right_mul[w][s]
    }

    pub fn left_mul(&self, s: usize, w: Elt) -> Elt {
        self.left_mul[w][s]
    }

    /// Multiplication by a generator on the given side.
    pub fn mul_gen(&self, w: Elt, s: usize, side: Side) -> Elt {
        match side {
            Side::Right => self.right_mul[w][s],
            Side::Left => self.left_mul[w][s],
        }
    }

    pub fn inverse(&self, w: Elt) -> Elt {
        self.inverse[w]
    }

    pub fn right_descents(&self, w: Elt) -> GenSet {
        self.right_desc[w]
    }

    pub fn left_descents(&self, w: Elt) -> GenSet {
        self.left_desc[w]
    }

    pub fn descents(&self, w: Elt, side: Side) -> GenSet {
        match side {
            Side::Right => self.right_desc[w],
            Side::Left => self.left_desc[w],
        }
    }

    /// Longest element (the unique element whose right descent set is all of `S`).
    pub fn longest(&self) -> Elt {
        self.len() - 1
    }

    /// Product `xy`.
    pub fn mul(&self, x: Elt, y: Elt) -> Elt {
        self.normal_form[y].iter().fold(x, |acc, &s| self.right_mul[acc][s])
    }

    /// ShortLex (lexicographically first) reduced word.
    pub fn reduced_word(&self, w: Elt) -> &[usize] {
        &self.normal_form[w]
    }

    /// Evaluates an arbitrary word (not necessarily reduced).
    pub fn word_to_element(&self, word: &[usize]) -> Result<Elt> {
        let mut w = IDENTITY;
        for &s in word {
            if s >= self.rank {
                return Err(Error::InvalidWord(format!("letter {s} is not below rank {}", self.rank)));
            }
            w = self.right_mul[w][s];
        }
        Ok(w)
    }

    /// Evaluates a word given with 1-based generator labels.
    pub fn labels_to_element(&self, labels: &[usize]) -> Result<Elt> {
        let word: Vec<usize> = labels
            .iter()
            .map(|&l| {
                l.checked_sub(1)
                    .ok_or_else(|| Error::InvalidWord("generator labels are 1-based".into()))
            })
            .collect::<Result<_>>()?;
        self.word_to_element(&word)
    }

    /// Parses a digit string such as `"23212"` (1-based labels, `"e"` or `""` for the identity).
    pub fn parse_digits(&self, digits: &str) -> Result<Elt> {
        let digits = digits.trim();
        if digits.is_empty() || digits == "e" {
            return Ok(IDENTITY);
        }
        let labels: Vec<usize> = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::InvalidWord(format!("`{digits}` is not a digit string")))
            })
            .collect::<Result<_>>()?;
        self.labels_to_element(&labels)
    }

    /// Digit string of the normal form with 1-based labels; `"e"` for the identity.
    pub fn digits(&self, w: Elt) -> String {
        if w == IDENTITY {
            return "e".to_string();
        }
        self.normal_form[w]
            .iter()
            .map(|&s| {
                if s < 9 {
                    char::from(b'1' + s as u8).to_string()
                } else {
                    format!("[{}]", s + 1)
                }
            })
            .collect()
    }

    /// Reduced word with 1-based labels, as used in JSON files.
    pub fn labels(&self, w: Elt) -> Vec<usize> {
        self.normal_form[w].iter().map(|&s| s + 1).collect()
    }

    fn bruhat_table(&self) -> &Vec<Vec<u64>> {
        self.bruhat.get_or_init(|| {
            let n = self.len();
            let words = n.div_ceil(64);
            let mut table: Vec<Vec<u64>> = Vec::with_capacity(n);
            for y in 0..n {
                let mut row = vec![0u64; words];
                if y == IDENTITY {
                    row[0] = 1;
                } else {
                    let s = self.right_desc[y].iter().next().unwrap();
                    let ys = self.right_mul[y][s];
                    let below = &table[ys];
                    for x in 0..n {
                        if self.length[x] > self.length[y] {
                            break;
                        }
                        let probe = if self.right_desc[x].contains(s) { self.right_mul[x][s] } else { x };
                        if below[probe / 64] >> (probe % 64) & 1 == 1 {
                            row[x / 64] |= 1 << (x % 64);
                        }
                    }
                }
                table.push(row);
            }
            table
        })
    }

    /// Bruhat order via the descent recursion: for `s` in `D_R(y)`,
    /// `x <= y` iff `xs <= ys` (if `s` in `D_R(x)`) or `x <= ys` (otherwise).
    pub fn bruhat_leq(&self, x: Elt, y: Elt) -> bool {
        self.bruhat_table()[y][x / 64] >> (x % 64) & 1 == 1
    }

    pub fn bruhat_lt(&self, x: Elt, y: Elt) -> bool {
        x != y && self.bruhat_leq(x, y)
    }

    /// Elements of the standard parabolic subgroup `W_I`.
    pub fn parabolic_elements(&self, subset: GenSet) -> Vec<Elt> {
        let mut seen = vec![false; self.len()];
        seen[IDENTITY] = true;
        let mut out = vec![IDENTITY];
        let mut i = 0;
        while i < out.len() {
            let w = out[i];
            for s in subset.iter().filter(|&s| s < self.rank) {
                let ws = self.right_mul[w][s];
                if !seen[ws] {
                    seen[ws] = true;
                    out.push(ws);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// `W^I` (right quotient `W/W_I`, side = right) or `^I W` (left quotient, side = left):
    /// the elements with no descent in `I` on that side.
    pub fn minimal_coset_representatives(&self, subset: GenSet, side: Side) -> Vec<Elt> {
        self.elements().filter(|&w| self.descents(w, side).intersection(subset).is_empty()).collect()
    }

    /// Factorizes `w = x y` with `x` in `W^I` and `y` in `W_I`, lengths adding.
    pub fn coset_factorize(&self, w: Elt, subset: GenSet) -> (Elt, Elt) {
        let mut x = w;
        let mut y_word = Vec::new();
        while let Some(s) = self.right_desc[x].intersection(subset).iter().next() {
            x = self.right_mul[x][s];
            y_word.push(s);
        }
        let y = y_word.iter().rev().fold(IDENTITY, |acc, &s| self.right_mul[acc][s]);
        (x, y)
    }

    /// Factorizes `w = y x` with `y` in `W_I` and `x` in `^I W`.
    pub fn coset_factorize_left(&self, w: Elt, subset: GenSet) -> (Elt, Elt) {
        let (x, y) = self.coset_factorize(self.inverse[w], subset);
        (self.inverse[y], self.inverse[x])
    }

    /// The Bruhat stroll of a subexpression, with decorations and defect.
    pub fn decorate(&self, word: &[usize], bits: &[bool]) -> (Elt, DecoratedSubexpression) {
        let mut w = IDENTITY;
        let mut decorations = Vec::with_capacity(word.len());
        let mut defect = 0;
        for (&s, &bit) in word.iter().zip(bits) {
            let up = !self.right_desc[w].contains(s);
            let d = match (up, bit) {
                (true, false) => {
                    defect += 1;
                    Decoration::U0
                }
                (true, true) => Decoration::U1,
                (false, false) => {
                    defect -= 1;
                    Decoration::D0
                }
                (false, true) => Decoration::D1,
            };
            if bit {
                w = self.right_mul[w][s];
            }
            decorations.push(d);
        }
        (w, DecoratedSubexpression { bits: bits.to_vec(), decorations, defect })
    }

    /// All decorated subexpressions of `word` whose product is `target`.
    pub fn subexpressions(&self, word: &[usize], target: Elt) -> Vec<DecoratedSubexpression> {
        let n = word.len();
        assert!(n < 63, "word too long for subexpression enumeration");
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << n) {
            let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let (w, sub) = self.decorate(word, &bits);
            if w == target {
                out.push(sub);
            }
        }
        out
    }

    /// Checks that `phi` is a permutation of the generators preserving the
    /// Cartan matrix (or the Coxeter matrix when no Cartan matrix was given).
    pub fn check_diagram_automorphism(&self, phi: &[usize]) -> Result<()> {
        if phi.len() != self.rank {
            return Err(Error::InvalidAutomorphism(format!("expected {} images, got {}", self.rank, phi.len())));
        }
        let mut seen = vec![false; self.rank];
        for &p in phi {
            if p >= self.rank || seen[p] {
                return Err(Error::InvalidAutomorphism("not a permutation of the generators".into()));
            }
            seen[p] = true;
        }
        for s in 0..self.rank {
            for t in 0..self.rank {
                let ok = if self.cartan_given {
                    self.cartan[phi[s]][phi[t]] == self.cartan[s][t]
                } else {
                    self.coxeter[phi[s]][phi[t]] == self.coxeter[s][t]
                };
                if !ok {
                    return Err(Error::InvalidAutomorphism(format!(
                        "matrix entry ({s},{t}) is not preserved"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply_diagram_automorphism(&self, phi: &[usize], w: Elt) -> Result<Elt> {
        self.check_diagram_automorphism(phi)?;
        Ok(self.apply_automorphism_unchecked(phi, w))
    }

    pub(crate) fn apply_automorphism_unchecked(&self, phi: &[usize], w: Elt) -> Elt {
        self.normal_form[w].iter().fold(IDENTITY, |acc, &s| self.right_mul[acc][phi[s]])
    }

    /// The standard parabolic subgroup `W_I` as a Coxeter system in its own
    /// right, together with the embedding of its ids into this group.
    ///
    /// Generator `k` of the subsystem is the `k`-th smallest element of `I`.
    pub fn parabolic_subsystem(&self, subset: GenSet) -> Result<(CoxeterSystem, Vec<Elt>)> {
        let gens: Vec<usize> = subset.iter().filter(|&s| s < self.rank).collect();
        if gens.is_empty() {
            return Err(Error::InvalidCartan("empty parabolic subset".into()));
        }
        let sub_cartan: Vec<Vec<i64>> =
            gens.iter().map(|&i| gens.iter().map(|&j| self.cartan[i][j]).collect()).collect();
        let sub = CoxeterSystem::enumerate(sub_cartan, self.cartan_given, None, self.len() + 1)?;
        let embed = sub
            .elements()
            .map(|w| sub.reduced_word(w).iter().fold(IDENTITY, |acc, &k| self.right_mul[acc][gens[k]]))
            .collect();
        Ok((sub, embed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> CoxeterSystem {
        CoxeterSystem::of_type("A2").unwrap()
    }

    #[test]
    fn from_cartan_rule() {
        let a2 = CoxeterSystem::from_cartan(&[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(a2.m(0, 1), Some(3));
        let b2 = CoxeterSystem::from_cartan(&[vec![2, -1], vec![-2, 2]]).unwrap();
        assert_eq!(b2.m(0, 1), Some(4));
        let a1a1 = CoxeterSystem::from_cartan(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(a1a1.m(0, 1), Some(2));
        let g2 = CoxeterSystem::from_cartan(&[vec![2, -1], vec![-3, 2]]).unwrap();
        assert_eq!(g2.m(0, 1), Some(6));
    }

    #[test]
    fn from_cartan_rejects_bad_input() {
        assert!(matches!(
            CoxeterSystem::from_cartan(&[vec![2, 1], vec![1, 2]]),
            Err(Error::InvalidCartan(_))
        ));
        assert!(matches!(CoxeterSystem::from_cartan(&[vec![2, -1]]), Err(Error::InvalidCartan(_))));
        assert!(matches!(
            CoxeterSystem::from_cartan(&[vec![2, -1], vec![0, 2]]),
            Err(Error::InvalidCartan(_))
        ));
    }

    #[test]
    fn enumerate_orders() {
        let a2 = a2();
        assert_eq!(a2.len(), 6);
        assert_eq!(a2.length(a2.longest()), 3);
        assert_eq!(CoxeterSystem::of_type("B2").unwrap().len(), 8);
        let c3 = CoxeterSystem::of_type("C3").unwrap();
        assert_eq!(c3.len(), 48);
        assert_eq!(c3.length(c3.longest()), 9);
        assert_eq!(CoxeterSystem::of_type("G2").unwrap().len(), 12);
        assert_eq!(CoxeterSystem::of_type("A4").unwrap().len(), 120);
        assert_eq!(CoxeterSystem::of_type("D4").unwrap().len(), 192);
        assert_eq!(CoxeterSystem::of_type("F4").unwrap().len(), 1152);
    }

    #[test]
    fn infinite_group_hits_cap() {
        let affine = vec![vec![2, -2], vec![-2, 2]];
        assert!(matches!(
            CoxeterSystem::from_cartan_with_cap(&affine, 500),
            Err(Error::GroupExceedsCap { cap: 500 })
        ));
        assert!(CoxeterSystem::from_coxeter_matrix_with_cap(&[vec![1, 0], vec![0, 1]], 100).is_err());
    }

    #[test]
    fn coxeter_matrix_input() {
        let b3 = CoxeterSystem::from_coxeter_matrix(&[vec![1, 4, 2], vec![4, 1, 3], vec![2, 3, 1]]).unwrap();
        assert_eq!(b3.len(), 48);
        assert!(!b3.cartan_given());
        assert!(CoxeterSystem::from_coxeter_matrix(&[vec![1, 5], vec![5, 1]]).is_err());
        assert!(CoxeterSystem::from_coxeter_matrix(&[vec![1, 3], vec![4, 1]]).is_err());
    }

    #[test]
    fn length_and_descent_consistency() {
        for label in ["A3", "B3", "C3", "G2", "D4"] {
            let w = CoxeterSystem::of_type(label).unwrap();
            assert_eq!(w.length(IDENTITY), 0);
            for x in w.elements() {
                for s in 0..w.rank() {
                    let xs = w.right_mul(x, s);
                    assert_eq!(w.length(xs).abs_diff(w.length(x)), 1);
                    assert_eq!(w.right_mul(xs, s), x);
                    assert_eq!(w.right_descents(x).contains(s), w.length(xs) < w.length(x));
                }
                assert_eq!(w.left_descents(x), w.right_descents(w.inverse(x)));
                assert_eq!(w.inverse(w.inverse(x)), x);
                assert_eq!(w.reduced_word(x).len(), w.length(x));
            }
        }
    }

    #[test]
    fn bruhat_examples() {
        let a2 = a2();
        let s = a2.parse_digits("1").unwrap();
        let t = a2.parse_digits("2").unwrap();
        let sts = a2.parse_digits("121").unwrap();
        assert!(a2.elements().all(|w| a2.bruhat_leq(IDENTITY, w)));
        assert!(a2.bruhat_leq(s, sts));
        assert!(!a2.bruhat_leq(s, t));
    }

    #[test]
    fn coset_representatives_a2() {
        let a2 = a2();
        let i = GenSet::singleton(0);
        let reps = a2.minimal_coset_representatives(i, Side::Right);
        let expected: Vec<Elt> = ["e", "2", "12"].iter().map(|d| a2.parse_digits(d).unwrap()).collect();
        let mut sorted = expected.clone();
        sorted.sort();
        assert_eq!(reps, sorted);
        let left = a2.minimal_coset_representatives(i, Side::Left);
        let mut expected: Vec<Elt> = ["e", "2", "21"].iter().map(|d| a2.parse_digits(d).unwrap()).collect();
        expected.sort();
        assert_eq!(left, expected);
        let ts = a2.parse_digits("21").unwrap();
        assert_eq!(a2.coset_factorize_left(ts, i), (IDENTITY, ts));
        assert_eq!(a2.minimal_coset_representatives(a2.generators(), Side::Right), vec![IDENTITY]);
        assert_eq!(a2.minimal_coset_representatives(GenSet::EMPTY, Side::Left).len(), 6);
    }

    #[test]
    fn coset_factorization() {
        let a2 = a2();
        let i = GenSet::singleton(0);
        assert_eq!(a2.coset_factorize(IDENTITY, i), (IDENTITY, IDENTITY));
        let st = a2.parse_digits("12").unwrap();
        assert_eq!(a2.coset_factorize(st, i), (st, IDENTITY));
        let ts = a2.parse_digits("21").unwrap();
        assert_eq!(a2.coset_factorize(ts, i), (a2.generator(1), a2.generator(0)));
        let b3 = CoxeterSystem::of_type("B3").unwrap();
        for mask in 0..8u32 {
            let i = GenSet(mask);
            let wi = b3.parabolic_elements(i);
            let reps = b3.minimal_coset_representatives(i, Side::Right);
            assert_eq!(wi.len() * reps.len(), b3.len());
            for w in b3.elements() {
                let (x, y) = b3.coset_factorize(w, i);
                assert_eq!(b3.mul(x, y), w);
                assert_eq!(b3.length(x) + b3.length(y), b3.length(w));
                assert!(reps.contains(&x) && wi.contains(&y));
                let (y2, x2) = b3.coset_factorize_left(w, i);
                assert_eq!(b3.mul(y2, x2), w);
                assert!(wi.contains(&y2));
                assert!(b3.left_descents(x2).intersection(i).is_empty());
            }
        }
    }

    #[test]
    fn subexpression_defects() {
        let a2 = a2();
        let s = a2.generator(0);
        let subs = a2.subexpressions(&[0, 1, 0], s);
        let mut defects: Vec<i32> = subs.iter().map(|e| e.defect).collect();
        defects.sort();
        assert_eq!(defects, vec![0, 2]);
        use Decoration::*;
        assert!(subs.iter().any(|e| e.decorations == vec![U1, U0, D0]));
        assert!(subs.iter().any(|e| e.decorations == vec![U0, U0, U1]));

        let single = a2.subexpressions(&[0], IDENTITY);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].decorations, vec![U0]);
        assert_eq!(single[0].defect, 1);

        let empty = a2.subexpressions(&[], IDENTITY);
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].defect, 0);
    }

    #[test]
    fn diagram_automorphisms() {
        let a2 = a2();
        let st = a2.parse_digits("12").unwrap();
        let ts = a2.parse_digits("21").unwrap();
        assert_eq!(a2.apply_diagram_automorphism(&[0, 1], st).unwrap(), st);
        assert_eq!(a2.apply_diagram_automorphism(&[1, 0], st).unwrap(), ts);
        assert_eq!(a2.apply_diagram_automorphism(&[1, 0], a2.longest()).unwrap(), a2.longest());
        let c3 = CoxeterSystem::of_type("C3").unwrap();
        assert!(c3.apply_diagram_automorphism(&[2, 1, 0], 1).is_err());
        assert!(c3.apply_diagram_automorphism(&[0, 0, 1], 1).is_err());
    }

    #[test]
    fn digits_roundtrip() {
        let c3 = CoxeterSystem::of_type("C3").unwrap();
        for w in c3.elements() {
            assert_eq!(c3.parse_digits(&c3.digits(w)).unwrap(), w);
        }
        assert_eq!(c3.parse_digits("2321213").unwrap(), c3.parse_digits("2321231").unwrap());
        assert!(c3.parse_digits("24").is_err());
        assert!(c3.parse_digits("2x").is_err());
    }

    #[test]
    fn group_spec_json() {
        let spec: GroupSpec = serde_json::from_str(r#"{"type": "C3"}"#).unwrap();
        assert_eq!(spec.build(DEFAULT_CAP).unwrap().len(), 48);
        let spec: GroupSpec = serde_json::from_str(r#"{"cartan": [[2,-1],[-1,2]]}"#).unwrap();
        assert_eq!(spec.build(DEFAULT_CAP).unwrap().len(), 6);
        let spec: GroupSpec = serde_json::from_str(r#"{}"#).unwrap();
        assert!(spec.build(DEFAULT_CAP).is_err());
    }

    #[test]
    fn parabolic_subsystem_embeds() {
        let c3 = CoxeterSystem::of_type("C3").unwrap();
        let (sub, embed) = c3.parabolic_subsystem(GenSet(0b011)).unwrap();
        assert_eq!(sub.len(), 8);
        assert_eq!(sub.m(0, 1), Some(4));
        for w in sub.elements() {
            assert_eq!(c3.length(embed[w]), sub.length(w));
        }
    }
}
