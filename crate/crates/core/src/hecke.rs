//! The Hecke algebra over `Z[v, v^-1]`: standard basis arithmetic, the bar
//! involution, the anti-involution `iota`, the Kazhdan-Lusztig basis (Soergel's
//! normalization) and conversions between bases.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::coxeter::{CoxeterSystem, Elt, Side, IDENTITY};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::pcanonical::PCanTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    Standard,
    KazhdanLusztig,
    PCanonical(u32),
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Standard => f.write_str("standard"),
            Basis::KazhdanLusztig => f.write_str("KL"),
            Basis::PCanonical(p) => write!(f, "{p}-canonical"),
        }
    }
}

/// A finitely supported combination of basis elements, tagged with its basis.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElt {
    basis: Basis,
    coeffs: BTreeMap<Elt, LaurentPoly>,
}

impl fmt::Debug for HeckeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeElt[{}]", self.basis)?;
        f.debug_map().entries(self.coeffs.iter().map(|(x, c)| (x, c.to_string()))).finish()
    }
}

impl HeckeElt {
    pub fn zero(basis: Basis) -> Self {
        HeckeElt { basis, coeffs: BTreeMap::new() }
    }

    pub fn basis_element(basis: Basis, x: Elt) -> Self {
        Self::monomial(basis, x, LaurentPoly::one())
    }

    pub fn monomial(basis: Basis, x: Elt, c: LaurentPoly) -> Self {
        let mut e = Self::zero(basis);
        e.add_term(x, &c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Elt, LaurentPoly)>>(basis: Basis, terms: I) -> Self {
        let mut e = Self::zero(basis);
        for (x, c) in terms {
            e.add_term(x, &c);
        }
        e
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn get(&self, x: Elt) -> Option<&LaurentPoly> {
        self.coeffs.get(&x)
    }

    pub fn coefficient(&self, x: Elt) -> LaurentPoly {
        self.coeffs.get(&x).cloned().unwrap_or_default()
    }

    /// Terms in increasing element id order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (Elt, &LaurentPoly)> {
        self.coeffs.iter().map(|(&x, c)| (x, c))
    }

    /// The term with the largest element id.
    pub fn top_term(&self) -> Option<(Elt, LaurentPoly)> {
        self.coeffs.last_key_value().map(|(&x, c)| (x, c.clone()))
    }

    pub fn support(&self) -> impl Iterator<Item = Elt> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn add_term(&mut self, x: Elt, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(x).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&x);
        }
    }

    fn check_same_basis(&self, other: &HeckeElt) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch { left: self.basis.to_string(), right: other.basis.to_string() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &HeckeElt) -> Result<HeckeElt> {
        self.check_same_basis(other)?;
        let mut out = self.clone();
        for (x, c) in other.iter() {
            out.add_term(x, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &HeckeElt) -> Result<HeckeElt> {
        self.check_same_basis(other)?;
        let mut out = self.clone();
        for (x, c) in other.iter() {
            out.add_term(x, &-c);
        }
        Ok(out)
    }

    /// Adds `factor * other` in place.
    pub fn add_scaled(&mut self, factor: &LaurentPoly, other: &HeckeElt) -> Result<()> {
        self.check_same_basis(other)?;
        for (x, c) in other.iter() {
            self.add_term(x, &(factor * c));
        }
        Ok(())
    }

    pub fn scale(&self, factor: &LaurentPoly) -> HeckeElt {
        HeckeElt::from_terms(self.basis, self.iter().map(|(x, c)| (x, factor * c)))
    }

    /// Renders the element with digit-string labels, e.g. `C_{232} + (v + v^-1) C_{2}`.
    pub fn display(&self, w: &CoxeterSystem) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let sym = match self.basis {
            Basis::Standard => "H",
            Basis::KazhdanLusztig => "C",
            Basis::PCanonical(_) => "B",
        };
        self.iter()
            .rev()
            .map(|(x, c)| {
                if c.is_one() {
                    format!("{sym}_{{{}}}", w.digits(x))
                } else {
                    format!("({c}) {sym}_{{{}}}", w.digits(x))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `h * H_s` (right) or `H_s * h` (left) in the standard basis.
pub fn std_mul_generator(w: &CoxeterSystem, a: &HeckeElt, s: usize, side: Side) -> Result<HeckeElt> {
    require_basis(a, Basis::Standard)?;
    let quad = LaurentPoly::from_terms([(-1, 1), (1, -1)]);
    let mut out = HeckeElt::zero(Basis::Standard);
    for (y, c) in a.iter() {
        let ys = w.mul_gen(y, s, side);
        out.add_term(ys, c);
        if w.length(ys) < w.length(y) {
            out.add_term(y, &(c * &quad));
        }
    }
    Ok(out)
}

/// Product of two elements in the standard basis.
pub fn std_multiply(w: &CoxeterSystem, a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt> {
    require_basis(a, Basis::Standard)?;
    require_basis(b, Basis::Standard)?;
    let mut out = HeckeElt::zero(Basis::Standard);
    for (y, c) in b.iter() {
        let mut prod = a.clone();
        for &s in w.reduced_word(y) {
            prod = std_mul_generator(w, &prod, s, Side::Right)?;
        }
        out.add_scaled(c, &prod)?;
    }
    Ok(out)
}

/// `bar(H_x)` expanded in the standard basis, via `bar(H_s) = H_s + (v - v^-1)`.
pub fn bar_of_standard(w: &CoxeterSystem, x: Elt) -> HeckeElt {
    let shift = LaurentPoly::from_terms([(-1, -1), (1, 1)]);
    let mut out = HeckeElt::basis_element(Basis::Standard, IDENTITY);
    for &s in w.reduced_word(x) {
        let mut next = std_mul_generator(w, &out, s, Side::Right).expect("standard basis");
        next.add_scaled(&shift, &out).expect("standard basis");
        out = next;
    }
    out
}

/// The bar involution. Kazhdan-Lusztig and p-canonical basis elements are
/// self-dual, so in those bases only the coefficients are barred.
pub fn bar_involution(w: &CoxeterSystem, a: &HeckeElt) -> HeckeElt {
    match a.basis {
        Basis::Standard => {
            let mut out = HeckeElt::zero(Basis::Standard);
            for (x, c) in a.iter() {
                out.add_scaled(&c.bar(), &bar_of_standard(w, x)).expect("standard basis");
            }
            out
        }
        basis => HeckeElt::from_terms(basis, a.iter().map(|(x, c)| (x, c.bar()))),
    }
}

/// The anti-involution with `iota(H_x) = H_{x^-1}`; it also sends `C_x` and
/// `pB_x` to the basis element indexed by `x^-1`.
pub fn iota(w: &CoxeterSystem, a: &HeckeElt) -> HeckeElt {
    HeckeElt::from_terms(a.basis, a.iter().map(|(x, c)| (w.inverse(x), c.clone())))
}

fn require_basis(a: &HeckeElt, basis: Basis) -> Result<()> {
    if a.basis != basis {
        return Err(Error::BasisMismatch { left: a.basis.to_string(), right: basis.to_string() });
    }
    Ok(())
}

/// `C_{s_1} ... C_{s_k}` in the standard basis: the sum over all
/// subexpressions of the word of `v^defect H_end`, accumulated step by step.
pub fn bott_samelson_to_standard(w: &CoxeterSystem, word: &[usize]) -> Result<HeckeElt> {
    let mut state: BTreeMap<Elt, LaurentPoly> = BTreeMap::from([(IDENTITY, LaurentPoly::one())]);
    for &s in word {
        if s >= w.rank() {
            return Err(Error::InvalidWord(format!("letter {s} is not below rank {}", w.rank())));
        }
        let mut next: BTreeMap<Elt, LaurentPoly> = BTreeMap::new();
        for (&x, c) in &state {
            let xs = w.right_mul(x, s);
            let up = w.length(xs) > w.length(x);
            *next.entry(xs).or_default() += c;
            *next.entry(x).or_default() += &c.shift(if up { 1 } else { -1 });
        }
        next.retain(|_, c| !c.is_zero());
        state = next;
    }
    Ok(HeckeElt::from_terms(Basis::Standard, state))
}

/// Kazhdan-Lusztig polynomials `h_{y,x}` and the `mu` coefficients.
///
/// `C_x = sum_y h_{y,x} H_y` with `h_{x,x} = 1` and `h_{y,x}` in `vZ[v]` for `y < x`.
#[derive(Debug, Clone)]
pub struct KLTable {
    /// Column `x`: the nonzero `h_{y,x}`, sorted by `y`.
    columns: Vec<Vec<(Elt, LaurentPoly)>>,
    /// Column `x`: the `z < x` with `mu(z,x) != 0`.
    mu: Vec<Vec<(Elt, i64)>>,
}

impl KLTable {
    /// The classical recursion `C_{x'} C_s = C_x + sum_{z < x', zs < z} mu(z,x') C_z`
    /// with `x = x's > x'`, processed in length order.
    pub fn compute(w: &CoxeterSystem) -> Self {
        let n = w.len();
        let mut columns: Vec<Vec<(Elt, LaurentPoly)>> = Vec::with_capacity(n);
        let mut mu: Vec<Vec<(Elt, i64)>> = Vec::with_capacity(n);
        columns.push(vec![(IDENTITY, LaurentPoly::one())]);
        mu.push(Vec::new());
        let mut scratch: Vec<LaurentPoly> = vec![LaurentPoly::zero(); n];
        let mut touched: Vec<Elt> = Vec::new();
        for x in 1..n {
            let s = w.right_descents(x).iter().next().expect("nontrivial element has a descent");
            let xp = w.right_mul(x, s);
            let mut bump = |y: Elt, c: &LaurentPoly, scratch: &mut Vec<LaurentPoly>| {
                if scratch[y].is_zero() {
                    touched.push(y);
                }
                scratch[y] += c;
            };
            for (y, c) in &columns[xp] {
                let ys = w.right_mul(*y, s);
                bump(ys, c, &mut scratch);
                let k = if w.length(ys) > w.length(*y) { 1 } else { -1 };
                bump(*y, &c.shift(k), &mut scratch);
            }
            for &(z, m) in &mu[xp] {
                if w.right_descents(z).contains(s) {
                    for (y, c) in &columns[z] {
                        bump(*y, &c.scale(-m), &mut scratch);
                    }
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut col = Vec::new();
            let mut mu_col = Vec::new();
            for &y in &touched {
                let c = std::mem::take(&mut scratch[y]);
                if c.is_zero() {
                    continue;
                }
                if y != x {
                    debug_assert!(c.in_v_z_v(), "degree bound violated at ({y},{x})");
                    let m = c.coefficient_of(1);
                    if m != 0 {
                        mu_col.push((y, m));
                    }
                }
                col.push((y, c));
            }
            touched.clear();
            columns.push(col);
            mu.push(mu_col);
        }
        KLTable { columns, mu }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn h(&self, y: Elt, x: Elt) -> LaurentPoly {
        let col = &self.columns[x];
        match col.binary_search_by_key(&y, |(z, _)| *z) {
            Ok(i) => col[i].1.clone(),
            Err(_) => LaurentPoly::zero(),
        }
    }

    /// Nonzero `h_{y,x}` for fixed `x`, sorted by `y`.
    pub fn column(&self, x: Elt) -> &[(Elt, LaurentPoly)] {
        &self.columns[x]
    }

    /// `mu(y, x)` for `y < x`; zero otherwise.
    pub fn mu(&self, y: Elt, x: Elt) -> i64 {
        self.mu[x].iter().find(|(z, _)| *z == y).map_or(0, |&(_, m)| m)
    }

    /// All `z < x` with `mu(z, x) != 0`.
    pub fn mu_list(&self, x: Elt) -> &[(Elt, i64)] {
        &self.mu[x]
    }

    /// `C_x` in the standard basis.
    pub fn kl_element(&self, x: Elt) -> HeckeElt {
        HeckeElt::from_terms(Basis::Standard, self.columns[x].iter().cloned())
    }

    /// JSON export: a list of `{y, x, h}` with `y`, `x` as 1-based reduced words.
    pub fn to_json(&self, w: &CoxeterSystem) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = (0..self.len())
            .flat_map(|x| {
                self.columns[x].iter().map(move |(y, h)| {
                    json!({"y": w.labels(*y), "x": w.labels(x), "h": h})
                })
            })
            .collect();
        serde_json::Value::Array(entries)
    }
}

/// `C_x C_s` (right) or `C_s C_x` (left) in the KL basis.
pub fn kl_multiply_by_generator(w: &CoxeterSystem, kl: &KLTable, x: Elt, s: usize, side: Side) -> HeckeElt {
    let mut out = HeckeElt::zero(Basis::KazhdanLusztig);
    if w.descents(x, side).contains(s) {
        out.add_term(x, &LaurentPoly::v_plus_v_inv());
        return out;
    }
    out.add_term(w.mul_gen(x, s, side), &LaurentPoly::one());
    for &(z, m) in kl.mu_list(x) {
        if w.descents(z, side).contains(s) {
            out.add_term(z, &LaurentPoly::constant(m));
        }
    }
    out
}

/// Linear extension of [`kl_multiply_by_generator`].
pub fn kl_multiply(w: &CoxeterSystem, kl: &KLTable, a: &HeckeElt, s: usize, side: Side) -> Result<HeckeElt> {
    require_basis(a, Basis::KazhdanLusztig)?;
    let mut out = HeckeElt::zero(Basis::KazhdanLusztig);
    for (x, c) in a.iter() {
        out.add_scaled(c, &kl_multiply_by_generator(w, kl, x, s, side))?;
    }
    Ok(out)
}

/// Converts between the standard, KL and p-canonical bases.
///
/// Conversions involving `PCanonical(p)` need a table for the same prime.
pub fn change_basis(
    a: &HeckeElt,
    target: Basis,
    kl: &KLTable,
    table: Option<&PCanTable>,
) -> Result<HeckeElt> {
    if a.basis == target {
        return Ok(a.clone());
    }
    let pick_table = |p: u32| -> Result<&PCanTable> {
        if p == 0 {
            return Ok(PCanTable::identity_ref());
        }
        match table {
            Some(t) if t.prime() == p => Ok(t),
            _ => Err(Error::TableMissing(format!("{p}-canonical basis"))),
        }
    };
    let in_kl = match a.basis {
        Basis::KazhdanLusztig => a.clone(),
        Basis::Standard => standard_to_kl(a, kl),
        Basis::PCanonical(p) => {
            let t = pick_table(p)?;
            let mut out = HeckeElt::zero(Basis::KazhdanLusztig);
            for (x, c) in a.iter() {
                out.add_scaled(c, &t.pcan_in_kl(x))?;
            }
            out
        }
    };
    match target {
        Basis::KazhdanLusztig => Ok(in_kl),
        Basis::Standard => {
            let mut out = HeckeElt::zero(Basis::Standard);
            for (x, c) in in_kl.iter() {
                for (y, h) in kl.column(x) {
                    out.add_term(*y, &(c * h));
                }
            }
            Ok(out)
        }
        Basis::PCanonical(p) => {
            let t = pick_table(p)?;
            Ok(t.kl_to_pcan(&in_kl))
        }
    }
}

/// Unitriangular solve: repeatedly strip the term with the largest id.
fn standard_to_kl(a: &HeckeElt, kl: &KLTable) -> HeckeElt {
    let mut rest = a.clone();
    let mut out = HeckeElt::zero(Basis::KazhdanLusztig);
    while let Some((x, c)) = rest.top_term() {
        out.add_term(x, &c);
        for (y, h) in kl.column(x) {
            rest.add_term(*y, &-(&c * h));
        }
    }
    out
}
