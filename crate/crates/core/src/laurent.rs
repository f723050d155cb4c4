//! Exact Laurent polynomials in one variable `v` with integer coefficients.
//!
//! Coefficients are `i64` with checked arithmetic: an overflow panics with a
//! descriptive message instead of wrapping. The `checked_*` methods expose the
//! same operations as fallible calls.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// Raised when an exact coefficient does not fit into 64 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("Laurent polynomial coefficient overflow")]
pub struct Overflow;

/// An element of `Z[v, v^-1]`.
///
/// Stored as `(exponent, coefficient)` pairs sorted by exponent with no zero
/// coefficient, so structural equality is polynomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<(i32, i64)>", into = "Vec<(i32, i64)>")]
pub struct LaurentPoly {
    terms: Vec<(i32, i64)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The variable `v`.
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    /// `v + v^-1`, the eigenvalue of `C_s` on its descent space.
    pub fn v_plus_v_inv() -> Self {
        Self { terms: vec![(-1, 1), (1, 1)] }
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * v^exp`.
    pub fn monomial(c: i64, exp: i32) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Self { terms: vec![(exp, c)] }
        }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// summing repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut raw: Vec<(i32, i64)> = terms.into_iter().collect();
        raw.sort_by_key(|&(e, _)| e);
        let mut out: Vec<(i32, i64)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match out.last_mut() {
                Some(last) if last.0 == e => {
                    last.1 = last.1.checked_add(c).expect("Laurent polynomial coefficient overflow")
                }
                _ => out.push((e, c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        Self { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [(0, 1)]
    }

    /// Sorted `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> &[(i32, i64)] {
        &self.terms
    }

    pub fn coefficient_of(&self, exponent: i32) -> i64 {
        match self.terms.binary_search_by_key(&exponent, |&(e, _)| e) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// The bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().rev().map(|&(e, c)| (-e, c)).collect() }
    }

    pub fn is_self_dual(&self) -> bool {
        let n = self.terms.len();
        (0..n).all(|i| {
            let (e, c) = self.terms[i];
            let (e2, c2) = self.terms[n - 1 - i];
            e == -e2 && c == c2
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c >= 0)
    }

    /// True iff every exponent is strictly positive, i.e. the polynomial lies in `vZ[v]`.
    pub fn in_v_z_v(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e > 0)
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self { terms: self.terms.iter().map(|&(e, c)| (e + k, c)).collect() }
    }

    /// Multiplies by an integer scalar.
    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|&(e, c)| (e, c.checked_mul(k).expect("Laurent polynomial coefficient overflow")))
                .collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Overflow> {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1.checked_add(b[j].1).ok_or(Overflow)?;
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Self { terms: out })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Overflow> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let lo = self.terms[0].0 + other.terms[0].0;
        let hi = self.terms[self.terms.len() - 1].0 + other.terms[other.terms.len() - 1].0;
        let mut dense = vec![0i64; (hi - lo + 1) as usize];
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &other.terms {
                let slot = &mut dense[(e1 + e2 - lo) as usize];
                let prod = c1.checked_mul(c2).ok_or(Overflow)?;
                *slot = slot.checked_add(prod).ok_or(Overflow)?;
            }
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(i, c)| (i as i32 + lo, c))
            .collect();
        Ok(Self { terms })
    }

    /// `self += factor * other`, the inner loop of every basis change.
    pub fn add_scaled(&mut self, factor: &Self, other: &Self) {
        if factor.is_zero() || other.is_zero() {
            return;
        }
        let prod = factor * other;
        *self += &prod;
    }
}

impl From<Vec<(i32, i64)>> for LaurentPoly {
    fn from(terms: Vec<(i32, i64)>) -> Self {
        Self::from_terms(terms)
    }
}

impl From<LaurentPoly> for Vec<(i32, i64)> {
    fn from(p: LaurentPoly) -> Self {
        p.terms
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("Laurent polynomial coefficient overflow")
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self + rhs;
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|&(e, c)| (e, c.checked_neg().expect("Laurent polynomial coefficient overflow")))
                .collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self - rhs;
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("Laurent polynomial coefficient overflow")
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    /// Highest degree first, e.g. `v^2 + 2 + v^-2` or `-v + v^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let var = match e {
                0 => String::new(),
                1 => "v".to_string(),
                _ => format!("v^{e}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}{var}")?;
            }
        }
        Ok(())
    }
}

/// Error from parsing a Laurent polynomial.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a Laurent polynomial in v")]
pub struct ParseLaurentError(pub String);

impl FromStr for LaurentPoly {
    type Err = ParseLaurentError;

    /// Accepts the [`Display`](fmt::Display) form, e.g. `v + v^-1`, `-2v^3 + 1`, `0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseLaurentError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut out = LaurentPoly::zero();
        for term in terms {
            let (sign, body) = match term.as_bytes().first() {
                Some(b'-') => (-1, &term[1..]),
                Some(b'+') => (1, &term[1..]),
                _ => (1, term),
            };
            let (coeff, exp) = match body.find('v') {
                None => (body.parse::<i64>().map_err(|_| err())?, 0),
                Some(k) => {
                    let c = if k == 0 { 1 } else { body[..k].parse::<i64>().map_err(|_| err())? };
                    let rest = &body[k + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(err)?.parse::<i32>().map_err(|_| err())?
                    };
                    (c, e)
                }
            };
            out = out.checked_add(&LaurentPoly::monomial(sign * coeff, exp)).map_err(|_| err())?;
        }
        Ok(out)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn add_examples() {
        let v = LaurentPoly::v();
        let vi = p(&[(-1, 1)]);
        assert_eq!(&v + &vi, p(&[(-1, 1), (1, 1)]));
        assert!((&v + &(-&v)).is_zero());
        let one_v = p(&[(0, 1), (1, 1)]);
        assert_eq!(&one_v + &one_v, p(&[(0, 2), (1, 2)]));
    }

    #[test]
    fn mul_examples() {
        let q = LaurentPoly::v_plus_v_inv();
        assert_eq!(&q * &q, p(&[(-2, 1), (0, 2), (2, 1)]));
        assert!((&q * &LaurentPoly::zero()).is_zero());
        let d = p(&[(-1, 1), (1, -1)]);
        assert_eq!(&d * &LaurentPoly::v(), p(&[(0, 1), (2, -1)]));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(LaurentPoly::v().bar(), p(&[(-1, 1)]));
        let sym = p(&[(-1, 1), (0, 1), (1, 1)]);
        assert_eq!(sym.bar(), sym);
        assert_eq!(p(&[(2, 3)]).bar(), p(&[(-2, 3)]));
    }

    #[test]
    fn predicates() {
        assert!(LaurentPoly::v_plus_v_inv().is_self_dual());
        assert!(!LaurentPoly::v().is_self_dual());
        assert!(LaurentPoly::zero().is_self_dual());
        assert!(p(&[(0, 1), (2, 1)]).is_nonnegative());
        assert!(!p(&[(-1, 1), (1, -1)]).is_nonnegative());
        assert!(LaurentPoly::zero().is_nonnegative());
    }

    #[test]
    fn coefficient_lookup() {
        let a = p(&[(3, 1), (1, 1)]);
        assert_eq!(a.coefficient_of(1), 1);
        assert_eq!(a.coefficient_of(2), 0);
        assert_eq!(LaurentPoly::zero().coefficient_of(0), 0);
    }

    #[test]
    fn overflow_is_reported() {
        let big = LaurentPoly::constant(i64::MAX);
        assert_eq!(big.checked_add(&LaurentPoly::one()), Err(Overflow));
        assert_eq!(big.checked_mul(&LaurentPoly::constant(2)), Err(Overflow));
    }

    #[test]
    fn display_and_json() {
        assert_eq!(p(&[(-2, 1), (0, 2), (2, 1)]).to_string(), "v^2 + 2 + v^-2");
        assert_eq!(p(&[(-1, 1), (1, -1)]).to_string(), "-v + v^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        let json = serde_json::to_string(&LaurentPoly::v_plus_v_inv()).unwrap();
        assert_eq!(json, "[[-1,1],[1,1]]");
        let back: LaurentPoly = serde_json::from_str("[[1,1],[-1,1],[0,0]]").unwrap();
        assert_eq!(back, LaurentPoly::v_plus_v_inv());
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-4i32..=4, -5i64..=5), 0..5).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn display_parses_back(terms in proptest::collection::vec((-5i32..6, -4i64..5), 0..5)) {
            let p = terms.iter().fold(LaurentPoly::zero(), |acc, &(e, c)| acc + LaurentPoly::monomial(c, e));
            prop_assert_eq!(p.to_string().parse::<LaurentPoly>().unwrap(), p);
        }

        #[test]
        fn bar_is_involutive_ring_hom(a in small_poly(), b in small_poly()) {
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        }

        #[test]
        fn canonical_form_has_no_zeros(a in small_poly(), b in small_poly()) {
            let s = &a - &b;
            prop_assert!(s.terms().iter().all(|&(_, c)| c != 0));
            prop_assert!(s.terms().windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert_eq!(s.is_zero(), a == b);
        }
    }
}
