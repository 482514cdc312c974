//! Multilinear polynomials in up to 64 Boolean variables.
//!
//! A monomial is a bitmask of the variables it contains. Two products are
//! supported: the multilinear one (`y^2 = y`, union of masks) used for the
//! descended systems, and the squares-vanish one (`y^2 = 0`, overlapping
//! masks give zero) of the associated graded ring.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::fieldalg::FieldSpec;

/// Variable set of a multilinear monomial.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BoolMonomial(pub u64);

impl BoolMonomial {
    pub const ONE: BoolMonomial = BoolMonomial(0);

    pub fn var(v: usize) -> Self {
        debug_assert!(v < 64);
        Self(1 << v)
    }

    pub fn from_vars(vars: &[usize]) -> Self {
        Self(vars.iter().fold(0, |acc, &v| acc | (1u64 << v)))
    }

    pub fn degree(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> {
        let mut x = self.0;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let v = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(v)
        })
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Sort key for grevlex with `y_0 < y_1 < ...`: degree first, then the
    /// monomial containing the smallest differing variable is smaller.
    #[inline]
    pub fn grevlex_key(&self) -> (u32, u64) {
        (self.0.count_ones(), (!self.0).reverse_bits())
    }

    pub fn grevlex_cmp(&self, other: &Self) -> Ordering {
        self.grevlex_key().cmp(&other.grevlex_key())
    }
}

impl fmt::Debug for BoolMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<usize> = self.vars().collect();
        write!(f, "y{v:?}")
    }
}

impl fmt::Display for BoolMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vars().map(|v| v.to_string()).collect();
        write!(f, "({})", v.join(","))
    }
}

/// Polynomial over F2: the set of its monomials, kept in descending grevlex
/// order so the leading monomial comes first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BoolPoly {
    terms: Vec<BoolMonomial>,
}

fn sort_desc(v: &mut [BoolMonomial]) {
    v.sort_unstable_by_key(|m| std::cmp::Reverse(m.grevlex_key()));
}

impl BoolPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self { terms: vec![BoolMonomial::ONE] }
    }

    pub fn var(v: usize) -> Self {
        Self { terms: vec![BoolMonomial::var(v)] }
    }

    /// Build from monomials; pairs of equal monomials cancel.
    pub fn from_monomials<I: IntoIterator<Item = BoolMonomial>>(it: I) -> Self {
        let mut terms: Vec<BoolMonomial> = it.into_iter().collect();
        sort_desc(&mut terms);
        let mut out: Vec<BoolMonomial> = Vec::with_capacity(terms.len());
        for t in terms {
            if out.last() == Some(&t) {
                out.pop();
            } else {
                out.push(t);
            }
        }
        Self { terms: out }
    }

    /// Caller guarantees distinct monomials in descending grevlex order.
    pub(crate) fn from_sorted_unchecked(terms: Vec<BoolMonomial>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].grevlex_key() > w[1].grevlex_key()));
        Self { terms }
    }

    pub fn terms(&self) -> &[BoolMonomial] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<BoolMonomial> {
        self.terms.first().copied()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(BoolMonomial::degree)
    }

    pub fn contains(&self, m: &BoolMonomial) -> bool {
        self.terms.iter().any(|t| t == m)
    }

    /// Union of variable sets over all terms.
    pub fn support(&self) -> u64 {
        self.terms.iter().fold(0, |acc, m| acc | m.0)
    }

    pub fn homogeneous_part(&self, d: u32) -> BoolPoly {
        Self { terms: self.terms.iter().copied().filter(|m| m.degree() == d).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].grevlex_key().cmp(&b[j].grevlex_key()) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { terms: out }
    }

    /// `u * self` with `y^2 = y`.
    pub fn mul_monomial(&self, u: BoolMonomial) -> Self {
        Self::from_monomials(self.terms.iter().map(|t| BoolMonomial(t.0 | u.0)))
    }

    /// `u * self` with `y^2 = 0`.
    pub fn mul_monomial_graded(&self, u: BoolMonomial) -> Self {
        let mut terms: Vec<BoolMonomial> =
            self.terms.iter().filter(|t| t.0 & u.0 == 0).map(|t| BoolMonomial(t.0 | u.0)).collect();
        if self.is_homogeneous() {
            // Order is preserved among same-degree disjoint products.
            Self { terms }
        } else {
            sort_desc(&mut terms);
            Self { terms }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_monomials(self.terms.iter().flat_map(|a| other.terms.iter().map(move |b| BoolMonomial(a.0 | b.0))))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.first().is_none_or(|f| self.terms.iter().all(|t| t.degree() == f.degree()))
    }

    /// Value at the 0/1 point whose set variables are `assignment`.
    pub fn eval(&self, assignment: u64) -> bool {
        self.terms.iter().filter(|m| m.0 & !assignment == 0).count() % 2 == 1
    }

    /// Parse `(i,j,..) + (k) + ()`, or `0`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = Vec::new();
        for t in s.split(" + ") {
            let inner = t
                .trim()
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("monomial `{t}`")))?;
            let mut mask = 0u64;
            if !inner.is_empty() {
                for v in inner.split(',') {
                    let v: usize = v.trim().parse().map_err(|_| Error::Parse(format!("monomial `{t}`")))?;
                    if v >= 64 {
                        return Err(Error::TooManyVariables(v + 1));
                    }
                    mask |= 1 << v;
                }
            }
            out.push(BoolMonomial(mask));
        }
        Ok(Self::from_monomials(out))
    }
}

impl fmt::Display for BoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for BoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolPoly({self})")
    }
}

/// Multilinear polynomial with GF(2^n) coefficients; terms sorted by mask.
#[derive(Clone, PartialEq, Eq)]
pub struct GfBoolPoly {
    spec: FieldSpec,
    terms: Vec<(u64, u64)>,
}

fn merge_gf(mut raw: Vec<(u64, u64)>) -> Vec<(u64, u64)> {
    raw.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(u64, u64)> = Vec::with_capacity(raw.len());
    for (m, c) in raw {
        match out.last_mut() {
            Some(last) if last.0 == m => last.1 ^= c,
            _ => {
                if out.last().is_some_and(|l| l.1 == 0) {
                    out.pop();
                }
                out.push((m, c));
            }
        }
    }
    if out.last().is_some_and(|l| l.1 == 0) {
        out.pop();
    }
    out
}

impl GfBoolPoly {
    pub fn zero(spec: FieldSpec) -> Self {
        Self { spec, terms: Vec::new() }
    }

    pub fn constant(spec: FieldSpec, c: u64) -> Self {
        Self::from_terms(spec, vec![(0, c)])
    }

    pub fn from_terms(spec: FieldSpec, terms: Vec<(u64, u64)>) -> Self {
        Self { spec, terms: merge_gf(terms) }
    }

    /// Lift an F2 polynomial.
    pub fn from_bool(spec: FieldSpec, p: &BoolPoly) -> Self {
        Self::from_terms(spec, p.terms().iter().map(|m| (m.0, 1)).collect())
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// `(mask, coefficient)` pairs sorted by mask.
    pub fn terms(&self) -> &[(u64, u64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.count_ones()).max()
    }

    pub fn coeff(&self, mask: u64) -> u64 {
        self.terms.binary_search_by_key(&mask, |t| t.0).map_or(0, |i| self.terms[i].1)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch(self.spec.to_string(), other.spec.to_string()));
        }
        let mut raw = self.terms.clone();
        raw.extend_from_slice(&other.terms);
        Ok(Self { spec: self.spec, terms: merge_gf(raw) })
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.spec;
        Self::from_terms(f, self.terms.iter().map(|(m, x)| (*m, f.mul_raw(*x, c))).collect())
    }

    fn product(&self, other: &Self, graded: bool) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch(self.spec.to_string(), other.spec.to_string()));
        }
        let f = self.spec;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if graded && ma & mb != 0 {
                    continue;
                }
                raw.push((ma | mb, f.mul_raw(*ca, *cb)));
            }
        }
        Ok(Self { spec: f, terms: merge_gf(raw) })
    }

    /// Product with `y^2 = y`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.product(other, false)
    }

    /// Product with `y^2 = 0`.
    pub fn mul_graded(&self, other: &Self) -> Result<Self> {
        self.product(other, true)
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self { spec: self.spec, terms: self.terms.iter().copied().filter(|t| t.0.count_ones() == d).collect() }
    }

    /// Split into the `n` F2 polynomials of the basis coordinates.
    pub fn coordinates(&self) -> Vec<BoolPoly> {
        (0..self.spec.n())
            .map(|k| {
                BoolPoly::from_monomials(
                    self.terms.iter().filter(|(_, c)| (c >> k) & 1 == 1).map(|(m, _)| BoolMonomial(*m)),
                )
            })
            .collect()
    }

    /// Value at a 0/1 point.
    pub fn eval(&self, assignment: u64) -> u64 {
        self.terms.iter().filter(|(m, _)| m & !assignment == 0).fold(0, |acc, (_, c)| acc ^ c)
    }
}

impl fmt::Debug for GfBoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("0x{c:x}*{}", BoolMonomial(*m))).collect();
        write!(f, "GfBoolPoly[{}]", parts.join(" + "))
    }
}
