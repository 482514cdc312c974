//! Sparse multivariate polynomials over GF(2^n).
//!
//! A [`Ring`] has up to eight variable slots `x1..xk` plus an optional
//! distinguished eliminand `X` in the last slot. Monomials pack one byte of
//! exponent per slot into a `u64`, so products multiply by integer
//! addition. Terms are kept sorted by the packed key; grevlex order is only
//! used for the text form.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fieldalg::{parse_hex_u64, FieldElement, FieldSpec};

pub const MAX_SLOTS: usize = 8;
const HIGH_BITS: u64 = 0x8080_8080_8080_8080;

/// Exponent vector packed one byte per slot (slot 0 in the low byte).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_SLOTS {
            return Err(Error::LengthMismatch { expected: MAX_SLOTS, got: exps.len() });
        }
        let mut packed = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            if e > 127 {
                return Err(Error::ExponentOverflow);
            }
            packed |= (e as u64) << (8 * i);
        }
        Ok(Self(packed))
    }

    pub fn var(slot: usize, e: u32) -> Self {
        debug_assert!(slot < MAX_SLOTS && e < 128);
        Self((e as u64) << (8 * slot))
    }

    #[inline]
    pub fn exponent(&self, slot: usize) -> u32 {
        ((self.0 >> (8 * slot)) & 0xff) as u32
    }

    pub fn exponents(&self, slots: usize) -> Vec<u32> {
        (0..slots).map(|i| self.exponent(i)).collect()
    }

    pub fn total_degree(&self) -> u32 {
        (0..MAX_SLOTS).map(|i| self.exponent(i)).sum()
    }

    /// Product; fails if any exponent would leave the 7-bit range.
    #[inline]
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let s = self.0 + other.0;
        if (self.0 | other.0 | s) & HIGH_BITS != 0 {
            return Err(Error::ExponentOverflow);
        }
        Ok(Self(s))
    }

    pub fn with_exponent(&self, slot: usize, e: u32) -> Self {
        debug_assert!(e < 128);
        Self((self.0 & !(0xffu64 << (8 * slot))) | ((e as u64) << (8 * slot)))
    }

    /// Does `self` divide `other`?
    pub fn divides(&self, other: &Self) -> bool {
        (0..MAX_SLOTS).all(|i| self.exponent(i) <= other.exponent(i))
    }

    /// Graded reverse lexicographic comparison over the first `slots` slots.
    pub fn grevlex_cmp(&self, other: &Self, slots: usize) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| {
            for i in (0..slots).rev() {
                match self.exponent(i).cmp(&other.exponent(i)) {
                    Ordering::Equal => continue,
                    o => return o.reverse(),
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents(MAX_SLOTS))
    }
}

/// Variable layout plus coefficient field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Ring {
    slots: usize,
    eliminand: bool,
    spec: FieldSpec,
}

impl Ring {
    /// `k` variables `x1..xk`, no eliminand.
    pub fn new(spec: FieldSpec, k: usize) -> Result<Self> {
        if k > MAX_SLOTS {
            return Err(Error::TooManyVariables(k));
        }
        Ok(Self { slots: k, eliminand: false, spec })
    }

    /// `k` variables `x1..xk` followed by the eliminand `X`.
    pub fn with_eliminand(spec: FieldSpec, k: usize) -> Result<Self> {
        if k + 1 > MAX_SLOTS {
            return Err(Error::TooManyVariables(k + 1));
        }
        Ok(Self { slots: k + 1, eliminand: true, spec })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// Total slot count, eliminand included.
    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Number of ordinary variables `x1..xk`.
    pub fn num_vars(&self) -> usize {
        self.slots - self.eliminand as usize
    }

    pub fn eliminand_slot(&self) -> Option<usize> {
        self.eliminand.then(|| self.slots - 1)
    }

    fn slot_name(&self, slot: usize) -> String {
        if Some(slot) == self.eliminand_slot() {
            "X".to_string()
        } else {
            format!("x{}", slot + 1)
        }
    }
}

/// Sparse polynomial; terms sorted by packed monomial key, no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    ring: Ring,
    terms: Vec<(Monomial, u64)>,
}

fn normalize(mut terms: Vec<(Monomial, u64)>) -> Vec<(Monomial, u64)> {
    terms.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(Monomial, u64)> = Vec::with_capacity(terms.len());
    for (m, c) in terms {
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

impl MPoly {
    pub fn zero(ring: Ring) -> Self {
        Self { ring, terms: Vec::new() }
    }

    pub fn constant(ring: Ring, c: u64) -> Self {
        Self::from_terms(ring, vec![(Monomial::ONE, c)])
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, 1)
    }

    /// The variable in `slot` to the first power.
    pub fn var(ring: Ring, slot: usize) -> Self {
        debug_assert!(slot < ring.slots);
        Self::from_terms(ring, vec![(Monomial::var(slot, 1), 1)])
    }

    /// Build from raw `(monomial, coefficient mask)` pairs; duplicates are summed.
    pub fn from_terms(ring: Ring, terms: Vec<(Monomial, u64)>) -> Self {
        Self { ring, terms: normalize(terms) }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
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

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.binary_search_by_key(m, |t| t.0).map_or(0, |i| self.terms[i].1)
    }

    pub fn degree_in(&self, slot: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(slot)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
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
                    let c = a[i].1 ^ b[j].1;
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
        Ok(Self { ring: self.ring, terms: out })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ring));
        }
        let f = self.ring.spec;
        let products = self.terms.len() * other.terms.len();
        if products <= 1 << 22 {
            let mut raw = Vec::with_capacity(products);
            for (ma, ca) in &self.terms {
                for (mb, cb) in &other.terms {
                    raw.push((ma.mul(mb)?, f.mul_raw(*ca, *cb)));
                }
            }
            return Ok(Self { ring: self.ring, terms: normalize(raw) });
        }
        let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(self.terms.len().max(other.terms.len()) * 4);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)?).or_insert(0) ^= f.mul_raw(*ca, *cb);
            }
        }
        Ok(Self::from_terms(self.ring, acc.into_iter().collect()))
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.ring.spec;
        Self::from_terms(self.ring, self.terms.iter().map(|(m, x)| (*m, f.mul_raw(*x, c))).collect())
    }

    /// Evaluate at a point with one value per slot.
    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        let f = self.ring.spec;
        if point.len() != self.ring.slots {
            return Err(Error::LengthMismatch { expected: self.ring.slots, got: point.len() });
        }
        if let Some(p) = point.iter().find(|p| p.spec() != f) {
            return Err(Error::FieldMismatch(p.spec().to_string(), f.to_string()));
        }
        let powers: Vec<Vec<u64>> = (0..self.ring.slots)
            .map(|i| {
                let d = self.degree_in(i) as usize;
                let mut pw = vec![1u64; d + 1];
                for e in 1..=d {
                    pw[e] = f.mul_raw(pw[e - 1], point[i].value());
                }
                pw
            })
            .collect();
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, pw) in powers.iter().enumerate() {
                let e = m.exponent(i) as usize;
                if e > 0 {
                    t = f.mul_raw(t, pw[e]);
                }
            }
            acc ^= t;
        }
        f.element(acc)
    }

    /// Coefficients `[c_0, .., c_d]` of `self` viewed as a univariate in the
    /// eliminand; each `c_i` is X-free and lives in the same ring.
    pub fn coeffs_in_x(&self) -> Result<Vec<MPoly>> {
        let x =
            self.ring.eliminand_slot().ok_or_else(|| Error::InvalidParameter("ring has no eliminand slot".into()))?;
        let d = self.degree_in(x) as usize;
        let mut buckets: Vec<Vec<(Monomial, u64)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.exponent(x) as usize].push((m.with_exponent(x, 0), *c));
        }
        Ok(buckets.into_iter().map(|t| MPoly::from_terms(self.ring, t)).collect())
    }

    /// Inverse of [`coeffs_in_x`](Self::coeffs_in_x): `sum_i c_i X^i`.
    pub fn from_coeffs_in_x(ring: Ring, coeffs: &[MPoly]) -> Result<MPoly> {
        let x = ring.eliminand_slot().ok_or_else(|| Error::InvalidParameter("ring has no eliminand slot".into()))?;
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            if c.ring != ring {
                return Err(Error::RingMismatch);
            }
            let xi = Monomial::var(x, i as u32);
            for (m, v) in &c.terms {
                terms.push((m.mul(&xi)?, *v));
            }
        }
        Ok(MPoly::from_terms(ring, terms))
    }

    /// Move into `target`, sending source slot `i` to `slot_map[i]`.
    pub fn remap(&self, target: Ring, slot_map: &[usize]) -> Result<MPoly> {
        if slot_map.len() != self.ring.slots {
            return Err(Error::LengthMismatch { expected: self.ring.slots, got: slot_map.len() });
        }
        if target.spec != self.ring.spec {
            return Err(Error::RingMismatch);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut out = Monomial::ONE;
            for (i, &t) in slot_map.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    if t >= target.slots {
                        return Err(Error::TooManyVariables(t + 1));
                    }
                    out = out.mul(&Monomial::var(t, e))?;
                }
            }
            terms.push((out, *c));
        }
        Ok(MPoly::from_terms(target, terms))
    }

    /// Terms in descending grevlex order.
    pub fn grevlex_terms(&self) -> Vec<(Monomial, u64)> {
        let slots = self.ring.slots;
        let mut t = self.terms.clone();
        t.sort_by(|a, b| b.0.grevlex_cmp(&a.0, slots));
        t
    }

    /// Parse the text form produced by `Display`.
    pub fn parse(ring: Ring, s: &str) -> Result<MPoly> {
        let s = s.trim();
        if s == "0" {
            return Ok(MPoly::zero(ring));
        }
        let bad = |t: &str| Error::Parse(format!("polynomial term `{t}`"));
        let mut terms = Vec::new();
        for term in s.split(" + ") {
            let mut coeff = 1u64;
            let mut mono = Monomial::ONE;
            for factor in term.trim().split('*') {
                if factor.starts_with("0x") {
                    coeff = parse_hex_u64(factor).ok_or_else(|| bad(term))?;
                    ring.spec.element(coeff)?;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().map_err(|_| bad(term))?),
                    None => (factor, 1),
                };
                let slot = if name == "X" {
                    ring.eliminand_slot().ok_or_else(|| bad(term))?
                } else {
                    let i: usize = name.strip_prefix('x').and_then(|i| i.parse().ok()).ok_or_else(|| bad(term))?;
                    if i == 0 || i > ring.num_vars() {
                        return Err(bad(term));
                    }
                    i - 1
                };
                if e >= 128 {
                    return Err(Error::ExponentOverflow);
                }
                mono = mono.mul(&Monomial::var(slot, e))?;
            }
            terms.push((mono, coeff));
        }
        Ok(MPoly::from_terms(ring, terms))
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let slots = self.ring.slots;
        for (k, (m, c)) in self.grevlex_terms().iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut parts = Vec::new();
            if *c != 1 || *m == Monomial::ONE {
                parts.push(format!("0x{c:x}"));
            }
            for i in 0..slots {
                let e = m.exponent(i);
                if e > 0 {
                    parts.push(format!("{}^{e}", self.ring.slot_name(i)));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{} terms]({})", self.terms.len(), self)
    }
}

/// Square matrix of polynomials over one ring.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    ring: Ring,
    rows: Vec<Vec<MPoly>>,
}

impl PolyMatrix {
    pub fn new(ring: Ring, rows: Vec<Vec<MPoly>>) -> Result<Self> {
        let k = rows.len();
        for row in &rows {
            if row.len() != k {
                return Err(Error::NotSquare { rows: k, cols: row.len() });
            }
            if row.iter().any(|e| e.ring != ring) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(Self { ring, rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &MPoly {
        &self.rows[r][c]
    }

    /// Exact determinant by row-wise cofactor expansion, memoized on the set
    /// of still-unused columns. Signs vanish in characteristic 2.
    pub fn det(&self) -> Result<MPoly> {
        let k = self.size();
        if k > 12 {
            return Err(Error::MatrixTooLarge(k));
        }
        if k == 0 {
            return Ok(MPoly::one(self.ring));
        }
        // minors[S] = det of rows (k-|S|)..k restricted to column set S.
        let full = (1usize << k) - 1;
        let mut minors: HashMap<usize, MPoly> = HashMap::new();
        minors.insert(0, MPoly::one(self.ring));
        let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
        for s in 0..=full {
            by_size[s.count_ones() as usize].push(s);
        }
        for (size, group) in by_size.iter().enumerate().skip(1) {
            let row = k - size;
            let mut next: HashMap<usize, MPoly> = HashMap::new();
            for &s in group {
                if size == k && s != full {
                    continue;
                }
                let mut acc = MPoly::zero(self.ring);
                for c in 0..k {
                    if s & (1 << c) == 0 || self.rows[row][c].is_zero() {
                        continue;
                    }
                    let Some(minor) = minors.get(&(s & !(1 << c))) else {
                        continue;
                    };
                    if minor.is_zero() {
                        continue;
                    }
                    acc = acc.add(&self.rows[row][c].mul(minor)?)?;
                }
                next.insert(s, acc);
            }
            minors = next;
        }
        Ok(minors.remove(&full).unwrap_or_else(|| MPoly::zero(self.ring)))
    }
}

/// Determinant of a square polynomial matrix.
pub fn det_poly(m: &PolyMatrix) -> Result<MPoly> {
    m.det()
}

/// Sylvester matrix of `f` and `g` with respect to the eliminand.
pub fn sylvester_matrix(f: &MPoly, g: &MPoly) -> Result<PolyMatrix> {
    f.check(g)?;
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ring = f.ring;
    let fc = f.coeffs_in_x()?;
    let gc = g.coeffs_in_x()?;
    let (df, dg) = (fc.len() - 1, gc.len() - 1);
    let k = df + dg;
    let mut rows = vec![vec![MPoly::zero(ring); k]; k];
    for i in 0..dg {
        for (j, c) in fc.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..df {
        for (j, c) in gc.iter().rev().enumerate() {
            rows[dg + i][i + j] = c.clone();
        }
    }
    PolyMatrix::new(ring, rows)
}

/// `Res_X(f, g)` as an X-free polynomial in the same ring.
pub fn sylvester_resultant(f: &MPoly, g: &MPoly) -> Result<MPoly> {
    sylvester_matrix(f, g)?.det()
}
