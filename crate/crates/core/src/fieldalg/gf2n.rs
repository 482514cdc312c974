//! Binary extension fields GF(2^n) in a polynomial basis.
//!
//! Elements are `u64` coordinate masks over the basis `1, z, ..., z^{n-1}`,
//! so `n` is limited to 64. Hot loops work on raw masks through the
//! `*_raw` methods of [`FieldSpec`]; [`FieldElement`] bundles a mask with
//! its field and checks that operands agree.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Carry-less 64x64 -> 128 bit product.
#[inline]
pub fn clmul(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: feature presence checked at runtime just above.
            return unsafe { clmul_pclmul(a, b) };
        }
    }
    clmul_soft(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn clmul_pclmul(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::{__m128i, _mm_clmulepi64_si128, _mm_set_epi64x};
    let r = _mm_clmulepi64_si128::<0>(_mm_set_epi64x(0, a as i64), _mm_set_epi64x(0, b as i64));
    std::mem::transmute::<__m128i, u128>(r)
}

#[inline]
pub(crate) fn clmul_soft(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut b = b;
    let mut r = 0u128;
    while b != 0 {
        r ^= a << b.trailing_zeros();
        b &= b - 1;
    }
    r
}

fn degree128(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `b` in F2[x]. `b` must be nonzero.
fn polymod128(mut a: u128, b: u128) -> u128 {
    let db = degree128(b);
    while a != 0 && degree128(a) >= db {
        a ^= b << (degree128(a) - db);
    }
    a
}

fn polygcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = polymod128(a, b);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a degree-`n` polynomial over F2.
///
/// `f` is irreducible iff `x^(2^n) = x mod f` and
/// `gcd(x^(2^(n/p)) - x, f) = 1` for every prime `p | n`.
pub fn is_irreducible(red: u128, n: u32) -> bool {
    if n == 0 || n > 64 || degree128(red) != n as i32 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if red & 1 == 0 {
        return false;
    }
    let spec = FieldSpec { n, red };
    let x = 0b10u64;
    let frob_x = |k: u32| {
        let mut t = x;
        for _ in 0..k {
            t = spec.square_raw(t);
        }
        t
    };
    if frob_x(n) != x {
        return false;
    }
    prime_factors(n).into_iter().all(|p| {
        let t = frob_x(n / p) ^ x;
        t != 0 && degree128(polygcd128(red, t as u128)) == 0
    })
}

/// Field descriptor: extension degree `n` and reduction polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    n: u32,
    red: u128,
}

impl FieldSpec {
    /// Field defined by an explicit reduction mask (bit `n` must be the top bit).
    pub fn new(n: u32, red: u128) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidField(format!("degree {n} outside 1..=64")));
        }
        if degree128(red) != n as i32 {
            return Err(Error::InvalidField(format!("0x{red:x} does not have degree {n}")));
        }
        if !is_irreducible(red, n) {
            return Err(Error::InvalidField(format!("0x{red:x} is reducible")));
        }
        Ok(Self { n, red })
    }

    /// Field whose reduction polynomial is the numerically smallest
    /// irreducible degree-`n` mask.
    pub fn default_for(n: u32) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidField(format!("degree {n} outside 1..=64")));
        }
        let top = 1u128 << n;
        (0u128..top)
            .map(|low| top | low)
            .find(|&red| is_irreducible(red, n))
            .map(|red| Self { n, red })
            .ok_or_else(|| Error::InvalidField(format!("no irreducible of degree {n}")))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn reduction_poly(&self) -> u128 {
        self.red
    }

    /// Mask selecting the `n` coordinate bits.
    #[inline]
    pub fn mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Number of field elements, saturating at `u64::MAX` for n = 64.
    pub fn order(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            1u64 << self.n
        }
    }

    #[inline]
    fn low(&self) -> u64 {
        (self.red ^ (1u128 << self.n)) as u64
    }

    /// Reduce a product of two reduced elements.
    #[inline]
    pub fn reduce(&self, mut p: u128) -> u64 {
        let n = self.n;
        let mask = self.mask() as u128;
        let low = self.low();
        loop {
            let hi = p >> n;
            if hi == 0 {
                return p as u64;
            }
            p = (p & mask) ^ clmul(hi as u64, low);
        }
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        self.reduce(clmul(a, b))
    }

    #[inline]
    pub fn square_raw(&self, a: u64) -> u64 {
        self.reduce(clmul(a, a))
    }

    pub fn pow_raw(&self, a: u64, mut e: u128) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.square_raw(base);
            e >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm in F2[z]; `None` for zero.
    pub fn inv_raw(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        // Invariant: s*a = r0 and t*a = r1 (mod red).
        let (mut r0, mut r1) = (self.red, a as u128);
        let (mut s0, mut s1) = (0u128, 1u128);
        while r1 != 0 {
            let mut q = 0u128;
            let mut r = r0;
            let d1 = degree128(r1);
            while r != 0 && degree128(r) >= d1 {
                let sh = degree128(r) - d1;
                q ^= 1u128 << sh;
                r ^= r1 << sh;
            }
            let s = s0 ^ clmul128_trunc(q, s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        debug_assert_eq!(r0, 1);
        Some(polymod128(s0, self.red) as u64)
    }

    /// `a^(2^j)`.
    pub fn frobenius_raw(&self, mut a: u64, j: u64) -> u64 {
        for _ in 0..(j % self.n as u64) {
            a = self.square_raw(a);
        }
        a
    }

    /// Absolute trace `sum_{i<n} a^(2^i)`, either 0 or 1.
    pub fn trace_raw(&self, a: u64) -> u64 {
        let mut t = a;
        let mut acc = 0u64;
        for _ in 0..self.n {
            acc ^= t;
            t = self.square_raw(t);
        }
        debug_assert!(acc <= 1);
        acc
    }

    /// A root `t` of `t^2 + t = a`, or `None` when `Tr(a) = 1`.
    pub fn artin_schreier_raw(&self, a: u64) -> Option<u64> {
        if self.trace_raw(a) != 0 {
            return None;
        }
        if self.n % 2 == 1 {
            // Half trace: sum_{i=0}^{(n-1)/2} a^(4^i).
            let mut t = a;
            let mut acc = 0u64;
            for _ in 0..=(self.n - 1) / 2 {
                acc ^= t;
                t = self.square_raw(self.square_raw(t));
            }
            Some(acc)
        } else {
            let cols: Vec<u64> = (0..self.n)
                .map(|i| {
                    let b = 1u64 << i;
                    self.square_raw(b) ^ b
                })
                .collect();
            solve_f2_columns(&cols, a, self.n as usize)
        }
    }

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value & !self.mask() != 0 {
            return Err(Error::ElementOutOfRange { value, n: self.n });
        }
        Ok(FieldElement { value, spec: *self })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { value: 0, spec: *self }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { value: 1, spec: *self }
    }

    /// The basis generator `z` (equals `1 + ...` reduced when n = 1).
    pub fn generator(&self) -> FieldElement {
        FieldElement { value: self.reduce(0b10), spec: *self }
    }

    /// F2-coordinates of `a`, bit `i` = coefficient of `z^i`.
    pub fn coordinates(&self, a: u64) -> Vec<bool> {
        (0..self.n).map(|i| (a >> i) & 1 == 1).collect()
    }
}

/// Product of two polynomials truncated to 128 bits (used inside Euclid,
/// where degrees stay below 65).
fn clmul128_trunc(a: u128, b: u128) -> u128 {
    let mut r = 0u128;
    let mut a = a;
    let mut i = 0;
    while a != 0 {
        if a & 1 == 1 {
            r ^= b << i;
        }
        a >>= 1;
        i += 1;
    }
    r
}

/// Solve `sum_i x_i * cols[i] = target` over F2 for an `rows`-bit target.
pub(crate) fn solve_f2_columns(cols: &[u64], target: u64, rows: usize) -> Option<u64> {
    // Augmented rows: bits 0..k for the unknowns, bit 63 for the target.
    let k = cols.len();
    assert!(k < 64 && rows <= 64);
    let mut eqs: Vec<u64> = (0..rows)
        .map(|r| {
            let mut row = 0u64;
            for (i, c) in cols.iter().enumerate() {
                row |= ((c >> r) & 1) << i;
            }
            row | (((target >> r) & 1) << 63)
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..k {
        let Some(p) = (next..rows).find(|&r| (eqs[r] >> col) & 1 == 1) else {
            continue;
        };
        eqs.swap(next, p);
        let pr = eqs[next];
        for (r, e) in eqs.iter_mut().enumerate() {
            if r != next && (*e >> col) & 1 == 1 {
                *e ^= pr;
            }
        }
        pivots.push(col);
        next += 1;
    }
    if eqs[next..].iter().any(|e| e >> 63 == 1) {
        return None;
    }
    let mut x = 0u64;
    for (r, &col) in pivots.iter().enumerate() {
        x |= (eqs[r] >> 63) << col;
    }
    Some(x)
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gf2e:n={}:red=0x{:x}", self.n, self.red)
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("field spec `{s}`"));
        let rest = s.strip_prefix("gf2e:n=").ok_or_else(bad)?;
        let (n, red) = rest.split_once(":red=").ok_or_else(bad)?;
        let n: u32 = n.parse().map_err(|_| bad())?;
        let red = parse_hex_u128(red).ok_or_else(bad)?;
        Self::new(n, red)
    }
}

/// Parse `0x`-prefixed hexadecimal.
pub fn parse_hex_u128(s: &str) -> Option<u128> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X"))?;
    u128::from_str_radix(digits, 16).ok()
}

pub fn parse_hex_u64(s: &str) -> Option<u64> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X"))?;
    u64::from_str_radix(digits, 16).ok()
}

/// An element of GF(2^n) tagged with its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    spec: FieldSpec,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch(self.spec.to_string(), other.spec.to_string()));
        }
        Ok(())
    }

    fn with(&self, value: u64) -> Self {
        Self { value, spec: self.spec }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.value ^ other.value))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.spec.mul_raw(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        self.spec.inv_raw(self.value).map(|v| self.with(v)).ok_or(Error::ZeroInverse)
    }

    pub fn square(&self) -> Self {
        self.with(self.spec.square_raw(self.value))
    }

    pub fn pow(&self, e: u128) -> Self {
        self.with(self.spec.pow_raw(self.value, e))
    }

    /// `self^(2^j)`.
    pub fn frobenius(&self, j: u64) -> Self {
        self.with(self.spec.frobenius_raw(self.value, j))
    }

    pub fn trace(&self) -> u64 {
        self.spec.trace_raw(self.value)
    }

    /// Some `t` with `t^2 + t = self`.
    pub fn solve_artin_schreier(&self) -> Result<Self> {
        self.spec.artin_schreier_raw(self.value).map(|t| self.with(t)).ok_or(Error::NoArtinSchreierSolution)
    }

    /// Parse the `0x...` text form into the given field.
    pub fn parse(spec: FieldSpec, s: &str) -> Result<Self> {
        let v = parse_hex_u64(s.trim()).ok_or_else(|| Error::Parse(format!("field element `{s}`")))?;
        spec.element(v)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.value)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}@n={}", self.value, self.spec.n)
    }
}
