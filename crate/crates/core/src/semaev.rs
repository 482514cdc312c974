//! Summation polynomials for ordinary binary curves, built by the
//! resultant recursion `S_{k+1} = Res_X(S_k(x_1..x_{k-1}, X), S_3(x_k, x_{k+1}, X))`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fieldalg::{FieldElement, FieldSpec};
use crate::mpoly::{sylvester_resultant, MPoly, Monomial, Ring};

pub const MAX_ARITY: usize = 6;

/// `S_{arity}` in variables `x1..x_arity` for the curve constant `a6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummationPoly {
    arity: usize,
    poly: MPoly,
    a6: FieldElement,
}

impl SummationPoly {
    /// Wrap an arbitrary polynomial; used to descend single terms.
    #[cfg(test)]
    pub(crate) fn from_parts(arity: usize, poly: MPoly, a6: FieldElement) -> Self {
        Self { arity, poly, a6 }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    pub fn a6(&self) -> FieldElement {
        self.a6
    }

    pub fn spec(&self) -> FieldSpec {
        self.a6.spec()
    }

    /// Expected degree in each variable, `2^(arity - 2)`.
    pub fn expected_var_degree(&self) -> u32 {
        1 << (self.arity - 2)
    }

    pub fn eval(&self, xs: &[FieldElement]) -> Result<FieldElement> {
        self.poly.eval(xs)
    }
}

/// `S_2 = x1 + x2`. `a6` only fixes the field and is carried along.
pub fn s2(a6: FieldElement) -> SummationPoly {
    let ring = Ring::new(a6.spec(), 2).expect("two slots");
    let poly = MPoly::var(ring, 0).add(&MPoly::var(ring, 1)).expect("same ring");
    SummationPoly { arity: 2, poly, a6 }
}

/// `S_3 = (x1^2 + x2^2) x3^2 + x1 x2 x3 + x1^2 x2^2 + a6`.
pub fn s3(a6: FieldElement) -> Result<SummationPoly> {
    if a6.is_zero() {
        return Err(Error::ZeroA6);
    }
    let ring = Ring::new(a6.spec(), 3)?;
    let m = |e: [u32; 3]| Monomial::from_exponents(&e).expect("small exponents");
    let poly = MPoly::from_terms(
        ring,
        vec![(m([2, 0, 2]), 1), (m([0, 2, 2]), 1), (m([1, 1, 1]), 1), (m([2, 2, 0]), 1), (Monomial::ONE, a6.value())],
    );
    Ok(SummationPoly { arity: 3, poly, a6 })
}

/// `S_arity` for `2 <= arity <= 6`.
pub fn semaev_poly(arity: usize, a6: FieldElement) -> Result<SummationPoly> {
    if !(2..=MAX_ARITY).contains(&arity) {
        return Err(Error::ArityOutOfRange(arity));
    }
    if a6.is_zero() {
        return Err(Error::ZeroA6);
    }
    let mut current = if arity == 2 { s2(a6) } else { s3(a6)? };
    while current.arity < arity {
        current = next_summation_poly(&current)?;
    }
    Ok(current)
}

/// One recursion step `S_k -> S_{k+1}`.
pub fn next_summation_poly(sk: &SummationPoly) -> Result<SummationPoly> {
    let k = sk.arity;
    let spec = sk.spec();
    let s3 = s3(sk.a6)?;
    // Work ring: x1..x_{k+1} and the eliminand X.
    let work = Ring::with_eliminand(spec, k + 1)?;
    let x_slot = k + 1;
    // S_k(x1, .., x_{k-1}, X)
    let mut map: Vec<usize> = (0..k - 1).collect();
    map.push(x_slot);
    let f = sk.poly.remap(work, &map)?;
    // S_3(x_k, x_{k+1}, X)
    let g = s3.poly.remap(work, &[k - 1, k, x_slot])?;
    let res = sylvester_resultant(&f, &g)?;
    let target = Ring::new(spec, k + 1)?;
    let mut back: Vec<usize> = (0..=k).collect();
    back.push(0);
    let poly = res.remap(target, &back)?;
    Ok(SummationPoly { arity: k + 1, poly, a6: sk.a6 })
}

/// Coefficient extraction for the two monomials singled out in the
/// degree analysis of `S_{m+1}`, plus every monomial divisible by
/// `(x1..xm)^(2^(m-1) - 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub m: usize,
    /// Coefficient of `(x1..xm)^(2^(m-1))`.
    pub coeff_full_power: String,
    /// Coefficient of `(x1..xm)^(2^(m-1)-1) * x_{m+1}`.
    pub coeff_fall_monomial: String,
    /// Exponent vectors of all multiples of `(x1..xm)^(2^(m-1)-1)`.
    pub multiples: Vec<Vec<u32>>,
    #[serde(skip)]
    pub full_power_value: u64,
    #[serde(skip)]
    pub fall_value: u64,
}

impl LemmaReport {
    /// Exponent vectors of the two expected multiples.
    pub fn expected_multiples(&self) -> [Vec<u32>; 2] {
        let e = 1u32 << (self.m - 1);
        let mut full = vec![e; self.m];
        full.push(0);
        let mut fall = vec![e - 1; self.m];
        fall.push(1);
        [full, fall]
    }

    pub fn holds(&self) -> bool {
        let mut got = self.multiples.clone();
        got.sort();
        let mut want = self.expected_multiples().to_vec();
        want.sort();
        self.full_power_value != 0 && self.fall_value != 0 && got == want
    }
}

pub fn lemma_monomial_check(s: &SummationPoly) -> Result<LemmaReport> {
    if s.arity < 4 {
        return Err(Error::ArityOutOfRange(s.arity));
    }
    let m = s.arity - 1;
    let e = 1u32 << (m - 1);
    let mut full = vec![e; m];
    full.push(0);
    let mut fall = vec![e - 1; m];
    fall.push(1);
    let full_power_value = s.poly.coeff(&Monomial::from_exponents(&full)?);
    let fall_value = s.poly.coeff(&Monomial::from_exponents(&fall)?);
    let multiples = s
        .poly
        .terms()
        .iter()
        .map(|(mono, _)| mono.exponents(s.arity))
        .filter(|ex| ex[..m].iter().all(|&x| x >= e - 1))
        .collect();
    let spec = s.spec();
    Ok(LemmaReport {
        m,
        coeff_full_power: spec.element(full_power_value)?.to_string(),
        coeff_fall_monomial: spec.element(fall_value)?.to_string(),
        multiples,
        full_power_value,
        fall_value,
    })
}
