//! Weil descent of `S_{m+1}(x_1, .., x_m, c)` along an F2-subspace of
//! GF(2^n): each `x_i` becomes `sum_l y_{il} nu_l` and the result splits
//! into `n` multilinear polynomials over F2 in `m n'` variables.
//!
//! Variable `y_{il}` (1-based `i`, `l`) has index `(i-1) n' + (l-1)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::boolpoly::{BoolMonomial, BoolPoly, GfBoolPoly};
use crate::ecurve::CurveParams;
use crate::error::{Error, Result};
use crate::fieldalg::{parse_hex_u64, F2Matrix, FieldElement, FieldSpec};
use crate::semaev::SummationPoly;

/// F2-basis `nu_1..nu_{n'}` of the factor-basis subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    spec: FieldSpec,
    nu: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// `{1, z, .., z^(n'-1)}`.
    Canonical,
    /// Uniform independent draws.
    Random,
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Self::Canonical),
            "random" => Ok(Self::Random),
            _ => Err(Error::Parse(format!("basis kind `{s}`"))),
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Canonical => "canonical",
            Self::Random => "random",
        })
    }
}

fn f2_rank_of_masks(masks: &[u64], n: u32) -> usize {
    let rows: Vec<Vec<usize>> = masks.iter().map(|m| (0..n as usize).filter(|b| (m >> b) & 1 == 1).collect()).collect();
    F2Matrix::from_sparse_rows(n as usize, &rows).rank()
}

impl SubspaceBasis {
    pub fn new(elements: &[FieldElement]) -> Result<Self> {
        let spec = elements.first().map(FieldElement::spec).ok_or(Error::DependentBasis)?;
        if let Some(e) = elements.iter().find(|e| e.spec() != spec) {
            return Err(Error::FieldMismatch(e.spec().to_string(), spec.to_string()));
        }
        Self::from_raw(spec, elements.iter().map(FieldElement::value).collect())
    }

    pub fn from_raw(spec: FieldSpec, nu: Vec<u64>) -> Result<Self> {
        if nu.len() > spec.n() as usize {
            return Err(Error::SubspaceTooLarge { np: nu.len(), n: spec.n() as usize });
        }
        if nu.is_empty() || nu.iter().any(|v| v & !spec.mask() != 0) {
            return Err(Error::DependentBasis);
        }
        if f2_rank_of_masks(&nu, spec.n()) != nu.len() {
            return Err(Error::DependentBasis);
        }
        Ok(Self { spec, nu })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.nu.len()
    }

    pub fn raw(&self) -> &[u64] {
        &self.nu
    }

    pub fn elements(&self) -> Vec<FieldElement> {
        self.nu.iter().map(|&v| self.spec.element(v).expect("reduced")).collect()
    }

    /// Field element `sum_l bits_l nu_l`.
    pub fn combine(&self, bits: u64) -> u64 {
        self.nu.iter().enumerate().filter(|(l, _)| (bits >> l) & 1 == 1).fold(0, |acc, (_, v)| acc ^ v)
    }
}

pub fn make_basis<R: Rng + ?Sized>(spec: FieldSpec, kind: BasisKind, np: usize, rng: &mut R) -> Result<SubspaceBasis> {
    if np > spec.n() as usize {
        return Err(Error::SubspaceTooLarge { np, n: spec.n() as usize });
    }
    if np == 0 {
        return Err(Error::InvalidParameter("subspace dimension must be positive".into()));
    }
    match kind {
        BasisKind::Canonical => SubspaceBasis::from_raw(spec, (0..np).map(|l| 1u64 << l).collect()),
        BasisKind::Random => loop {
            let nu: Vec<u64> = (0..np).map(|_| rng.gen::<u64>() & spec.mask()).collect();
            if let Ok(b) = SubspaceBasis::from_raw(spec, nu) {
                return Ok(b);
            }
        },
    }
}

/// `x_i^(2^j) = sum_l nu_l^(2^j) y_{il}` for block `i` (0-based) in a system
/// with `n'` variables per block.
pub fn power_linear_form(i: usize, j: u32, basis: &SubspaceBasis) -> Result<GfBoolPoly> {
    let np = basis.dim();
    if (i + 1) * np > 64 {
        return Err(Error::TooManyVariables((i + 1) * np));
    }
    let f = basis.spec;
    let terms =
        basis.nu.iter().enumerate().map(|(l, &v)| (1u64 << (i * np + l), f.frobenius_raw(v, j as u64))).collect();
    Ok(GfBoolPoly::from_terms(f, terms))
}

/// `prod_{j in bits(a)} L_j` within one block, in block-local variables.
fn block_power(forms: &[GfBoolPoly], a: u32) -> Result<GfBoolPoly> {
    let spec = forms[0].spec();
    let mut acc = GfBoolPoly::constant(spec, 1);
    for (j, form) in forms.iter().enumerate() {
        if (a >> j) & 1 == 1 {
            acc = acc.mul(form)?;
        }
    }
    Ok(acc)
}

/// Descended system together with the parameters that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentSystem {
    pub m: usize,
    pub basis: SubspaceBasis,
    pub c: FieldElement,
    /// Not part of the text format.
    pub curve: Option<CurveParams>,
    pub polys: Vec<BoolPoly>,
}

impl DescentSystem {
    pub fn n(&self) -> usize {
        self.basis.spec.n() as usize
    }

    pub fn np(&self) -> usize {
        self.basis.dim()
    }

    pub fn spec(&self) -> FieldSpec {
        self.basis.spec
    }

    pub fn num_vars(&self) -> usize {
        self.m * self.np()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.polys.iter().filter_map(BoolPoly::degree).max()
    }

    /// Variable index of `y_{il}`, 0-based `i` and `l`.
    pub fn var_index(&self, i: usize, l: usize) -> usize {
        i * self.np() + l
    }

    /// The `x_i` values encoded by a 0/1 assignment of all variables.
    pub fn decode(&self, assignment: u64) -> Vec<u64> {
        let np = self.np();
        (0..self.m).map(|i| self.basis.combine((assignment >> (i * np)) & ((1u64 << np) - 1))).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "descent m={} n={} np={} c={} red=0x{:x}\n",
            self.m,
            self.n(),
            self.np(),
            self.c,
            self.spec().reduction_poly()
        );
        let nu: Vec<String> = self.basis.nu.iter().map(|v| format!("0x{v:x}")).collect();
        out.push_str(&format!("nu {}\n", nu.join(" ")));
        for p in &self.polys {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty descent file".into()))?;
        let fields = header.strip_prefix("descent ").ok_or_else(|| Error::Parse(format!("header `{header}`")))?;
        let get = |key: &str| -> Result<String> {
            fields
                .split_whitespace()
                .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')).map(str::to_string))
                .ok_or_else(|| Error::Parse(format!("header field `{key}` missing")))
        };
        let num = |s: String| s.parse::<usize>().map_err(|_| Error::Parse(format!("number `{s}`")));
        let m = num(get("m")?)?;
        let n = num(get("n")?)?;
        let np = num(get("np")?)?;
        let c_hex = get("c")?;
        let red_hex = get("red")?;
        let red = crate::fieldalg::parse_hex_u128(&red_hex).ok_or_else(|| Error::Parse(format!("red `{red_hex}`")))?;
        let spec = FieldSpec::new(n as u32, red)?;
        let c = FieldElement::parse(spec, &c_hex)?;
        let nu_line = lines.next().ok_or_else(|| Error::Parse("missing nu line".into()))?;
        let nu = nu_line
            .strip_prefix("nu")
            .ok_or_else(|| Error::Parse(format!("nu line `{nu_line}`")))?
            .split_whitespace()
            .map(|t| parse_hex_u64(t).ok_or_else(|| Error::Parse(format!("nu entry `{t}`"))))
            .collect::<Result<Vec<u64>>>()?;
        if nu.len() != np {
            return Err(Error::LengthMismatch { expected: np, got: nu.len() });
        }
        let basis = SubspaceBasis::from_raw(spec, nu)?;
        let polys = lines.map(BoolPoly::parse).collect::<Result<Vec<_>>>()?;
        if polys.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: polys.len() });
        }
        let limit = if m * np >= 64 { u64::MAX } else { (1u64 << (m * np)) - 1 };
        if polys.iter().any(|p| p.support() & !limit != 0) {
            return Err(Error::Parse("variable index exceeds m*np".into()));
        }
        Ok(Self { m, basis, c, curve: None, polys })
    }
}

/// Full expansion of `S(x_1, .., x_m, c)` with GF(2^n) coefficients.
pub fn descend_gf(s: &SummationPoly, basis: &SubspaceBasis, c: FieldElement) -> Result<GfBoolPoly> {
    let spec = s.spec();
    if basis.spec != spec || c.spec() != spec {
        return Err(Error::FieldMismatch(basis.spec.to_string(), spec.to_string()));
    }
    if c.is_zero() {
        return Err(Error::ZeroConstant);
    }
    let m = s.arity() - 1;
    let np = basis.dim();
    if m * np > 64 {
        return Err(Error::TooManyVariables(m * np));
    }
    // Specialize x_{m+1} = c and merge equal exponent vectors.
    let mut spec_terms: Vec<(Vec<u32>, u64)> = s
        .poly()
        .terms()
        .iter()
        .map(|(mono, coef)| {
            let e = mono.exponents(m + 1);
            (e[..m].to_vec(), spec.mul_raw(*coef, spec.pow_raw(c.value(), e[m] as u128)))
        })
        .collect();
    spec_terms.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(Vec<u32>, u64)> = Vec::new();
    for (e, v) in spec_terms {
        match merged.last_mut() {
            Some(last) if last.0 == e => last.1 ^= v,
            _ => merged.push((e, v)),
        }
    }
    merged.retain(|t| t.1 != 0);

    let max_exp = merged.iter().flat_map(|t| t.0.iter().copied()).max().unwrap_or(0);
    let bits = 32 - max_exp.leading_zeros();
    let forms: Vec<GfBoolPoly> = (0..bits.max(1)).map(|j| power_linear_form(0, j, basis)).collect::<Result<_>>()?;
    let powers: Vec<GfBoolPoly> = (0..=max_exp).map(|a| block_power(&forms, a)).collect::<Result<_>>()?;

    // Contract block by block: key = (mask of finished blocks, index into
    // the exponent table for the unfinished ones).
    let mut state: Vec<(u64, Vec<u32>, u64)> = merged.into_iter().map(|(e, v)| (0u64, e, v)).collect();
    for i in 0..m {
        let mut next: Vec<(u64, Vec<u32>, u64)> = Vec::new();
        for (mask, e, v) in &state {
            let rest = e[1..].to_vec();
            for &(bm, bc) in powers[e[0] as usize].terms() {
                next.push((mask | (bm << (i * np)), rest.clone(), spec.mul_raw(*v, bc)));
            }
        }
        next.sort_unstable_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let mut out: Vec<(u64, Vec<u32>, u64)> = Vec::with_capacity(next.len());
        for t in next {
            match out.last_mut() {
                Some(last) if last.0 == t.0 && last.1 == t.1 => last.2 ^= t.2,
                _ => out.push(t),
            }
        }
        out.retain(|t| t.2 != 0);
        state = out;
    }
    Ok(GfBoolPoly::from_terms(spec, state.into_iter().map(|(mask, _, v)| (mask, v)).collect()))
}

pub fn descend(s: &SummationPoly, basis: &SubspaceBasis, c: FieldElement) -> Result<DescentSystem> {
    let full = descend_gf(s, basis, c)?;
    Ok(DescentSystem { m: s.arity() - 1, basis: basis.clone(), c, curve: None, polys: full.coordinates() })
}

/// Multilinear monomial of `y_{il}` for the given `(i, l)` pairs.
pub fn block_monomial(np: usize, vars: &[(usize, usize)]) -> BoolMonomial {
    BoolMonomial(vars.iter().fold(0, |acc, &(i, l)| acc | (1u64 << (i * np + l))))
}
