//! First fall degree of a homogeneous multilinear system in the graded
//! ring `F2[y]/(y_1^2, .., y_N^2)`, computed from ranks of Macaulay slices,
//! and the explicit degree-fall witness for descended summation systems.

use std::collections::HashMap;

use serde::Serialize;

use crate::boolpoly::{BoolMonomial, BoolPoly, GfBoolPoly};
use crate::descent::{power_linear_form, DescentSystem, SubspaceBasis};
use crate::error::{Error, Result};
use crate::fieldalg::{F2Matrix, FieldElement, FieldMatrix, FieldSpec};

/// `C(n, k)` for `n <= 64`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1)) as u64
}

/// Dense index of a `k`-subset of `0..n` (combinatorial number system).
pub struct CombRanker {
    table: Vec<Vec<u64>>,
}

impl CombRanker {
    pub fn new(n: usize) -> Self {
        let table = (0..=n).map(|a| (0..=n + 1).map(|b| binomial(a, b)).collect()).collect();
        Self { table }
    }

    #[inline]
    pub fn rank(&self, mask: u64) -> usize {
        let mut x = mask;
        let mut k = 1;
        let mut r = 0u64;
        while x != 0 {
            let p = x.trailing_zeros() as usize;
            r += self.table[p][k];
            k += 1;
            x &= x - 1;
        }
        r as usize
    }
}

/// All `k`-subsets of `0..n` as masks, in increasing numeric order.
pub fn subsets(n: usize, k: usize) -> Vec<u64> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::with_capacity(binomial(n, k) as usize);
    let mut x: u64 = (1u64 << k) - 1;
    let limit = if n == 64 { u64::MAX } else { 1u64 << n };
    loop {
        out.push(x);
        // Gosper's hack
        let c = x & x.wrapping_neg();
        let r = x.wrapping_add(c);
        if r == 0 || (n < 64 && r >= limit) {
            break;
        }
        let next = (((r ^ x) >> 2) / c) | r;
        if n < 64 && next >= limit {
            break;
        }
        x = next;
    }
    out
}

/// Degree-`d` generators `h_1..h_r` of a homogeneous ideal in the graded
/// ring, reduced to an F2-basis of their span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSystem {
    pub d: u32,
    pub num_vars: usize,
    pub h: Vec<BoolPoly>,
    pub original_count: usize,
    /// Projection to the top degree lost dimension.
    pub dim_drop: bool,
}

/// Coefficient matrix of `polys` over the union of their monomials.
fn coefficient_matrix(polys: &[BoolPoly]) -> (F2Matrix, Vec<BoolMonomial>) {
    let mut monos: Vec<BoolMonomial> = polys.iter().flat_map(|p| p.terms().iter().copied()).collect();
    monos.sort_unstable_by_key(|m| std::cmp::Reverse(m.grevlex_key()));
    monos.dedup();
    let index: HashMap<u64, usize> = monos.iter().enumerate().map(|(i, m)| (m.0, i)).collect();
    let rows: Vec<Vec<usize>> = polys.iter().map(|p| p.terms().iter().map(|m| index[&m.0]).collect()).collect();
    (F2Matrix::from_sparse_rows(monos.len(), &rows), monos)
}

/// F2-basis of the span of `polys` (reduced echelon form).
pub fn span_basis(polys: &[BoolPoly]) -> Vec<BoolPoly> {
    let (mut mat, monos) = coefficient_matrix(polys);
    let rank = mat.echelonize().len();
    (0..rank).map(|r| BoolPoly::from_monomials(mat.row_support(r).into_iter().map(|c| monos[c]))).collect()
}

pub fn f2_span_rank(polys: &[BoolPoly]) -> usize {
    coefficient_matrix(polys).0.rank()
}

impl GradedSystem {
    /// Homogeneous generators of a common degree; the basis is extracted.
    pub fn new(num_vars: usize, gens: &[BoolPoly]) -> Result<Self> {
        if num_vars > 64 {
            return Err(Error::TooManyVariables(num_vars));
        }
        let d = gens.iter().filter_map(BoolPoly::degree).max().ok_or(Error::AllZeroSystem)?;
        if gens.iter().any(|g| !g.is_zero() && (!g.is_homogeneous() || g.degree() != Some(d))) {
            return Err(Error::InvalidParameter("generators must be homogeneous of one degree".into()));
        }
        if num_vars < 64 && gens.iter().any(|g| g.support() >> num_vars != 0) {
            return Err(Error::InvalidParameter(format!("generator uses a variable beyond the first {num_vars}")));
        }
        Ok(Self { d, num_vars, h: span_basis(gens), original_count: gens.len(), dim_drop: false })
    }

    pub fn r(&self) -> usize {
        self.h.len()
    }

    /// Dimension of the degree-`k` part of the free module `S^r`.
    pub fn module_dim(&self, k: u32) -> u64 {
        self.r() as u64 * binomial(self.num_vars, k as usize)
    }
}

/// Top-degree parts of an arbitrary system, with the dimension-drop flag.
pub fn top_parts(num_vars: usize, polys: &[BoolPoly]) -> Result<GradedSystem> {
    let d = polys.iter().filter_map(BoolPoly::degree).max().ok_or(Error::AllZeroSystem)?;
    let tops: Vec<BoolPoly> = polys.iter().map(|p| p.homogeneous_part(d)).collect();
    let full_rank = f2_span_rank(polys);
    let mut g = GradedSystem::new(num_vars, &tops)?;
    g.original_count = polys.len();
    g.dim_drop = g.r() < full_rank;
    Ok(g)
}

pub fn top_parts_of(sys: &DescentSystem) -> Result<GradedSystem> {
    top_parts(sys.num_vars(), &sys.polys)
}

/// Rows `u * h_i` for all degree-`(j-d)` monomials `u`, columns the
/// degree-`j` monomials. Zero rows are dropped.
pub fn macaulay_slice(g: &GradedSystem, j: u32) -> F2Matrix {
    let n = g.num_vars;
    let cols = binomial(n, j as usize) as usize;
    if j < g.d {
        return F2Matrix::zeros(0, cols);
    }
    let ranker = CombRanker::new(n);
    let multipliers = subsets(n, (j - g.d) as usize);
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for h in &g.h {
        for &u in &multipliers {
            let row: Vec<usize> = h.terms().iter().filter(|t| t.0 & u == 0).map(|t| ranker.rank(t.0 | u)).collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    F2Matrix::from_sparse_rows(cols, &rows)
}

/// Generators of the trivial syzygies `w (h_b e_a + h_a e_b)` and `w h_k e_k`
/// in module degree `j - d`, as rows over the coordinates
/// `(i, degree-(j-d) monomial)`.
pub fn trivial_syzygy_matrix(g: &GradedSystem, j: u32) -> F2Matrix {
    let n = g.num_vars;
    let d = g.d;
    let width = g.module_dim(j.saturating_sub(d)) as usize;
    if j < 2 * d {
        return F2Matrix::zeros(0, width);
    }
    let k = (j - d) as usize;
    let block = binomial(n, k) as usize;
    let ranker = CombRanker::new(n);
    let ws = subsets(n, (j - 2 * d) as usize);
    let r = g.r();
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for a in 0..r {
        for b in a..r {
            for &w in &ws {
                let mut row = Vec::new();
                let comp = |target: usize, h: &BoolPoly, row: &mut Vec<usize>| {
                    for t in h.terms() {
                        if t.0 & w == 0 {
                            row.push(target * block + ranker.rank(t.0 | w));
                        }
                    }
                };
                comp(a, &g.h[b], &mut row);
                if a != b {
                    comp(b, &g.h[a], &mut row);
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    F2Matrix::from_sparse_rows(width, &rows)
}

/// `dim U` in module degree `j - d`.
pub fn trivial_syzygy_dim(g: &GradedSystem, j: u32) -> usize {
    trivial_syzygy_matrix(g, j).rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceInfo {
    pub j: u32,
    /// `dim S^r_{j-d}`.
    pub rows: u64,
    /// `dim S_j`.
    pub cols: u64,
    pub rank: usize,
    pub triv_syz: usize,
}

impl SliceInfo {
    /// Kernel larger than the trivial syzygies.
    pub fn falls(&self) -> bool {
        (self.rank as u64) < self.rows - self.triv_syz as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FirstFallReport {
    pub d: u32,
    pub dim_drop: bool,
    /// `None` when no fall occurs up to the degree limit.
    #[serde(rename = "D_ff")]
    pub d_ff: Option<u32>,
    pub slices: Vec<SliceInfo>,
}

/// Scan `j = d+1 ..= j_max` for the first non-injective slice. A
/// dimension drop in the top parts gives `d` immediately.
pub fn first_fall(g: &GradedSystem, j_max: Option<u32>) -> FirstFallReport {
    let mut report = FirstFallReport { d: g.d, dim_drop: g.dim_drop, d_ff: None, slices: Vec::new() };
    if g.dim_drop {
        report.d_ff = Some(g.d);
        return report;
    }
    let j_max = j_max.unwrap_or(2 * g.d).min(g.num_vars as u32);
    for j in g.d + 1..=j_max {
        let info = SliceInfo {
            j,
            rows: g.module_dim(j - g.d),
            cols: binomial(g.num_vars, j as usize),
            rank: macaulay_slice(g, j).rank(),
            triv_syz: trivial_syzygy_dim(g, j),
        };
        let falls = info.falls();
        report.slices.push(info);
        if falls {
            report.d_ff = Some(j);
            break;
        }
    }
    report
}

pub fn first_fall_of(sys: &DescentSystem, j_max: Option<u32>) -> Result<FirstFallReport> {
    Ok(first_fall(&top_parts_of(sys)?, j_max))
}

/// `P_0 = c prod_{i=1..m} prod_{j=0..m-2} L_{i,j}` in the graded ring.
pub fn witness_p0(m: usize, basis: &SubspaceBasis, c: FieldElement) -> Result<GfBoolPoly> {
    let np = basis.dim();
    if m < 3 || np < m {
        return Err(Error::WitnessHypothesis { m, np });
    }
    if c.is_zero() {
        return Err(Error::ZeroConstant);
    }
    if c.spec() != basis.spec() {
        return Err(Error::FieldMismatch(c.spec().to_string(), basis.spec().to_string()));
    }
    let mut acc = GfBoolPoly::constant(basis.spec(), c.value());
    for i in 0..m {
        for j in 0..m - 1 {
            acc = acc.mul_graded(&power_linear_form(i, j as u32, basis)?)?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub in_span: bool,
    /// `x_k P_0 = 0` for each block `k`.
    pub annihilated: Vec<bool>,
    pub nonzero: bool,
    pub degree: Option<u32>,
    pub terms: usize,
}

impl WitnessReport {
    pub fn holds(&self) -> bool {
        self.in_span && self.nonzero && self.annihilated.iter().all(|&b| b)
    }
}

/// Whether `p` lies in the GF(2^n)-span of the F2 polynomials `gens`.
pub fn in_field_span(spec: FieldSpec, gens: &[BoolPoly], p: &GfBoolPoly) -> Result<bool> {
    let mut monos: Vec<u64> = gens.iter().flat_map(|g| g.terms().iter().map(|m| m.0)).collect();
    monos.extend(p.terms().iter().map(|t| t.0));
    monos.sort_unstable();
    monos.dedup();
    let index: HashMap<u64, usize> = monos.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut mat = FieldMatrix::zeros(spec, monos.len(), gens.len());
    for (c, g) in gens.iter().enumerate() {
        for t in g.terms() {
            mat.set_raw(index[&t.0], c, 1);
        }
    }
    let mut rhs = vec![spec.zero(); monos.len()];
    for &(m, v) in p.terms() {
        rhs[index[&m]] = spec.element(v)?;
    }
    Ok(mat.solve(&rhs)?.is_some())
}

pub fn verify_witness(g: &GradedSystem, p0: &GfBoolPoly, m: usize, basis: &SubspaceBasis) -> Result<WitnessReport> {
    let annihilated =
        (0..m).map(|k| Ok(power_linear_form(k, 0, basis)?.mul_graded(p0)?.is_zero())).collect::<Result<Vec<bool>>>()?;
    Ok(WitnessReport {
        in_span: in_field_span(basis.spec(), &g.h, p0)?,
        annihilated,
        nonzero: !p0.is_zero(),
        degree: p0.degree(),
        terms: p0.len(),
    })
}

/// Build `P_0` for a descended system and check it against its top parts.
pub fn witness_for(sys: &DescentSystem, g: &GradedSystem) -> Result<WitnessReport> {
    let p0 = witness_p0(sys.m, &sys.basis, sys.c)?;
    verify_witness(g, &p0, sys.m, &sys.basis)
}

/// GF(2^n)-rank of the `m x n'` matrix `(nu_l^(2^j))`, `j = 0..m-1`.
pub fn moore_rank_raw(spec: FieldSpec, nu: &[u64], m: usize) -> usize {
    let mut mat = FieldMatrix::zeros(spec, m, nu.len());
    for j in 0..m {
        for (l, &v) in nu.iter().enumerate() {
            mat.set_raw(j, l, spec.frobenius_raw(v, j as u64));
        }
    }
    mat.rank()
}

pub fn moore_rank(basis: &SubspaceBasis, m: usize) -> usize {
    moore_rank_raw(basis.spec(), basis.raw(), m)
}
