//! Degree-logging F4-style Gröbner basis computation in
//! `F2[y_1..y_N]/(y_i^2 - y_i)` under grevlex.
//!
//! Field equations are never stored; polynomials are kept in multilinear
//! normal form and the S-polynomial of `g` with `y_k^2 + y_k` (for `y_k`
//! in the leading monomial of `g`) is the multilinear reduction of `y_k g`.
//! Each step selects all pending pairs of minimal degree, builds the
//! Macaulay-style matrix with symbolic preprocessing, eliminates, and adds
//! the rows whose leading monomials are new.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::boolpoly::{BoolMonomial, BoolPoly};
use crate::descent::DescentSystem;
use crate::error::{Error, Result};
use crate::fieldalg::F2Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Limit on the bytes of one elimination matrix.
    pub max_bytes: usize,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_bytes: 2 << 30, max_time: Duration::from_secs(3600) }
    }
}

impl Budget {
    pub fn new(mem_mib: usize, secs: u64) -> Self {
        Self { max_bytes: mem_mib << 20, max_time: Duration::from_secs(secs) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub degree: u32,
    pub new: usize,
    /// New polynomials of degree below the step degree.
    pub falls: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct StepLog {
    pub steps: Vec<Step>,
}

impl StepLog {
    pub fn from_triples(t: &[(u32, usize, usize)]) -> Self {
        Self { steps: t.iter().map(|&(degree, new, falls)| Step { degree, new, falls }).collect() }
    }
}

/// Degree of the first step that produced a fall, if any.
pub fn dff_empirical(log: &StepLog) -> Result<Option<u32>> {
    if log.steps.is_empty() {
        return Err(Error::EmptyLog);
    }
    Ok(log.steps.iter().find(|s| s.falls > 0).map(|s| s.degree))
}

/// Highest step degree.
pub fn dreg_empirical(log: &StepLog) -> Result<u32> {
    log.steps.iter().map(|s| s.degree).max().ok_or(Error::EmptyLog)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GBResult {
    /// Reduced basis, sorted by descending leading monomial. Only complete
    /// when neither flag is set.
    pub basis: Vec<BoolPoly>,
    pub log: StepLog,
    pub budget_exhausted: bool,
    /// Pairs above the degree limit were discarded.
    pub truncated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Pair {
    Input(usize),
    Critical(usize, usize),
    Field(usize, usize),
}

/// Multilinear product `u * f`.
fn times(u: u64, f: &BoolPoly) -> BoolPoly {
    f.mul_monomial(BoolMonomial(u))
}

/// S-polynomial of two basis elements.
pub fn s_polynomial(a: &BoolPoly, b: &BoolPoly) -> BoolPoly {
    let (la, lb) = (a.leading().map_or(0, |m| m.0), b.leading().map_or(0, |m| m.0));
    let l = la | lb;
    times(l & !la, a).add(&times(l & !lb, b))
}

/// S-polynomial of `g` with the field equation of `y_k`.
pub fn field_s_polynomial(g: &BoolPoly, k: usize) -> BoolPoly {
    g.mul_monomial(BoolMonomial::var(k))
}

/// Full reduction of `f` modulo `basis`.
pub fn normal_form(f: &BoolPoly, basis: &[BoolPoly]) -> BoolPoly {
    let lms: Vec<u64> = basis.iter().map(|g| g.leading().map_or(u64::MAX, |m| m.0)).collect();
    let mut f = f.clone();
    let mut done: Vec<BoolMonomial> = Vec::new();
    // Terms are visited in descending order; irreducible ones move to `done`.
    loop {
        let next = f.terms().iter().copied().find(|t| !done.contains(t));
        let Some(t) = next else { break };
        match lms.iter().position(|&l| l & !t.0 == 0) {
            Some(i) => f = f.add(&times(t.0 & !lms[i], &basis[i])),
            None => done.push(t),
        }
    }
    f
}

/// Buchberger's criterion with the implicit field equations.
pub fn is_groebner_basis(basis: &[BoolPoly]) -> bool {
    for (i, a) in basis.iter().enumerate() {
        let Some(la) = a.leading() else { return false };
        for k in la.vars() {
            if !normal_form(&field_s_polynomial(a, k), basis).is_zero() {
                return false;
            }
        }
        for b in &basis[i + 1..] {
            let Some(lb) = b.leading() else { return false };
            if la.0 & lb.0 != 0 && !normal_form(&s_polynomial(a, b), basis).is_zero() {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug)]
struct Pending {
    degree: u32,
    lcm: u64,
    pair: Pair,
}

struct Engine<'a> {
    inputs: &'a [BoolPoly],
    g: Vec<BoolPoly>,
    lms: Vec<u64>,
    /// Elements whose leading monomial is not divisible by a later one.
    active: Vec<bool>,
    pending: Vec<Pending>,
    max_degree: u32,
    truncated: bool,
}

impl Engine<'_> {
    fn push_pair(&mut self, degree: u32, lcm: u64, pair: Pair) {
        if degree > self.max_degree {
            self.truncated = true;
        } else {
            self.pending.push(Pending { degree, lcm, pair });
        }
    }

    /// Gebauer-Möller update. The implicit field equation of `y_k` has
    /// leading monomial `y_k^2`, which never divides a multilinear lcm.
    fn add_to_basis(&mut self, h: BoolPoly) {
        let lh = h.leading().expect("nonzero").0;
        let idx = self.g.len();
        let lms = &self.lms;
        self.pending.retain(|p| match p.pair {
            Pair::Critical(a, b) => !(lh & !p.lcm == 0 && (lms[a] | lh) != p.lcm && (lms[b] | lh) != p.lcm),
            Pair::Field(a, _) => lh & !lms[a] != 0,
            Pair::Input(_) => true,
        });

        let cands: Vec<(usize, u64)> = (0..idx).filter(|&j| self.active[j]).map(|j| (j, self.lms[j] | lh)).collect();
        // Criteria M and F: drop a pair when another remaining or kept pair
        // has an lcm dividing its own.
        let mut remaining: HashMap<u64, usize> = HashMap::new();
        for &(_, l) in &cands {
            *remaining.entry(l).or_default() += 1;
        }
        let mut kept: Vec<(usize, u64)> = Vec::new();
        let mut kept_lcms: HashSet<u64> = HashSet::new();
        for &(j, l) in &cands {
            let slot = remaining.get_mut(&l).expect("counted");
            *slot -= 1;
            let coprime = self.lms[j] & lh == 0;
            let dominated = !coprime && {
                let free = l & !lh;
                let hit = |l2: u64| kept_lcms.contains(&l2) || remaining.get(&l2).is_some_and(|&c| c > 0);
                if free.count_ones() <= 12 {
                    // Subsets of `free`, including `free` itself.
                    let mut sub = free;
                    loop {
                        if hit(lh | sub) {
                            break true;
                        }
                        if sub == 0 {
                            break false;
                        }
                        sub = (sub - 1) & free;
                    }
                } else {
                    kept.iter().any(|&(_, l2)| l2 & !l == 0) || remaining.iter().any(|(&l2, &c)| c > 0 && l2 & !l == 0)
                }
            };
            if coprime || !dominated {
                kept.push((j, l));
                kept_lcms.insert(l);
            }
        }
        for (j, l) in kept {
            if self.lms[j] & lh != 0 {
                self.push_pair(l.count_ones(), l, Pair::Critical(j, idx));
            }
        }
        let deg = lh.count_ones() + 1;
        for k in BoolMonomial(lh).vars() {
            // y_k h = h when y_k divides every term.
            if h.terms().iter().any(|t| (t.0 >> k) & 1 == 0) {
                self.push_pair(deg, lh, Pair::Field(idx, k));
            }
        }
        for j in 0..idx {
            if self.active[j] && lh & !self.lms[j] == 0 {
                self.active[j] = false;
            }
        }
        self.g.push(h);
        self.lms.push(lh);
        self.active.push(true);
    }

    fn reducer_for(&self, mono: u64) -> Option<usize> {
        // Prefer the largest divisor, then the shortest polynomial.
        let mut best: Option<usize> = None;
        for (i, &l) in self.lms.iter().enumerate() {
            if self.active[i] && l & !mono == 0 {
                best = match best {
                    Some(b)
                        if (self.lms[b].count_ones(), std::cmp::Reverse(self.g[b].len()))
                            >= (l.count_ones(), std::cmp::Reverse(self.g[i].len())) =>
                    {
                        Some(b)
                    }
                    _ => Some(i),
                };
            }
        }
        best
    }
}

/// Run the engine on `polys` in `num_vars` variables.
pub fn groebner_log(polys: &[BoolPoly], num_vars: usize, max_degree: Option<u32>, budget: Budget) -> Result<GBResult> {
    if num_vars > 64 {
        return Err(Error::TooManyVariables(num_vars));
    }
    if polys.iter().all(BoolPoly::is_zero) {
        return Err(Error::AllZeroSystem);
    }
    let start = Instant::now();
    let mut eng = Engine {
        inputs: polys,
        g: Vec::new(),
        lms: Vec::new(),
        active: Vec::new(),
        pending: Vec::new(),
        max_degree: max_degree.unwrap_or(num_vars as u32 + 1),
        truncated: false,
    };
    for (i, f) in polys.iter().enumerate() {
        if let Some(d) = f.degree() {
            eng.push_pair(d, 0, Pair::Input(i));
        }
    }
    let mut log = StepLog::default();
    let mut budget_exhausted = false;
    let mut unit = false;

    while !eng.pending.is_empty() && !unit {
        if start.elapsed() > budget.max_time {
            budget_exhausted = true;
            break;
        }
        let d = eng.pending.iter().map(|p| p.degree).min().expect("nonempty");
        let (selected, rest): (Vec<_>, Vec<_>) = eng.pending.drain(..).partition(|p| p.degree == d);
        eng.pending = rest;

        // Pair rows.
        let mut seen: HashSet<(u64, usize)> = HashSet::new();
        let mut rows: Vec<BoolPoly> = Vec::new();
        for sel in &selected {
            match sel.pair {
                Pair::Input(i) => rows.push(eng.inputs[i].clone()),
                Pair::Critical(a, b) => {
                    let l = eng.lms[a] | eng.lms[b];
                    for x in [a, b] {
                        let u = l & !eng.lms[x];
                        if seen.insert((u, x)) {
                            rows.push(times(u, &eng.g[x]));
                        }
                    }
                }
                Pair::Field(gi, k) => {
                    let r = field_s_polynomial(&eng.g[gi], k);
                    if !r.is_zero() {
                        rows.push(r);
                    }
                }
            }
        }
        rows.retain(|r| !r.is_zero());

        // Symbolic preprocessing: one reducer per reducible monomial.
        let mut monos: HashSet<u64> = HashSet::new();
        let mut queue: Vec<u64> = Vec::new();
        for r in &rows {
            for t in r.terms() {
                if monos.insert(t.0) {
                    queue.push(t.0);
                }
            }
        }
        let mut reducers: Vec<BoolPoly> = Vec::new();
        while let Some(mono) = queue.pop() {
            if let Some(i) = eng.reducer_for(mono) {
                let row = times(mono & !eng.lms[i], &eng.g[i]);
                for t in row.terms() {
                    if monos.insert(t.0) {
                        queue.push(t.0);
                    }
                }
                reducers.push(row);
            }
        }

        let mut cols: Vec<BoolMonomial> = monos.into_iter().map(BoolMonomial).collect();
        cols.sort_unstable_by_key(|m| std::cmp::Reverse(m.grevlex_key()));
        let ncols = cols.len();
        let words = ncols.div_ceil(64);
        let bytes = (rows.len() + reducers.len()) * words * 8;
        if bytes > budget.max_bytes {
            budget_exhausted = true;
            break;
        }
        let index: HashMap<u64, usize> = cols.iter().enumerate().map(|(i, m)| (m.0, i)).collect();

        // Reducer rows stored densely; their pivots are distinct and every
        // other entry lies to the right of the pivot.
        let mut pivot_row: Vec<usize> = vec![usize::MAX; ncols];
        let mut pivot_mask = vec![0u64; words];
        let mut dense = vec![0u64; reducers.len() * words];
        for (ri, red) in reducers.iter().enumerate() {
            let row = &mut dense[ri * words..(ri + 1) * words];
            for t in red.terms() {
                let x = index[&t.0];
                row[x / 64] ^= 1 << (x % 64);
            }
            let c = index[&red.terms()[0].0];
            pivot_row[c] = ri;
            pivot_mask[c / 64] |= 1 << (c % 64);
        }

        let mut mat = F2Matrix::from_sparse_rows(
            ncols,
            &rows.iter().map(|r| r.terms().iter().map(|t| index[&t.0]).collect::<Vec<usize>>()).collect::<Vec<_>>(),
        );
        let mut buf = vec![0u64; words];
        for r in 0..mat.rows() {
            buf.copy_from_slice(mat.row_words(r));
            let mut w = 0;
            while w < words {
                let hit = buf[w] & pivot_mask[w];
                if hit == 0 {
                    w += 1;
                    continue;
                }
                let c = w * 64 + hit.trailing_zeros() as usize;
                let src = &dense[pivot_row[c] * words + w..(pivot_row[c] + 1) * words];
                for (b, s) in buf[w..].iter_mut().zip(src) {
                    *b ^= s;
                }
            }
            mat.set_row_words(r, &buf);
        }
        let rank = mat.echelonize().len();
        let mut new = 0;
        let mut falls = 0;
        for r in 0..rank {
            let h = BoolPoly::from_sorted_unchecked(mat.row_support(r).into_iter().map(|c| cols[c]).collect());
            let deg = h.degree().expect("nonzero row");
            new += 1;
            if deg < d {
                falls += 1;
            }
            if deg == 0 {
                unit = true;
            }
            eng.add_to_basis(h);
        }
        log.steps.push(Step { degree: d, new, falls });
    }

    let basis = if unit { vec![BoolPoly::one()] } else { reduce_basis(&eng.g) };
    Ok(GBResult { basis, log, budget_exhausted, truncated: eng.truncated })
}

pub fn groebner_log_system(sys: &DescentSystem, max_degree: Option<u32>, budget: Budget) -> Result<GBResult> {
    groebner_log(&sys.polys, sys.num_vars(), max_degree, budget)
}

/// Minimal basis by leading monomials, then tail reduction.
fn reduce_basis(g: &[BoolPoly]) -> Vec<BoolPoly> {
    let lms: Vec<u64> = g.iter().map(|p| p.leading().expect("nonzero").0).collect();
    let mut minimal: Vec<BoolPoly> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let redundant = lms.iter().enumerate().any(|(j, &l)| j != i && l & !lms[i] == 0 && (l != lms[i] || j < i));
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out: Vec<BoolPoly> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let lead = minimal[i].leading().expect("nonzero");
        let others: Vec<BoolPoly> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let tail = BoolPoly::from_sorted_unchecked(minimal[i].terms()[1..].to_vec());
        out.push(BoolPoly::from_monomials(
            std::iter::once(lead).chain(normal_form(&tail, &others).terms().iter().copied()),
        ));
    }
    out.sort_unstable_by_key(|p| std::cmp::Reverse(p.leading().expect("nonzero").grevlex_key()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> BoolPoly {
        BoolPoly::parse(s).unwrap()
    }

    fn common_roots(polys: &[BoolPoly], n: usize) -> Vec<u64> {
        (0..1u64 << n).filter(|&a| polys.iter().all(|f| !f.eval(a))).collect()
    }

    #[test]
    fn read_off_rules() {
        let log = StepLog::from_triples(&[(2, 5, 0), (3, 4, 1), (4, 1, 0)]);
        assert_eq!(dff_empirical(&log), Ok(Some(3)));
        assert_eq!(dreg_empirical(&log), Ok(4));
        let flat = StepLog::from_triples(&[(2, 5, 0), (3, 1, 0)]);
        assert_eq!(dff_empirical(&flat), Ok(None));
        assert_eq!(dreg_empirical(&StepLog::default()), Err(Error::EmptyLog));
        assert_eq!(
            serde_json::to_string(&flat).unwrap(),
            r#"[{"degree":2,"new":5,"falls":0},{"degree":3,"new":1,"falls":0}]"#
        );
    }

    #[test]
    fn linear_input_is_already_a_basis() {
        let r = groebner_log(&[p("(0)"), p("(1)")], 2, None, Budget::default()).unwrap();
        assert_eq!(r.basis, vec![p("(1)"), p("(0)")]);
        assert_eq!(dreg_empirical(&r.log), Ok(1));
        assert!(!r.budget_exhausted);
    }

    #[test]
    fn variety_matches_brute_force() {
        let input = [p("(0,1) + (2)"), p("(1,2)")];
        let r = groebner_log(&input, 3, None, Budget::default()).unwrap();
        assert!(is_groebner_basis(&r.basis));
        assert_eq!(common_roots(&r.basis, 3), common_roots(&input, 3));
        for f in &input {
            assert!(normal_form(f, &r.basis).is_zero());
        }
    }

    #[test]
    fn inconsistent_system_gives_one() {
        let r = groebner_log(&[p("(0)"), p("(0) + ()")], 2, None, Budget::default()).unwrap();
        assert_eq!(r.basis, vec![BoolPoly::one()]);
    }

    fn random_system(rng: &mut ChaCha8Rng, n: usize, count: usize, deg: u32) -> Vec<BoolPoly> {
        (0..count)
            .map(|_| {
                BoolPoly::from_monomials((0..6).map(|_| {
                    let mut m = 0u64;
                    for _ in 0..rng.gen_range(0..=deg) {
                        m |= 1 << rng.gen_range(0..n);
                    }
                    BoolMonomial(m)
                }))
            })
            .collect()
    }

    #[test]
    fn random_systems_sound_and_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for trial in 0..40 {
            let n = 4 + trial % 6;
            let input = random_system(&mut rng, n, 2 + trial % 4, 3);
            if input.iter().all(BoolPoly::is_zero) {
                continue;
            }
            let r = groebner_log(&input, n, None, Budget::default()).unwrap();
            assert!(!r.budget_exhausted && !r.truncated);
            assert!(is_groebner_basis(&r.basis), "trial {trial}");
            // Same variety, and the input ideal lies in the basis ideal.
            assert_eq!(common_roots(&r.basis, n), common_roots(&input, n), "trial {trial}");
            for f in &input {
                assert!(normal_form(f, &r.basis).is_zero());
            }
        }
    }

    #[test]
    fn deterministic_logs() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let input = random_system(&mut rng, 8, 5, 3);
        let a = groebner_log(&input, 8, None, Budget::default()).unwrap();
        let b = groebner_log(&input, 8, None, Budget::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let input = random_system(&mut rng, 10, 4, 3);
        let r = groebner_log(&input, 10, None, Budget { max_bytes: 0, max_time: Duration::from_secs(10) }).unwrap();
        assert!(r.budget_exhausted);
        let capped = groebner_log(&input, 10, Some(2), Budget::default()).unwrap();
        assert!(capped.log.steps.iter().all(|s| s.degree <= 2));
    }
}
