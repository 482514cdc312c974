//! End-to-end experiment pipeline, table reproduction and the complexity
//! crossover scan.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::descent::{descend, make_basis, BasisKind, DescentSystem, SubspaceBasis};
use crate::ecurve::CurveParams;
use crate::fieldalg::{FieldElement, FieldSpec};
use crate::firstfall::{first_fall, top_parts_of, witness_for, WitnessReport};
use crate::groebner::{dff_empirical, dreg_empirical, groebner_log_system, Budget};
use crate::semaev::semaev_poly;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ExperimentOptions {
    pub basis: BasisKind,
    /// Overrides the random-point x-coordinate.
    pub c: Option<u64>,
    /// Overrides the default reduction polynomial.
    pub red: Option<u128>,
    pub groebner: Option<Budget>,
    pub witness: bool,
    /// Record wall-clock times. Off by default so that records are
    /// reproducible byte for byte.
    pub timings: bool,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self { basis: BasisKind::Random, c: None, red: None, groebner: None, witness: true, timings: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroebnerSummary {
    #[serde(rename = "D_ff")]
    pub dff: Option<u32>,
    #[serde(rename = "D_reg")]
    pub dreg: Option<u32>,
    pub budget_exhausted: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub semaev_ms: f64,
    pub descent_ms: f64,
    pub firstfall_ms: f64,
    pub witness_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groebner_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub m: usize,
    pub n: u32,
    pub np: usize,
    pub seed: u64,
    pub basis: String,
    pub c: String,
    pub a2: String,
    pub a6: String,
    pub bound: u32,
    pub d: u32,
    pub dim_drop: bool,
    #[serde(rename = "D_ff")]
    pub dff_macaulay: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groebner: Option<GroebnerSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl ExperimentRecord {
    /// The upper bound holds, when it applies.
    pub fn within_bound(&self) -> bool {
        self.np < self.m || self.dff_macaulay.is_some_and(|d| d <= self.bound)
    }
}

pub fn theoretical_bound(m: usize) -> u32 {
    (m * (m - 1) + 1) as u32
}

pub fn check_parameters(m: usize, n: u32, np: usize) -> Result<()> {
    if !(2..=5).contains(&m) {
        return Err(Error::InvalidParameter(format!("m = {m} outside 2..=5")));
    }
    if n > 48 {
        return Err(Error::InvalidParameter(format!("n = {n} exceeds 48")));
    }
    if np < m || np > n as usize {
        return Err(Error::InvalidParameter(format!("n' = {np} outside {m}..={n}")));
    }
    if m * np > 64 {
        return Err(Error::TooManyVariables(m * np));
    }
    Ok(())
}

/// Curve, constant and basis drawn from one seeded stream.
fn draw(
    m: usize,
    n: u32,
    np: usize,
    seed: u64,
    opts: &ExperimentOptions,
) -> Result<(CurveParams, FieldElement, SubspaceBasis)> {
    check_parameters(m, n, np)?;
    let spec = match opts.red {
        Some(red) => FieldSpec::new(n, red)?,
        None => FieldSpec::default_for(n)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let curve = CurveParams::random(spec, &mut rng);
    let c = match opts.c {
        Some(v) => spec.element(v)?,
        None => loop {
            if let Some(x) = curve.random_point(&mut rng).x().filter(|x| !x.is_zero()) {
                break x;
            }
        },
    };
    let basis = make_basis(spec, opts.basis, np, &mut rng)?;
    Ok((curve, c, basis))
}

/// The descended system that `run_experiment` analyses for the same inputs.
pub fn build_instance(m: usize, n: u32, np: usize, seed: u64, opts: &ExperimentOptions) -> Result<DescentSystem> {
    let (curve, c, basis) = draw(m, n, np, seed, opts)?;
    let mut sys = descend(&semaev_poly(m + 1, curve.a6())?, &basis, c)?;
    sys.curve = Some(curve);
    Ok(sys)
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn run_experiment(m: usize, n: u32, np: usize, seed: u64, opts: &ExperimentOptions) -> Result<ExperimentRecord> {
    let (curve, c, basis) = draw(m, n, np, seed, opts)?;
    let mut timings = Timings::default();

    let t = Instant::now();
    let s = semaev_poly(m + 1, curve.a6())?;
    timings.semaev_ms = ms(t);

    let t = Instant::now();
    let mut sys = descend(&s, &basis, c)?;
    sys.curve = Some(curve);
    timings.descent_ms = ms(t);

    let t = Instant::now();
    let g = top_parts_of(&sys)?;
    let report = first_fall(&g, None);
    timings.firstfall_ms = ms(t);

    let t = Instant::now();
    let witness = if opts.witness && m >= 3 && np >= m { Some(witness_for(&sys, &g)?) } else { None };
    timings.witness_ms = ms(t);

    let groebner = match opts.groebner {
        Some(budget) => {
            let t = Instant::now();
            let r = groebner_log_system(&sys, None, budget)?;
            timings.groebner_ms = Some(ms(t));
            Some(GroebnerSummary {
                dff: dff_empirical(&r.log)?,
                dreg: if r.budget_exhausted { None } else { Some(dreg_empirical(&r.log)?) },
                budget_exhausted: r.budget_exhausted,
            })
        }
        None => None,
    };

    Ok(ExperimentRecord {
        m,
        n,
        np,
        seed,
        basis: opts.basis.to_string(),
        c: c.to_string(),
        a2: curve.a2().to_string(),
        a6: curve.a6().to_string(),
        bound: theoretical_bound(m),
        d: report.d,
        dim_drop: report.dim_drop,
        dff_macaulay: report.d_ff,
        witness,
        groebner,
        timings: opts.timings.then_some(timings),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub m: usize,
    pub n: u32,
    pub np: usize,
}

impl TableRow {
    pub fn new(m: usize, n: u32, np: usize) -> Self {
        Self { m, n, np }
    }

    /// `n' = ceil(n / m)`.
    pub fn balanced(m: usize, n: u32) -> Self {
        Self { m, n, np: (n as usize).div_ceil(m) }
    }
}

/// Default rows: `m = 3, 4` at full size, `m = 2` at reduced `n`.
pub fn default_rows() -> Vec<TableRow> {
    let mut rows: Vec<TableRow> = (10..=16).map(|n| TableRow::balanced(2, n)).collect();
    rows.extend((13..=15).map(|n| TableRow::new(3, n, 5)));
    rows.extend((16..=18).map(|n| TableRow::new(3, n, 6)));
    rows.extend((13..=16).map(|n| TableRow::new(4, n, 4)));
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableLine {
    pub m: usize,
    pub n: u32,
    pub np: usize,
    pub bound: u32,
    #[serde(rename = "D_ff")]
    pub dff: String,
    #[serde(rename = "D_reg")]
    pub dreg: String,
    pub repetitions: usize,
}

fn collapse(values: &[Option<u32>]) -> String {
    let mut seen: Vec<String> = Vec::new();
    for v in values {
        let s = v.map_or_else(|| "-".to_string(), |d| d.to_string());
        if !seen.contains(&s) {
            seen.push(s);
        }
    }
    seen.join("/")
}

/// Seeds `0..reps` for every row. A value that varies across seeds is
/// printed as the distinct values joined by `/`.
pub fn reproduce_table(rows: &[TableRow], reps: usize, opts: &ExperimentOptions) -> Result<Vec<TableLine>> {
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut dffs = Vec::with_capacity(reps);
        let mut dregs = Vec::with_capacity(reps);
        for seed in 0..reps as u64 {
            let rec = run_experiment(row.m, row.n, row.np, seed, opts)?;
            dffs.push(rec.dff_macaulay);
            dregs.push(rec.groebner.and_then(|g| g.dreg));
        }
        out.push(TableLine {
            m: row.m,
            n: row.n,
            np: row.np,
            bound: theoretical_bound(row.m),
            dff: collapse(&dffs),
            dreg: if opts.groebner.is_some() { collapse(&dregs) } else { "-".to_string() },
            repetitions: reps,
        });
    }
    Ok(out)
}

pub fn table_csv(lines: &[TableLine]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "n", "np", "bound", "D_ff", "D_reg", "repetitions"])
        .map_err(|e| Error::Parse(e.to_string()))?;
    for l in lines {
        w.write_record([
            l.m.to_string(),
            l.n.to_string(),
            l.np.to_string(),
            l.bound.to_string(),
            l.dff.clone(),
            l.dreg.clone(),
            l.repetitions.to_string(),
        ])
        .map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// `n^(2/3) + 1`
    Old,
    /// `n^(2/3) - n^(1/3) + 1`
    New,
}

impl BoundKind {
    pub fn degree(self, n: f64) -> f64 {
        match self {
            BoundKind::Old => n.powf(2.0 / 3.0) + 1.0,
            BoundKind::New => n.powf(2.0 / 3.0) - n.cbrt() + 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    pub omega: f64,
    pub kind: BoundKind,
}

impl BoundParams {
    pub fn new(omega: f64, kind: BoundKind) -> Result<Self> {
        if !(omega > 2.0 && omega <= 3.0) {
            return Err(Error::InvalidParameter(format!("omega = {omega} outside (2, 3]")));
        }
        Ok(Self { omega, kind })
    }

    pub fn strassen(kind: BoundKind) -> Self {
        Self { omega: 7f64.log2(), kind }
    }
}

const CROSSOVER_LIMIT: u64 = 1 << 40;

/// Smallest `n >= 2` with `(2 omega / 3) log2(n) D(n) < n / 2`.
pub fn crossover(params: BoundParams) -> u64 {
    crossover_with(params.omega, |n| params.kind.degree(n))
}

pub fn crossover_with(omega: f64, degree: impl Fn(f64) -> f64) -> u64 {
    let c = 2.0 * omega / 3.0;
    (2..CROSSOVER_LIMIT)
        .find(|&n| {
            let x = n as f64;
            c * x.log2() * degree(x) < x / 2.0
        })
        .unwrap_or(CROSSOVER_LIMIT)
}
