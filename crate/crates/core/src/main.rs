use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sumpoly::descent::{BasisKind, DescentSystem};
use sumpoly::experiment::{
    build_instance, crossover, default_rows, reproduce_table, run_experiment, table_csv, BoundKind, BoundParams,
    ExperimentOptions, TableRow,
};
use sumpoly::fieldalg::{parse_hex_u128, parse_hex_u64, FieldElement, FieldSpec};
use sumpoly::firstfall::first_fall_of;
use sumpoly::groebner::{dff_empirical, dreg_empirical, groebner_log_system, Budget};
use sumpoly::semaev::{lemma_monomial_check, semaev_poly};

#[derive(Parser)]
#[command(name = "sumpoly", version, about = "Summation polynomials, Weil descent and first fall degrees")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build or inspect the summation polynomial S_{m+1}.
    #[command(subcommand)]
    Semaev(SemaevCmd),
    /// Descend S_{m+1}(x_1, .., x_m, c) to a Boolean system.
    Descent(DescentArgs),
    /// First fall degree of a descended system, or of a fresh instance.
    Firstfall(FirstfallArgs),
    /// Degree-logging Gröbner basis computation.
    Groebner(GroebnerArgs),
    /// Tabulate D_ff and D_reg over repeated seeds.
    Table(TableArgs),
    /// Smallest n where the subexponential bound beats n/2.
    Crossover(CrossoverArgs),
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    n: u32,
    /// Reduction polynomial as a hex mask including the leading bit.
    #[arg(long)]
    red: Option<String>,
}

#[derive(Subcommand)]
enum SemaevCmd {
    /// Write S_{m+1} in the polynomial text format.
    Build {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        a6: String,
    },
    /// Coefficients of the two distinguished monomials of S_{m+1}.
    Lemma {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        a6: String,
    },
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: u32,
    /// Subspace dimension; defaults to ceil(n/m).
    #[arg(long)]
    np: Option<usize>,
    #[arg(long, default_value_t = BasisKind::Random)]
    basis: BasisKind,
    /// Value of x_{m+1}; defaults to the x-coordinate of a random point.
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    red: Option<String>,
}

#[derive(Args)]
struct DescentArgs {
    #[command(flatten)]
    instance: InstanceArgs,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 2048)]
    budget_mem: usize,
    #[arg(long, default_value_t = 3600)]
    budget_sec: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget::new(self.budget_mem, self.budget_sec)
    }
}

#[derive(Args)]
struct FirstfallArgs {
    /// Descent file to analyse.
    #[arg(long = "in", conflicts_with_all = ["m", "n"])]
    input: Option<PathBuf>,
    #[arg(long)]
    j_max: Option<u32>,
    #[arg(long, requires = "n")]
    m: Option<usize>,
    #[arg(long, requires = "m")]
    n: Option<u32>,
    #[arg(long)]
    np: Option<usize>,
    #[arg(long, default_value_t = BasisKind::Random)]
    basis: BasisKind,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    red: Option<String>,
    /// Also run the Gröbner engine.
    #[arg(long)]
    groebner: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Include wall-clock times.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct GroebnerArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    max_deg: Option<u32>,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the step log as JSON here.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// Comma-separated `m:n[:np]` rows; defaults to the built-in rows.
    #[arg(long)]
    rows: Option<String>,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Fill the D_reg column with the Gröbner engine.
    #[arg(long)]
    groebner: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct CrossoverArgs {
    /// Linear algebra exponent; defaults to log2(7).
    #[arg(long)]
    omega: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] sumpoly::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("budget exhausted")]
    Budget(String),
}

type CliResult<T> = std::result::Result<T, CliError>;

fn hex64(s: &str) -> CliResult<u64> {
    parse_hex_u64(s).ok_or_else(|| CliError::Usage(format!("expected 0x-prefixed hex, got {s:?}")))
}

fn hex128(s: &str) -> CliResult<u128> {
    parse_hex_u128(s).ok_or_else(|| CliError::Usage(format!("expected 0x-prefixed hex, got {s:?}")))
}

fn field(f: &FieldArgs) -> CliResult<FieldSpec> {
    Ok(match &f.red {
        Some(r) => FieldSpec::new(f.n, hex128(r)?)?,
        None => FieldSpec::default_for(f.n)?,
    })
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_to(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => write_to(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn options(basis: BasisKind, c: &Option<String>, red: &Option<String>) -> CliResult<ExperimentOptions> {
    Ok(ExperimentOptions {
        basis,
        c: c.as_deref().map(hex64).transpose()?,
        red: red.as_deref().map(hex128).transpose()?,
        ..Default::default()
    })
}

fn parse_rows(s: &str) -> CliResult<Vec<TableRow>> {
    s.split(',')
        .map(|item| {
            let parts: Vec<&str> = item.trim().split(':').collect();
            let num = |p: &str| p.parse::<usize>().map_err(|_| CliError::Usage(format!("bad row {item:?}")));
            match parts.as_slice() {
                [m, n] => Ok(TableRow::balanced(num(m)?, num(n)? as u32)),
                [m, n, np] => Ok(TableRow::new(num(m)?, num(n)? as u32, num(np)?)),
                _ => Err(CliError::Usage(format!("bad row {item:?}, expected m:n or m:n:np"))),
            }
        })
        .collect()
}

#[derive(Serialize)]
struct GroebnerOutput {
    #[serde(rename = "D_ff")]
    dff: Option<u32>,
    #[serde(rename = "D_reg")]
    dreg: Option<u32>,
    budget_exhausted: bool,
    truncated: bool,
    basis: Vec<String>,
}

#[derive(Serialize)]
struct CrossoverOutput {
    omega: f64,
    old: u64,
    new: u64,
}

fn run(cli: Cli) -> CliResult<()> {
    let out = &cli.out;
    match cli.command {
        Command::Semaev(SemaevCmd::Build { m, field: f, a6 }) => {
            let spec = field(&f)?;
            let s = semaev_poly(m + 1, FieldElement::parse(spec, &a6)?)?;
            emit(out, &s.poly().to_string())
        }
        Command::Semaev(SemaevCmd::Lemma { m, field: f, a6 }) => {
            let spec = field(&f)?;
            let s = semaev_poly(m + 1, FieldElement::parse(spec, &a6)?)?;
            emit(out, &json(&lemma_monomial_check(&s)?)?)
        }
        Command::Descent(DescentArgs { instance: i }) => {
            let np = i.np.unwrap_or((i.n as usize).div_ceil(i.m));
            let sys = build_instance(i.m, i.n, np, cli.seed, &options(i.basis, &i.c, &i.red)?)?;
            emit(out, &sys.to_text())
        }
        Command::Firstfall(a) => {
            if let Some(path) = &a.input {
                let sys = DescentSystem::parse(&read(path)?)?;
                return emit(out, &json(&first_fall_of(&sys, a.j_max)?)?);
            }
            let (Some(m), Some(n)) = (a.m, a.n) else {
                return Err(CliError::Usage("firstfall needs --in or both --m and --n".into()));
            };
            let np = a.np.unwrap_or((n as usize).div_ceil(m));
            let mut opts = options(a.basis, &a.c, &a.red)?;
            opts.groebner = a.groebner.then(|| a.budget.budget());
            opts.timings = a.timings;
            let rec = run_experiment(m, n, np, cli.seed, &opts)?;
            emit(out, &json(&rec)?)?;
            match &rec.groebner {
                Some(g) if g.budget_exhausted => Err(CliError::Budget("groebner".into())),
                _ => Ok(()),
            }
        }
        Command::Groebner(a) => {
            let sys = DescentSystem::parse(&read(&a.input)?)?;
            let r = groebner_log_system(&sys, a.max_deg, a.budget.budget())?;
            if let Some(p) = &a.log {
                write_to(p, &format!("{}\n", serde_json::to_string(&r.log)?))?;
            }
            let res = GroebnerOutput {
                dff: if r.log.steps.is_empty() { None } else { dff_empirical(&r.log)? },
                dreg: if r.log.steps.is_empty() { None } else { Some(dreg_empirical(&r.log)?) },
                budget_exhausted: r.budget_exhausted,
                truncated: r.truncated,
                basis: r.basis.iter().map(ToString::to_string).collect(),
            };
            emit(out, &json(&res)?)?;
            if r.budget_exhausted {
                return Err(CliError::Budget("groebner".into()));
            }
            Ok(())
        }
        Command::Table(a) => {
            let rows = match &a.rows {
                Some(s) => parse_rows(s)?,
                None => default_rows(),
            };
            let opts = ExperimentOptions {
                groebner: a.groebner.then(|| a.budget.budget()),
                witness: false,
                ..Default::default()
            };
            let lines = reproduce_table(&rows, a.reps, &opts)?;
            match cli.format {
                Format::Csv => emit(out, &table_csv(&lines)?),
                Format::Json => emit(out, &json(&lines)?),
            }
        }
        Command::Crossover(a) => {
            let omega = a.omega.unwrap_or(7f64.log2());
            let old = crossover(BoundParams::new(omega, BoundKind::Old)?);
            let new = crossover(BoundParams::new(omega, BoundKind::New)?);
            match cli.format {
                Format::Csv => emit(out, &format!("omega,old,new\n{omega},{old},{new}\n")),
                Format::Json => emit(out, &json(&CrossoverOutput { omega, old, new })?),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Budget(what)) => {
            eprintln!("error: {what} budget exhausted");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
