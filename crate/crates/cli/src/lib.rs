//! Command implementations for the `hammock` binary.
//!
//! Every command writes to caller-supplied streams and returns a [`Status`],
//! so the binary stays a thin shell and the commands are testable in-process.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hammock::closed_form::resistance_general;
use hammock::numeric::relative_deviation;
use hammock::oracle::{kirchhoff_index, resistance_dense, ExactTable};
use hammock::recursion::{reconstruct_currents, resistance_rt, CurrentField};
use hammock::spectral::{resistance_spectral, resistance_spectral_with, InverseForm, SpectralOptions};
use hammock::{Arithmetic, DenseCaps, HammockSpec, NodeRef, ResistanceResult};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Overrides the float oracle node cap.
pub const DENSE_CAP_ENV: &str = "HAMMOCK_DENSE_CAP";
/// Overrides the rational oracle node cap.
pub const RATIONAL_CAP_ENV: &str = "HAMMOCK_RATIONAL_CAP";

/// Largest `M * N` for which the bench runs the double-sum spectral form.
const DOUBLE_SUM_CAP: usize = 250_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hammock::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("bad JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    ToleranceBreach,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::ToleranceBreach => 1,
        }
    }
}

/// Exit code for a failed command: always a usage error.
pub const USAGE_EXIT: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    Closed,
    Spectral,
    Rt,
    OracleFloat,
    OracleRational,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// Everything a single resistance query needs. This is also the schema of
/// `--config` files and of the `config` field in JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub spec: HammockSpec,
    pub method: MethodChoice,
    pub from: NodeRef,
    pub to: NodeRef,
    pub format: Format,
    pub tolerance: f64,
    pub caps: DenseCaps,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        check_tolerance(self.tolerance)?;
        self.spec.check_node(self.from)?;
        self.spec.check_node(self.to)?;
        Ok(())
    }
}

fn check_tolerance(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "tolerance must be positive and finite (got {tol})"
        )))
    }
}

/// Dense caps from the environment, falling back to the defaults.
pub fn caps_from_env() -> Result<DenseCaps, CliError> {
    let mut caps = DenseCaps::default();
    for (var, slot) in [
        (DENSE_CAP_ENV, &mut caps.float_nodes),
        (RATIONAL_CAP_ENV, &mut caps.rational_nodes),
    ] {
        if let Ok(raw) = std::env::var(var) {
            *slot = raw
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{var} must be a node count (got '{raw}')")))?;
        }
    }
    Ok(caps)
}

#[derive(Debug, Parser)]
#[command(
    name = "hammock",
    version,
    about = "Two-point resistance of the M x N hammock resistor network"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resistance between two nodes by one or all methods.
    Resist(ResistArgs),
    /// Cross-check every method against the dense oracle over a size range.
    Verify(VerifyArgs),
    /// Dump the vertical current distribution for a source/sink pair.
    Currents(CurrentsArgs),
    /// Time each method over a list of lattice sizes (CSV).
    Bench(BenchArgs),
    /// Sum of resistances over all node pairs.
    Kirchhoff(KirchhoffArgs),
    /// Write the resistor list as CSV.
    Edges(LatticeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct LatticeArgs {
    /// Number of rows.
    #[arg(long = "M")]
    pub rows: usize,
    /// Number of columns.
    #[arg(long = "N")]
    pub cols: usize,
    /// Horizontal resistance.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Vertical resistance (also the terminal links).
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
}

impl LatticeArgs {
    fn spec(&self) -> Result<HammockSpec, CliError> {
        Ok(HammockSpec::new(self.rows, self.cols, self.r, self.s)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ResistArgs {
    /// Read the whole query from a JSON RunConfig instead of flags.
    #[arg(long, conflicts_with_all = ["rows", "cols", "from", "to"])]
    pub config: Option<PathBuf>,
    #[arg(long = "M")]
    pub rows: Option<usize>,
    #[arg(long = "N")]
    pub cols: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    /// First node: `x,y`, `O` or `OP`.
    #[arg(long)]
    pub from: Option<NodeRef>,
    /// Second node: `x,y`, `O` or `OP`.
    #[arg(long)]
    pub to: Option<NodeRef>,
    #[arg(long, value_enum, default_value_t = MethodChoice::Closed)]
    pub method: MethodChoice,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Largest acceptable pairwise relative deviation for `--method all`.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

impl ResistArgs {
    pub fn to_config(&self) -> Result<RunConfig, CliError> {
        let config = match &self.config {
            Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
            None => {
                let missing = |what: &str| CliError::Usage(format!("--{what} is required without --config"));
                RunConfig {
                    spec: HammockSpec::new(
                        self.rows.ok_or_else(|| missing("M"))?,
                        self.cols.ok_or_else(|| missing("N"))?,
                        self.r,
                        self.s,
                    )?,
                    method: self.method,
                    from: self.from.ok_or_else(|| missing("from"))?,
                    to: self.to.ok_or_else(|| missing("to"))?,
                    format: self.format,
                    tolerance: self.tol,
                    caps: caps_from_env()?,
                }
            }
        };
        config.validate()?;
        Ok(config)
    }
}

/// An inclusive size range written `a..b` or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeRange {
    pub lo: usize,
    pub hi: usize,
}

impl std::str::FromStr for SizeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad size '{t}'"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo == 0 || lo > hi {
            return Err(format!("range '{s}' must satisfy 1 <= lo <= hi"));
        }
        Ok(SizeRange { lo, hi })
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Row counts, e.g. `1..4`.
    #[arg(long = "M", default_value = "1..4")]
    pub rows: SizeRange,
    /// Column counts, e.g. `1..4`.
    #[arg(long = "N", default_value = "1..4")]
    pub cols: SizeRange,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Check this many random pairs per size instead of all of them.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct CurrentsArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Node where the current enters.
    #[arg(long)]
    pub from: NodeRef,
    /// Node where the current leaves.
    #[arg(long)]
    pub to: NodeRef,
    /// Injected current in amperes.
    #[arg(long = "J", default_value_t = 1.0, allow_negative_numbers = true)]
    pub current: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchMethod {
    Closed,
    Rt,
    Spectral,
    SpectralDouble,
    OracleFloat,
    OracleRational,
}

impl BenchMethod {
    fn name(self) -> &'static str {
        match self {
            BenchMethod::Closed => "closed",
            BenchMethod::Rt => "rt",
            BenchMethod::Spectral => "spectral",
            BenchMethod::SpectralDouble => "spectral-double",
            BenchMethod::OracleFloat => "oracle-float",
            BenchMethod::OracleRational => "oracle-rational",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Square lattice sizes (M = N).
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub sizes: Vec<usize>,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "closed,rt,spectral,spectral-double,oracle-float,oracle-rational"
    )]
    pub methods: Vec<BenchMethod>,
    /// Timed repetitions per (size, method); the median is reported.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
}

#[derive(Debug, Clone, Args)]
pub struct KirchhoffArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[arg(long, value_enum, default_value_t = ArithChoice::Rational)]
    pub arith: ArithChoice,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArithChoice {
    Float,
    Rational,
}

impl From<ArithChoice> for Arithmetic {
    fn from(a: ArithChoice) -> Self {
        match a {
            ArithChoice::Float => Arithmetic::Float,
            ArithChoice::Rational => Arithmetic::Rational,
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status, CliError> {
    match &cli.command {
        Command::Resist(args) => cmd_resist(&args.to_config()?, out, err),
        Command::Verify(args) => cmd_verify(args, &caps_from_env()?, out),
        Command::Currents(args) => cmd_currents(args, out, err),
        Command::Bench(args) => cmd_bench(args, &caps_from_env()?, out),
        Command::Kirchhoff(args) => cmd_kirchhoff(args, &caps_from_env()?, out),
        Command::Edges(args) => {
            let edges = hammock::lattice::build_edge_list(&args.spec()?);
            hammock::lattice::write_edge_csv(&edges, out)?;
            Ok(Status::Pass)
        }
    }
}

/// Largest relative deviation over all pairs of values.
fn max_pairwise_deviation(values: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, &a) in values.iter().enumerate() {
        for &b in &values[i + 1..] {
            worst = worst.max(relative_deviation(a, b));
        }
    }
    worst
}

/// The oracle that fits under the caps, preferring exact arithmetic.
fn oracle_arith(spec: &HammockSpec, caps: &DenseCaps) -> Option<Arithmetic> {
    if spec.node_count() <= caps.rational_nodes {
        Some(Arithmetic::Rational)
    } else if spec.node_count() <= caps.float_nodes {
        Some(Arithmetic::Float)
    } else {
        None
    }
}

fn evaluate(config: &RunConfig, err: &mut dyn Write) -> Result<Vec<ResistanceResult>, CliError> {
    let (spec, a, b, caps) = (&config.spec, config.from, config.to, config.caps);
    let interior = a.is_interior() && b.is_interior();
    let results = match config.method {
        MethodChoice::Closed => vec![resistance_general(spec, a, b)?],
        MethodChoice::Spectral => vec![resistance_spectral(spec, a, b)?],
        MethodChoice::Rt => vec![resistance_rt(spec, a, b)?],
        MethodChoice::OracleFloat => vec![resistance_dense(spec, a, b, Arithmetic::Float, caps)?],
        MethodChoice::OracleRational => vec![resistance_dense(spec, a, b, Arithmetic::Rational, caps)?],
        MethodChoice::All => {
            let mut results = Vec::new();
            if interior {
                results.push(resistance_general(spec, a, b)?);
                results.push(resistance_spectral(spec, a, b)?);
                results.push(resistance_rt(spec, a, b)?);
            } else {
                writeln!(
                    err,
                    "warning: closed, spectral and rt need two interior nodes; falling back to the dense oracle"
                )?;
            }
            match oracle_arith(spec, &caps) {
                Some(arith) => results.push(resistance_dense(spec, a, b, arith, caps)?),
                None if interior => writeln!(
                    err,
                    "warning: {} nodes exceed the dense caps; oracle skipped",
                    spec.node_count()
                )?,
                None => {
                    return Err(hammock::Error::SizeCap {
                        nodes: spec.node_count(),
                        cap: caps.float_nodes,
                        what: "the dense oracle",
                    }
                    .into())
                }
            }
            results
        }
    };
    Ok(results)
}

#[derive(Serialize)]
struct ResultLine<'a> {
    config: &'a RunConfig,
    #[serde(flatten)]
    result: &'a ResistanceResult,
}

#[derive(Serialize)]
struct SummaryLine {
    max_deviation: f64,
    tolerance: f64,
    pass: bool,
}

pub fn cmd_resist(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status, CliError> {
    config.validate()?;
    let results = evaluate(config, err)?;
    let values: Vec<f64> = results.iter().map(|r| r.ohms).collect();
    let deviation = max_pairwise_deviation(&values);
    let status = if deviation <= config.tolerance {
        Status::Pass
    } else {
        Status::ToleranceBreach
    };
    let compare = results.len() > 1;
    match config.format {
        Format::Human => {
            let sp = &config.spec;
            writeln!(
                out,
                "resistance between {} and {} on a {} x {} hammock (r={}, s={})",
                config.from,
                config.to,
                sp.rows(),
                sp.cols(),
                sp.r(),
                sp.s()
            )?;
            for r in &results {
                let exact = r.exact.as_ref().map(|q| format!("  (exact {q})")).unwrap_or_default();
                writeln!(out, "  {:<16} {}{exact}", r.method.name(), r.ohms)?;
            }
            if compare {
                let verdict = if status == Status::Pass { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "max relative deviation {deviation:e} (tolerance {:e}): {verdict}",
                    config.tolerance
                )?;
            }
        }
        Format::Json => {
            for r in &results {
                serde_json::to_writer(&mut *out, &ResultLine { config, result: r })?;
                writeln!(out)?;
            }
            if compare {
                let summary = SummaryLine {
                    max_deviation: deviation,
                    tolerance: config.tolerance,
                    pass: status == Status::Pass,
                };
                serde_json::to_writer(&mut *out, &summary)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            writeln!(out, "method,ohms,exact,swapped,terms")?;
            for r in &results {
                let exact = r.exact.as_ref().map(ToString::to_string).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.method.name(),
                    r.ohms,
                    exact,
                    r.swapped,
                    r.terms
                )?;
            }
        }
    }
    Ok(status)
}

#[derive(Debug, Clone, Serialize)]
struct SizeReport {
    rows: usize,
    cols: usize,
    pairs: usize,
    oracle: &'static str,
    max_deviation: f64,
    failures: Vec<String>,
}

fn verify_size(
    spec: &HammockSpec,
    args: &VerifyArgs,
    caps: &DenseCaps,
    rng: &mut ChaCha8Rng,
) -> Result<SizeReport, CliError> {
    let nodes: Vec<NodeRef> = spec.interior_nodes().collect();
    let mut pairs = Vec::new();
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            pairs.push((a, b));
        }
    }
    if let Some(k) = args.samples {
        pairs.shuffle(rng);
        pairs.truncate(k);
        pairs.sort();
    }
    let arith = oracle_arith(spec, caps).ok_or(hammock::Error::SizeCap {
        nodes: spec.node_count(),
        cap: caps.float_nodes,
        what: "verify",
    })?;
    let table = match arith {
        Arithmetic::Rational if !pairs.is_empty() => Some(ExactTable::new(spec, *caps)?),
        _ => None,
    };
    let mut report = SizeReport {
        rows: spec.rows(),
        cols: spec.cols(),
        pairs: pairs.len(),
        oracle: if arith == Arithmetic::Rational {
            "oracle-rational"
        } else {
            "oracle-float"
        },
        max_deviation: 0.0,
        failures: Vec::new(),
    };
    for (a, b) in pairs {
        let truth = match &table {
            Some(t) => rational_to_f64(&t.resistance(a, b)?),
            None => resistance_dense(spec, a, b, arith, *caps)?.ohms,
        };
        let values = [
            resistance_general(spec, a, b)?.ohms,
            resistance_spectral(spec, a, b)?.ohms,
            resistance_rt(spec, a, b)?.ohms,
            truth,
        ];
        let dev = max_pairwise_deviation(&values);
        report.max_deviation = report.max_deviation.max(dev);
        if dev.is_nan() || dev > args.tol {
            report.failures.push(format!("{a}-{b}: deviation {dev:e}"));
        }
    }
    Ok(report)
}

fn rational_to_f64(q: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn cmd_verify(args: &VerifyArgs, caps: &DenseCaps, out: &mut dyn Write) -> Result<Status, CliError> {
    check_tolerance(args.tol)?;
    // cap check up front so no work is wasted on a range that cannot finish
    let largest = HammockSpec::new(args.rows.hi, args.cols.hi, args.r, args.s)?;
    if oracle_arith(&largest, caps).is_none() {
        return Err(hammock::Error::SizeCap {
            nodes: largest.node_count(),
            cap: caps.float_nodes,
            what: "verify",
        }
        .into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut reports = Vec::new();
    for m in args.rows.lo..=args.rows.hi {
        for n in args.cols.lo..=args.cols.hi {
            let spec = HammockSpec::new(m, n, args.r, args.s)?;
            reports.push(verify_size(&spec, args, caps, &mut rng)?);
        }
    }
    let worst = reports.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    let pairs: usize = reports.iter().map(|r| r.pairs).sum();
    let failed = reports.iter().any(|r| !r.failures.is_empty());
    let status = if failed { Status::ToleranceBreach } else { Status::Pass };
    let verdict = if failed { "FAIL" } else { "PASS" };
    match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                sizes: &'a [SizeReport],
                pairs: usize,
                max_deviation: f64,
                tolerance: f64,
                pass: bool,
            }
            serde_json::to_writer(
                &mut *out,
                &Report {
                    sizes: &reports,
                    pairs,
                    max_deviation: worst,
                    tolerance: args.tol,
                    pass: !failed,
                },
            )?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "M,N,pairs,oracle,max_deviation,failures")?;
            for r in &reports {
                writeln!(
                    out,
                    "{},{},{},{},{:e},{}",
                    r.rows,
                    r.cols,
                    r.pairs,
                    r.oracle,
                    r.max_deviation,
                    r.failures.len()
                )?;
            }
        }
        Format::Human => {
            for r in &reports {
                writeln!(
                    out,
                    "{:>3} x {:<3} {:>6} pairs  vs {:<16} max deviation {:.3e}",
                    r.rows, r.cols, r.pairs, r.oracle, r.max_deviation
                )?;
                for f in r.failures.iter().take(10) {
                    writeln!(out, "    failing pair {f}")?;
                }
            }
            writeln!(
                out,
                "{verdict}: {pairs} pairs, max deviation {worst:.3e} (tolerance {:e})",
                args.tol
            )?;
        }
    }
    Ok(status)
}

pub fn cmd_currents(args: &CurrentsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status, CliError> {
    let spec = args.lattice.spec()?;
    for node in [args.from, args.to] {
        if !node.is_interior() {
            return Err(CliError::Usage(format!(
                "current fields need interior source and sink nodes (got {node})"
            )));
        }
    }
    let field = reconstruct_currents(&spec, args.from, args.to, args.current)?;
    let audit = field.kirchhoff_audit();
    let residual = field.recurrence_residual();
    let summary = format!(
        "max node imbalance {:.3e} A, rail mismatch {:.3e} A, recurrence residual {:.3e} A",
        audit.max_node_imbalance, audit.max_rail_mismatch, residual
    );
    match args.format {
        Format::Csv => {
            field.write_csv(&mut *out)?;
            writeln!(err, "{summary}")?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Entry {
                k: usize,
                i: usize,
                current: f64,
            }
            #[derive(Serialize)]
            struct Dump<'a> {
                spec: &'a HammockSpec,
                j: f64,
                source: NodeRef,
                sink: NodeRef,
                currents: Vec<Entry>,
                audit: hammock::recursion::KirchhoffAudit,
                recurrence_residual: f64,
            }
            serde_json::to_writer(
                &mut *out,
                &Dump {
                    spec: &spec,
                    j: field.j,
                    source: field.source,
                    sink: field.sink,
                    currents: entries(&field).map(|(k, i, current)| Entry { k, i, current }).collect(),
                    audit,
                    recurrence_residual: residual,
                },
            )?;
            writeln!(out)?;
        }
        Format::Human => {
            writeln!(
                out,
                "upward current I_k(i), {} A from {} to {}",
                field.j, field.source, field.sink
            )?;
            for i in (1..=spec.rows() + 1).rev() {
                let mut line = format!("i={i:<4}");
                for k in 1..=spec.cols() {
                    let _ = write!(line, " {:>12.6e}", field.current(k, i));
                }
                writeln!(out, "{line}")?;
            }
            writeln!(out, "{summary}")?;
        }
    }
    Ok(Status::Pass)
}

fn entries(field: &CurrentField) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
    field
        .columns
        .iter()
        .enumerate()
        .flat_map(|(k, col)| col.iter().enumerate().map(move |(i, &v)| (k + 1, i + 1, v)))
}

/// A pair away from the edges, spanning most of the lattice.
fn bench_pair(spec: &HammockSpec) -> (NodeRef, NodeRef) {
    let (m, n) = (spec.rows(), spec.cols());
    (
        NodeRef::interior(1 + n / 8, 1 + m / 8),
        NodeRef::interior(n - n / 8, m - m / 8),
    )
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        0.5 * (xs[mid - 1] + xs[mid])
    }
}

pub fn cmd_bench(args: &BenchArgs, caps: &DenseCaps, out: &mut dyn Write) -> Result<Status, CliError> {
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    writeln!(out, "M,N,method,wall_time_s,result,note")?;
    for &size in &args.sizes {
        let spec = HammockSpec::new(size, size, args.r, args.s)?;
        let (a, b) = bench_pair(&spec);
        for &method in &args.methods {
            let excluded = match method {
                BenchMethod::SpectralDouble if size * size > DOUBLE_SUM_CAP => Some(format!(
                    "excluded: M*N={} exceeds double-sum cap {DOUBLE_SUM_CAP}",
                    size * size
                )),
                BenchMethod::OracleFloat if spec.node_count() > caps.float_nodes => Some(format!(
                    "excluded: {} nodes exceeds float oracle cap {}",
                    spec.node_count(),
                    caps.float_nodes
                )),
                BenchMethod::OracleRational if spec.node_count() > caps.rational_nodes => Some(format!(
                    "excluded: {} nodes exceeds rational oracle cap {}",
                    spec.node_count(),
                    caps.rational_nodes
                )),
                _ => None,
            };
            if let Some(note) = excluded {
                writeln!(out, "{size},{size},{},,,{note}", method.name())?;
                continue;
            }
            let mut times = Vec::with_capacity(args.reps);
            let mut value = f64::NAN;
            for _ in 0..args.reps {
                let start = Instant::now();
                value = match method {
                    BenchMethod::Closed => resistance_general(&spec, a, b)?.ohms,
                    BenchMethod::Rt => resistance_rt(&spec, a, b)?.ohms,
                    BenchMethod::Spectral => resistance_spectral(&spec, a, b)?.ohms,
                    BenchMethod::SpectralDouble => {
                        let options = SpectralOptions {
                            form: InverseForm::DoubleSum,
                            ..SpectralOptions::default()
                        };
                        resistance_spectral_with(&spec, a, b, options)?.ohms
                    }
                    BenchMethod::OracleFloat => resistance_dense(&spec, a, b, Arithmetic::Float, *caps)?.ohms,
                    BenchMethod::OracleRational => resistance_dense(&spec, a, b, Arithmetic::Rational, *caps)?.ohms,
                };
                times.push(start.elapsed().as_secs_f64());
            }
            writeln!(out, "{size},{size},{},{:e},{},", method.name(), median(times), value)?;
        }
    }
    Ok(Status::Pass)
}

pub fn cmd_kirchhoff(args: &KirchhoffArgs, caps: &DenseCaps, out: &mut dyn Write) -> Result<Status, CliError> {
    let spec = args.lattice.spec()?;
    let index = kirchhoff_index(&spec, args.arith.into(), *caps)?;
    match args.format {
        Format::Json => {
            serde_json::to_writer(&mut *out, &index)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "M,N,r,s,kirchhoff_index,exact")?;
            let exact = index.exact.as_ref().map(ToString::to_string).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{exact}",
                spec.rows(),
                spec.cols(),
                spec.r(),
                spec.s(),
                index.value
            )?;
        }
        Format::Human => match &index.exact {
            Some(q) => writeln!(out, "Kirchhoff index {} (exact {q})", index.value)?,
            None => writeln!(out, "Kirchhoff index {}", index.value)?,
        },
    }
    Ok(Status::Pass)
}
