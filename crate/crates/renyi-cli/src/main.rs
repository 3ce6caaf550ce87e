//! `renyi`: command-line access to the conditional-entropy library.
//!
//! One verb per invocation. Scalar results and JSON reports go to standard
//! output; CSV artifacts go to the path named by `--out`, written through a
//! temp file in the destination directory so readers never observe a partial
//! file. Exit status: 0 on success, 1 when a verification suite reports a
//! failed assertion or a computation fails, 2 on a usage error (with a
//! synopsis on standard error).
//!
//! `RENYI_PRECISION={double|extended}` selects the working precision for the
//! verbs that support both; an explicit `--precision` flag wins over it.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use renyi_combining::analysis::{
    gap_csv, verify_appendix_identities, verify_counterexample_a, verify_counterexample_c,
    verify_linearity, LinearityCase,
};
use renyi_combining::combining::check_bounds;
use renyi_combining::entropy::alpha_grid;
use renyi_combining::{
    classify_convexity, polarize_tree, Alpha, BinaryChannel, ConvexityVerdict, CurveKind,
    EntropyKind, Extended, MergePolicy, PolarConfig, Precision, Real,
};

const SYNOPSIS: &str = "\
usage: renyi <verb> [options]
  entropy  --kind <A|H|J|C|shannon|min> --alpha <order|inf> --channel <path|bsc:p|bec:e> [--bits]
  bounds   --kind <A|H|J|C|shannon|min> --alpha <order|inf> --ch1 <spec> --ch2 <spec>
  gap      --kind <A|H|C> --p <prob> --alpha-range <start:end:step> --out <csv>
  scan     --func <kkA|kkH|hh> --alpha-range <start:end:step> --grid <n> [--tol <t>]
  verify   <ce-a|ce-c|linear|appendix|all> [--precision <double|extended>] [--seed <n>] [--samples <n>]
  polarize --alpha <order> --channel <spec> --depth <n> --a <low> --b <high> [--merge] --out <csv>
environment: RENYI_PRECISION=<double|extended> sets the default precision";

/// How an invocation went wrong. Usage failures exit 2 and print the
/// synopsis; run failures exit 1 with the error alone.
enum Failure {
    Usage(String),
    Run(String),
}

impl From<renyi_combining::Error> for Failure {
    fn from(e: renyi_combining::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

/// A numeric flag that keeps its decimal text alongside the parsed value, so
/// extended-precision runs can re-read the digits at full precision instead
/// of inheriting double rounding.
#[derive(Clone, Debug)]
struct Decimal {
    raw: String,
    value: f64,
}

impl Decimal {
    fn at<R: Real>(&self) -> R {
        R::parse(&self.raw).unwrap_or_else(|| R::from_f64(self.value))
    }
}

fn parse_decimal(s: &str) -> Result<Decimal, String> {
    let value: f64 = s
        .parse()
        .map_err(|_| format!("expected a number, got {s:?}"))?;
    if !value.is_finite() {
        return Err(format!("expected a finite number, got {s:?}"));
    }
    Ok(Decimal { raw: s.to_string(), value })
}

fn parse_crossover(s: &str) -> Result<Decimal, String> {
    let d = parse_decimal(s)?;
    if d.value > 0.0 && d.value <= 0.5 {
        Ok(d)
    } else {
        Err(format!("crossover must lie in (0, 1/2], got {s}"))
    }
}

fn parse_tolerance(s: &str) -> Result<Decimal, String> {
    let d = parse_decimal(s)?;
    if d.value > 0.0 {
        Ok(d)
    } else {
        Err(format!("tolerance must be positive, got {s}"))
    }
}

/// `start:end:step` order range; the end is excluded from the grid.
#[derive(Clone, Debug)]
struct OrderRange {
    start: Decimal,
    end: Decimal,
    step: Decimal,
}

impl OrderRange {
    fn grid<R: Real>(&self) -> renyi_combining::Result<Vec<Alpha<R>>> {
        alpha_grid(&self.start.at::<R>(), &self.end.at(), &self.step.at())
    }
}

fn parse_range(s: &str) -> Result<OrderRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let &[start, end, step] = parts.as_slice() else {
        return Err(format!("expected start:end:step, got {s:?}"));
    };
    let start = parse_decimal(start)?;
    let end = parse_decimal(end)?;
    let step = parse_decimal(step)?;
    if start.value <= 0.0 {
        return Err(format!("orders must be positive; range starts at {}", start.raw));
    }
    if step.value <= 0.0 {
        return Err(format!("step must be positive, got {}", step.raw));
    }
    if end.value < start.value {
        return Err(format!("range end {} is below its start {}", end.raw, start.raw));
    }
    Ok(OrderRange { start, end, step })
}

fn parse_alpha(s: &str) -> Result<Alpha<f64>, String> {
    if matches!(s, "inf" | "Inf" | "INF" | "infinity" | "∞") {
        return Ok(Alpha::Infinity);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| format!("expected a positive order or \"inf\", got {s:?}"))?;
    Alpha::new(v).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<EntropyKind, String> {
    s.parse().map_err(|e: renyi_combining::Error| e.to_string())
}

/// The gap against the erasure expression is defined for the three kinds
/// with a closed-form erasure bound in matching coordinates.
fn parse_gap_kind(s: &str) -> Result<EntropyKind, String> {
    match parse_kind(s)? {
        k @ (EntropyKind::Arimoto | EntropyKind::Hayashi | EntropyKind::Cachin) => Ok(k),
        other => Err(format!("the gap is defined for kinds A, H, and C; got {other}")),
    }
}

fn parse_curve(s: &str) -> Result<CurveKind, String> {
    s.parse().map_err(|e: renyi_combining::Error| e.to_string())
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let n: usize = s
        .parse()
        .map_err(|_| format!("expected a point count, got {s:?}"))?;
    if n >= 16 {
        Ok(n)
    } else {
        Err(format!("need at least 16 grid points per axis, got {n}"))
    }
}

fn parse_samples(s: &str) -> Result<usize, String> {
    let n: usize = s
        .parse()
        .map_err(|_| format!("expected a sample count, got {s:?}"))?;
    if n >= 1 {
        Ok(n)
    } else {
        Err("need at least one sample".to_string())
    }
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    match s {
        "double" => Ok(Precision::Double),
        "extended" => Ok(Precision::Extended),
        other => Err(format!("expected double or extended, got {other:?}")),
    }
}

#[derive(Clone, Copy, Debug)]
enum Suite {
    CeA,
    CeC,
    Linear,
    Appendix,
    All,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    match s {
        "ce-a" => Ok(Suite::CeA),
        "ce-c" => Ok(Suite::CeC),
        "linear" => Ok(Suite::Linear),
        "appendix" => Ok(Suite::Appendix),
        "all" => Ok(Suite::All),
        other => Err(format!(
            "unknown suite {other:?}; expected ce-a, ce-c, linear, appendix, or all"
        )),
    }
}

#[derive(Parser)]
#[command(
    name = "renyi",
    version,
    about = "Conditional Rényi entropies of binary-input channels: values, \
             combining bounds, curvature scans, and polarization runs",
    after_help = "Channel specs are a JSON/CSV path, bsc:<p>, or bec:<eps>. \
                  RENYI_PRECISION={double|extended} sets the default precision."
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Conditional entropy of one channel under a chosen definition
    Entropy {
        /// Entropy definition: A, H, J, C, shannon, or min
        #[arg(long, value_parser = parse_kind)]
        kind: EntropyKind,
        /// Order: a positive number, or "inf" (kind A only)
        #[arg(long, value_parser = parse_alpha)]
        alpha: Alpha<f64>,
        /// Channel: a JSON/CSV path, bsc:<p>, or bec:<eps>
        #[arg(long)]
        channel: String,
        /// Report in bits instead of nats
        #[arg(long)]
        bits: bool,
    },
    /// Entropy of a combined pair against both closed-form expressions, as JSON
    Bounds {
        /// Entropy definition: A, H, J, C, shannon, or min
        #[arg(long, value_parser = parse_kind)]
        kind: EntropyKind,
        /// Order: a positive number, or "inf" (kind A only)
        #[arg(long, value_parser = parse_alpha)]
        alpha: Alpha<f64>,
        /// First channel spec
        #[arg(long)]
        ch1: String,
        /// Second channel spec
        #[arg(long)]
        ch2: String,
    },
    /// Gap between a doubled symmetric channel and the erasure expression,
    /// swept over an order range, as CSV
    Gap {
        /// Entropy definition: A, H, or C
        #[arg(long, value_parser = parse_gap_kind)]
        kind: EntropyKind,
        /// Crossover probability in (0, 1/2]
        #[arg(long, value_parser = parse_crossover)]
        p: Decimal,
        /// Order grid start:end:step, end excluded
        #[arg(long, value_parser = parse_range)]
        alpha_range: OrderRange,
        /// Destination CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Numerical curvature classification of a combining curve over an order
    /// range, as a JSON verdict table
    Scan {
        /// Combining curve: kkA, kkH, or hh
        #[arg(long, value_parser = parse_curve)]
        func: CurveKind,
        /// Order grid start:end:step, end excluded
        #[arg(long, value_parser = parse_range)]
        alpha_range: OrderRange,
        /// Grid points per axis, at least 16
        #[arg(long, value_parser = parse_grid)]
        grid: usize,
        /// Curvature threshold override
        #[arg(long, value_parser = parse_tolerance)]
        tol: Option<Decimal>,
    },
    /// Run a verification suite; exits nonzero if any assertion fails
    Verify {
        /// Suite: ce-a, ce-c, linear, appendix, or all
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        /// Working precision; overrides RENYI_PRECISION
        #[arg(long, value_parser = parse_precision)]
        precision: Option<Precision>,
        /// Seed for the sampled linearity suite
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Channel pairs sampled by the linearity suite
        #[arg(long, default_value_t = 1000, value_parser = parse_samples)]
        samples: usize,
    },
    /// Polarization tree: per-node CSV to --out, per-level statistics JSON
    /// to standard output
    Polarize {
        /// Order: a positive number; the infinite order does not polarize here
        #[arg(long, value_parser = parse_alpha)]
        alpha: Alpha<f64>,
        /// Root channel spec
        #[arg(long)]
        channel: String,
        /// Tree depth (levels below the root)
        #[arg(long)]
        depth: usize,
        /// Lower threshold on i-values, in (0, 1)
        #[arg(long)]
        a: f64,
        /// Upper threshold on i-values, in (0, 1)
        #[arg(long)]
        b: f64,
        /// Merge posterior-equivalent outputs between levels (order 1 only)
        #[arg(long)]
        merge: bool,
        /// Destination CSV path
        #[arg(long)]
        out: PathBuf,
    },
}

/// Precision from `RENYI_PRECISION`, defaulting to double; an explicit flag
/// wins over the environment.
fn effective_precision(flag: Option<Precision>) -> Result<Precision, Failure> {
    if let Some(p) = flag {
        return Ok(p);
    }
    match std::env::var("RENYI_PRECISION") {
        Err(_) => Ok(Precision::Double),
        Ok(v) => parse_precision(&v)
            .map_err(|_| Failure::Usage(format!("RENYI_PRECISION must be double or extended, got {v:?}"))),
    }
}

/// The Hayashi, Jizba, and Cachin definitions have no infinite-order limit;
/// reject the combination before touching any channel data.
fn require_finite_order(kind: EntropyKind, alpha: &Alpha<f64>) -> Result<(), Failure> {
    if matches!(alpha, Alpha::Infinity)
        && matches!(kind, EntropyKind::Hayashi | EntropyKind::Jizba | EntropyKind::Cachin)
    {
        return Err(Failure::Usage(format!("kind {kind} has no infinite-order limit")));
    }
    Ok(())
}

/// Write through a temp file in the destination directory and rename into
/// place, so a crash never leaves a truncated artifact behind.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| Failure::Run(e.to_string()))?;
    Ok(())
}

fn scan_verdicts<R: Real>(
    func: CurveKind,
    range: &OrderRange,
    grid: usize,
    tol: Option<&Decimal>,
) -> renyi_combining::Result<Vec<ConvexityVerdict>> {
    range
        .grid::<R>()?
        .iter()
        .map(|a| classify_convexity(func, a, grid, tol.map(|d| d.at::<R>())))
        .collect()
}

fn run_verify(
    suite: Suite,
    precision: Precision,
    seed: u64,
    samples: usize,
) -> Result<bool, Failure> {
    let mut passed = true;
    let mut emit = |text: String, ok: bool| {
        println!("{}", text.trim_end());
        passed &= ok;
    };
    if matches!(suite, Suite::CeA | Suite::All) {
        let r = verify_counterexample_a(precision)?;
        emit(r.to_text(), r.passed);
    }
    if matches!(suite, Suite::CeC | Suite::All) {
        let r = verify_counterexample_c(precision)?;
        emit(r.to_text(), r.passed);
    }
    if matches!(suite, Suite::Linear | Suite::All) {
        for case in LinearityCase::ALL {
            let r = verify_linearity(case, seed, samples)?;
            emit(r.to_text(), r.passed);
        }
    }
    if matches!(suite, Suite::Appendix | Suite::All) {
        let r = verify_appendix_identities()?;
        emit(r.to_text(), r.passed);
    }
    Ok(passed)
}

/// Execute one verb. `Ok(false)` means a verification suite ran to
/// completion but reported failed assertions.
fn dispatch(verb: Verb) -> Result<bool, Failure> {
    match verb {
        Verb::Entropy { kind, alpha, channel, bits } => {
            require_finite_order(kind, &alpha)?;
            let w = BinaryChannel::from_arg(&channel)?;
            let h = w.cond_entropy(&alpha, kind)?;
            let value = if bits { h / std::f64::consts::LN_2 } else { h };
            println!("{value}");
            Ok(true)
        }
        Verb::Bounds { kind, alpha, ch1, ch2 } => {
            require_finite_order(kind, &alpha)?;
            let j1 = BinaryChannel::from_arg(&ch1)?.to_joint();
            let j2 = BinaryChannel::from_arg(&ch2)?.to_joint();
            let report = check_bounds(&j1, &j2, &alpha, kind)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
        Verb::Gap { kind, p, alpha_range, out } => {
            let csv = match effective_precision(None)? {
                Precision::Double => gap_csv::<f64>(
                    kind,
                    &p.at(),
                    &alpha_range.start.at(),
                    &alpha_range.end.at(),
                    &alpha_range.step.at(),
                )?,
                Precision::Extended => gap_csv::<Extended>(
                    kind,
                    &p.at(),
                    &alpha_range.start.at(),
                    &alpha_range.end.at(),
                    &alpha_range.step.at(),
                )?,
            };
            write_atomic(&out, &csv)?;
            Ok(true)
        }
        Verb::Scan { func, alpha_range, grid, tol } => {
            let verdicts = match effective_precision(None)? {
                Precision::Double => scan_verdicts::<f64>(func, &alpha_range, grid, tol.as_ref())?,
                Precision::Extended => {
                    scan_verdicts::<Extended>(func, &alpha_range, grid, tol.as_ref())?
                }
            };
            println!("{}", serde_json::to_string_pretty(&verdicts)?);
            Ok(true)
        }
        Verb::Verify { suite, precision, seed, samples } => {
            let precision = effective_precision(precision)?;
            run_verify(suite, precision, seed, samples)
        }
        Verb::Polarize { alpha, channel, depth, a, b, merge, out } => {
            let policy = if merge { MergePolicy::PosteriorMerge } else { MergePolicy::None };
            let cfg = PolarConfig::new(alpha, depth, a, b, policy)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let w = BinaryChannel::from_arg(&channel)?;
            let run = polarize_tree(&w, &cfg)?;
            write_atomic(&out, &run.to_csv())?;
            println!("{}", run.levels_json());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().verb) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("{SYNOPSIS}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
