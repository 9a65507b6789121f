//! `cantor-union`: decide self-similarity of `Γ ∪ (Γ+t_1) ∪ … ∪ (Γ+t_m)`.
//!
//! Digit strings are written lowest index first: `-t 1,0,1` is the element
//! `((1-β)/N)(β^{-1} + β^{-3})`. The zero entry `t_0` is implicit.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use cantor_union::admissibility::{decide_self_similar, CheckMode, Decision, Regime, Side};
use cantor_union::construct::construct_admissible;
use cantor_union::digits::{check_cap, DigitString, TranslationVector, VectorJson};
use cantor_union::enumerate::{count_self_similar, enumerate_admissible, DEFAULT_ENUMERATION_BUDGET};
use cantor_union::exec::Execution;
use cantor_union::graph::build_graph;
use cantor_union::ifs::{extract_ifs, prune, MapJson};
use cantor_union::laurent::Beta;
use cantor_union::numeric::{verify_numeric, NumericOptions, DEFAULT_SEED, DEFAULT_TOLERANCE};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const EXIT_PARSE: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_OTHER: u8 = 5;

/// Exact self-similarity decisions for unions of a homogeneous Cantor set with its translates.
#[derive(Parser)]
#[command(name = "cantor-union", version)]
struct Cli {
    /// Worker threads for sweeps and sampling; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide self-similarity and print the verdict as JSON.
    Check(CheckArgs),
    /// Print an admissible vector with m nonzero entries.
    Construct {
        #[arg(short)]
        m: usize,
        #[arg(short = 'N')]
        n: u32,
    },
    /// List admissible vectors with bounded depth.
    Enumerate(EnumerateArgs),
    /// Print the generating IFS of an admissible vector.
    Ifs {
        #[command(flatten)]
        vector: VectorArgs,
        /// Drop maps whose images are covered by the others.
        #[arg(long)]
        prune: bool,
    },
    /// Sample points and certify the extracted IFS numerically.
    Verify(VerifyArgs),
    /// Print the graph G_t in DOT format.
    Graph {
        #[command(flatten)]
        vector: VectorArgs,
    },
}

#[derive(Args)]
struct VectorArgs {
    /// Alphabet parameter N (digits 0..=N).
    #[arg(short = 'N', required_unless_present = "json")]
    n: Option<u32>,
    /// Nonzero entry t_j as comma-separated digits, lowest index first. Repeat in increasing order.
    #[arg(short = 't', value_name = "DIGITS")]
    t: Vec<String>,
    /// Read `{"N":..,"entries":[[],..]}` from a file, or `-` for stdin.
    #[arg(long, conflicts_with_all = ["n", "t"])]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    /// 0 < β < 1/(2N+1)
    Below,
    /// 1/(2N+1) ≤ β < 1/(N+1)
    Between,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    vector: VectorArgs,
    #[arg(long, value_enum, default_value = "below")]
    regime: RegimeArg,
    /// Also run the nilpotency and covering oracles and fail on disagreement.
    #[arg(long)]
    cross_check: bool,
    /// Write G_t in DOT format to this path.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    /// Append the extracted IFS on positive verdicts.
    #[arg(long)]
    ifs: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(short)]
    m: usize,
    #[arg(short = 'N')]
    n: u32,
    #[arg(long)]
    tau_max: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Only count self-similar vectors (all of T up to tau_max, not just admissible ones).
    #[arg(long)]
    count: bool,
    /// Maximum number of candidate vectors to examine.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    vector: VectorArgs,
    /// Rational β = p/q with β < 1/(2N+1); defaults to 1/(2N+2).
    #[arg(long)]
    beta: Option<String>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 12)]
    depth: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Use f64 arithmetic with a residual tolerance instead of exact arithmetic.
    #[arg(long)]
    float: bool,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Verify the pruned IFS instead of the full one.
    #[arg(long)]
    prune: bool,
}

/// Input that could not be read or decoded.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct InputError(String);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_PARSE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    use cantor_union::Error as E;
    if e.downcast_ref::<InputError>().is_some() {
        return EXIT_PARSE;
    }
    match e.downcast_ref::<E>() {
        Some(
            E::Parse(_)
            | E::DigitOutOfRange { .. }
            | E::InvalidAlphabet(_)
            | E::AlphabetMismatch { .. }
            | E::NonZeroFirstEntry
            | E::NotIncreasing { .. }
            | E::EmptyVector
            | E::BetaOutOfRange { .. },
        ) => EXIT_PARSE,
        Some(E::BudgetExceeded { .. } | E::UniverseTooLarge { .. }) => EXIT_BUDGET,
        _ => EXIT_OTHER,
    }
}

fn execution(jobs: Option<usize>) -> Result<Execution> {
    match jobs {
        Some(0) => Err(InputError("--jobs must be at least 1".into()).into()),
        Some(1) => Ok(Execution::Sequential),
        Some(n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("configuring the thread pool")?;
            #[cfg(not(feature = "parallel"))]
            let _ = n;
            Ok(Execution::Parallel)
        }
        None => Ok(Execution::Parallel),
    }
}

fn run(cli: Cli) -> Result<u8> {
    let exec = execution(cli.jobs)?;
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Check(args) => check(args, &mut out),
        Command::Construct { m, n } => {
            let cap = check_cap(n)?;
            let t = construct_admissible(m, cap)?;
            emit_json(&mut out, &t.to_json())?;
            Ok(0)
        }
        Command::Enumerate(args) => enumerate(args, exec, &mut out),
        Command::Ifs { vector, prune: pruned } => {
            let t = read_vector(&vector)?;
            let ifs = extract_ifs(&t)?;
            if pruned {
                let p = prune(&t, &ifs)?;
                emit_json(&mut out, &PrunedJson {
                    kept: p.kept.to_json(),
                    removed: p.removed.iter().map(|f| f.to_json()).collect(),
                })?;
            } else {
                emit_json(&mut out, &ifs.to_json())?;
            }
            Ok(0)
        }
        Command::Verify(args) => verify(args, exec, &mut out),
        Command::Graph { vector } => {
            let t = read_vector(&vector)?;
            out.write_all(build_graph(&t)?.to_dot().as_bytes())?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct PrunedJson {
    kept: Vec<MapJson>,
    removed: Vec<MapJson>,
}

fn emit_json<T: Serialize>(out: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn read_vector(args: &VectorArgs) -> Result<TranslationVector> {
    if let Some(path) = &args.json {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| InputError(format!("reading stdin: {e}")))?;
            s
        } else {
            fs::read_to_string(path).map_err(|e| InputError(format!("reading {}: {e}", path.display())))?
        };
        let json: VectorJson =
            serde_json::from_str(&text).map_err(|e| InputError(format!("invalid vector JSON: {e}")))?;
        return Ok(TranslationVector::from_json(&json)?);
    }
    let n = args.n.ok_or_else(|| InputError("-N is required".into()))?;
    let cap = check_cap(n)?;
    let rest = args
        .t
        .iter()
        .map(|s| DigitString::parse(s, cap))
        .collect::<cantor_union::Result<Vec<_>>>()?;
    Ok(TranslationVector::from_nonzero(cap, rest)?)
}

fn check(args: CheckArgs, out: &mut impl Write) -> Result<u8> {
    let t = read_vector(&args.vector)?;
    let regime = match args.regime {
        RegimeArg::Below => Regime::Below,
        RegimeArg::Between => Regime::Between,
    };
    let mode = if args.cross_check { CheckMode::CrossCheck } else { CheckMode::Fast };
    let verdict = decide_self_similar(&t, regime, mode)?;
    if let Some(path) = &args.dot {
        fs::write(path, build_graph(&t)?.to_dot()).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut json = serde_json::to_value(verdict.to_json())?;
    if args.ifs && verdict.admissible_side == Some(Side::Vector) {
        json["ifs"] = serde_json::to_value(extract_ifs(&t)?.to_json())?;
    }
    emit_json(out, &json)?;
    Ok(match verdict.decision {
        Decision::SelfSimilar => 0,
        Decision::NotSelfSimilar => 1,
        Decision::SufficientOnly => 2,
    })
}

#[derive(Serialize)]
struct CountJson {
    m: usize,
    #[serde(rename = "N")]
    n: u32,
    tau_max: usize,
    self_similar: u64,
}

fn enumerate(args: EnumerateArgs, exec: Execution, out: &mut impl Write) -> Result<u8> {
    let cap = check_cap(args.n)?;
    if args.count {
        let count = count_self_similar(args.m, cap, args.tau_max, args.budget, exec)?;
        emit_json(out, &CountJson {
            m: args.m,
            n: args.n,
            tau_max: args.tau_max,
            self_similar: count,
        })?;
        return Ok(0);
    }
    let found = enumerate_admissible(args.m, cap, args.tau_max, args.budget, exec)?;
    match args.format {
        Format::Json => emit_json(out, &found.iter().map(|t| t.to_json()).collect::<Vec<_>>())?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["version", "m", "N", "tau", "entries", "decision"])?;
            for t in &found {
                let entries: Vec<String> = t.entries().iter().map(|e| e.to_string()).collect();
                w.write_record([
                    "1".to_string(),
                    t.m().to_string(),
                    t.cap().to_string(),
                    t.tau().to_string(),
                    entries.join(";"),
                    "SelfSimilar".to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn verify(args: VerifyArgs, exec: Execution, out: &mut impl Write) -> Result<u8> {
    let t = read_vector(&args.vector)?;
    let beta = match &args.beta {
        Some(text) => Beta::parse(text, t.cap())?,
        None => Beta::standard(t.cap()),
    };
    let mut ifs = extract_ifs(&t)?;
    if args.prune {
        ifs = prune(&t, &ifs)?.kept;
    }
    let opts = NumericOptions {
        samples: args.samples,
        depth: args.depth,
        seed: args.seed,
        float: args.float,
        tolerance: args.tolerance,
        exec,
    };
    let report = verify_numeric(&t, &ifs, &beta, &opts)?;
    eprintln!("seed: {}", report.seed);
    emit_json(out, &report)?;
    Ok(if report.passed { 0 } else { 1 })
}
