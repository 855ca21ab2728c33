//! Command-line surface over the library: truth tables, fixed-weight
//! unranking, Bernoulli geometry, growth curves, scaling runs, and
//! compression-based complexity estimates.
//!
//! Every run is a pure function of its arguments: outputs carry no
//! timestamps, and stochastic commands take an explicit `--seed`, so
//! identical invocations produce byte-identical bytes. Each output
//! embeds a format version and an echo of the run configuration —
//! JSON payloads as leading fields, CSV payloads as `#` comment lines.
//!
//! Exit codes: 0 success, 2 usage error, 3 precondition violation,
//! 4 contract violation (a compressor failed its own round trip).

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use satdist::bits::{BitString, BitStringError};
use satdist::combinatorics::{self, CombinatoricsError, CurvePoint};
use satdist::complexity::{self, ComplexityError, DEFAULT_COMPRESSOR_NAME};
use satdist::experiments::{self, ExperimentsError, ScalingRow, DEFAULT_GUARD};
use satdist::formula::{self, FormulaError, ParseError};
use satdist::statdist::{self, StatDistError};

const FORMAT_VERSION: u32 = 1;

/// Highest n the scaling subcommand accepts; the per-rep trial ceiling
/// is 64·2^n, so this bounds a single run near 2^26 draws.
const SCALING_MAX_N: u32 = 20;

#[derive(Parser)]
#[command(
    name = "satdist",
    version,
    about = "Truth tables, fixed-weight codes, Bernoulli geometry, and \
             compression-based complexity estimates",
    propagate_version = true
)]
struct Cli {
    /// Also write the exact output bytes to this file
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format (default: each command's native format)
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print a formula's truth table and its number of satisfying rows
    #[command(group = ArgGroup::new("source").required(true))]
    TruthTable {
        /// Formula text, e.g. "(x1 & !x0) | x2"
        #[arg(group = "source")]
        formula: Option<String>,

        /// Read the formula text from a file instead
        #[arg(long, group = "source", value_name = "PATH")]
        file: Option<PathBuf>,

        /// Number of variables
        #[arg(long)]
        n: usize,
    },

    /// Print the index-th length-L weight-K bitstring in lexicographic
    /// order (1-based)
    Unrank {
        /// String length L
        length: usize,
        /// Number of ones K
        weight: usize,
        /// 1-based lexicographic index (decimal, arbitrary size)
        index: String,
    },

    /// Statistical distance between two Bernoulli sources, the trial
    /// count needed to resolve them, and optionally how many mutually
    /// resolvable sources fit between them at a given trial budget
    Distance {
        /// First success probability
        p1: f64,
        /// Second success probability
        p2: f64,
        /// Trial budget for the packing count
        #[arg(long = "max-m", value_name = "M")]
        max_m: Option<u64>,
    },

    /// Counting bound growth curve: y(n) = 2^n H(k/2^n) for fixed k
    Figure1 {
        /// Number of satisfying rows k
        k: u64,
        /// Smallest variable count
        n_min: u32,
        /// Largest variable count
        n_max: u32,
    },

    /// Median trials to tell a silent source from one firing with
    /// probability 2^-n, as n grows
    Scaling {
        /// Smallest n
        n_min: u32,
        /// Largest n
        n_max: u32,
        /// Games played per n
        #[arg(long, default_value_t = 1000)]
        reps: u64,
        /// Master seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimum trials before a decision may be declared
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: u64,
    },

    /// Compression-based complexity estimate of a bitstring
    #[command(group = ArgGroup::new("source").required(true))]
    Kestimate {
        /// Generate the input: zeros:<len>, uniform:<len>, or
        /// bernoulli:<gamma>:<len>
        #[arg(long, group = "source", value_name = "SPEC")]
        gen: Option<String>,

        /// Read the input as ASCII 0/1 text from a file
        #[arg(long, group = "source", value_name = "PATH")]
        input: Option<PathBuf>,

        /// Compressor backend (ac | rle)
        #[arg(long, default_value = DEFAULT_COMPRESSOR_NAME)]
        compressor: String,

        /// Seed for generated inputs
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum CliError {
    Usage(String),
    Precondition(String),
    Contract(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Contract(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg)
            | CliError::Precondition(msg)
            | CliError::Contract(msg) => f.write_str(msg),
        }
    }
}

macro_rules! precondition_from {
    ($($err:ty),+ $(,)?) => {
        $(impl From<$err> for CliError {
            fn from(e: $err) -> Self {
                CliError::Precondition(e.to_string())
            }
        })+
    };
}

precondition_from!(
    FormulaError,
    ParseError,
    BitStringError,
    CombinatoricsError,
    StatDistError,
    ExperimentsError,
    std::io::Error,
    serde_json::Error,
);

impl From<ComplexityError> for CliError {
    fn from(e: ComplexityError) -> Self {
        match e {
            // A failed round trip breaks the compressor's own contract,
            // not a caller precondition.
            ComplexityError::RoundTripFailed { .. } => CliError::Contract(e.to_string()),
            ComplexityError::UnknownCompressor { .. } => CliError::Usage(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let output = dispatch(&cli.command, cli.format)?;
    print!("{output}");
    if let Some(path) = &cli.out {
        fs::write(path, output.as_bytes())?;
    }
    Ok(())
}

fn dispatch(command: &Command, format: Option<OutputFormat>) -> Result<String, CliError> {
    match command {
        Command::TruthTable { formula, file, n } => {
            cmd_truth_table(formula.as_deref(), file.as_deref(), *n, format)
        }
        Command::Unrank {
            length,
            weight,
            index,
        } => cmd_unrank(*length, *weight, index, format),
        Command::Distance { p1, p2, max_m } => cmd_distance(*p1, *p2, *max_m, format),
        Command::Figure1 { k, n_min, n_max } => cmd_figure1(*k, *n_min, *n_max, format),
        Command::Scaling {
            n_min,
            n_max,
            reps,
            seed,
            guard,
        } => cmd_scaling(*n_min, *n_max, *reps, *seed, *guard, format),
        Command::Kestimate {
            gen,
            input,
            compressor,
            seed,
        } => cmd_kestimate(gen.as_deref(), input.as_deref(), compressor, *seed, format),
    }
}

/// Rejects --format csv for commands without a tabular shape.
fn no_csv(format: Option<OutputFormat>, subcommand: &str) -> Result<(), CliError> {
    if format == Some(OutputFormat::Csv) {
        return Err(CliError::Usage(format!(
            "{subcommand} has no csv form; use --format json or omit --format"
        )));
    }
    Ok(())
}

fn json_line<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string(value)? + "\n")
}

/// CSV prelude carrying the version stamp and config echo as comments.
fn csv_prelude(config: &serde_json::Value) -> String {
    format!("# format_version: {FORMAT_VERSION}\n# config: {config}\n")
}

fn cmd_truth_table(
    formula_text: Option<&str>,
    file: Option<&std::path::Path>,
    n: usize,
    format: Option<OutputFormat>,
) -> Result<String, CliError> {
    no_csv(format, "truth-table")?;
    let owned;
    let (text, source) = match (formula_text, file) {
        (Some(text), None) => (text, json!(text)),
        (None, Some(path)) => {
            owned = fs::read_to_string(path)?;
            (owned.trim_end(), json!({"file": path.display().to_string()}))
        }
        _ => unreachable!("clap enforces exactly one formula source"),
    };
    let parsed = formula::parse_formula(text, n)?;
    let table = formula::truth_table(&parsed)?;
    let table_string = table.bits().to_string();
    let k = table.ones_count();
    match format {
        None => Ok(format!("{table_string} k={k}\n")),
        Some(OutputFormat::Json) => {
            #[derive(Serialize)]
            struct Out {
                format_version: u32,
                config: serde_json::Value,
                table: String,
                k: u64,
            }
            json_line(&Out {
                format_version: FORMAT_VERSION,
                config: json!({
                    "subcommand": "truth-table",
                    "formula": source,
                    "n": n,
                }),
                table: table_string,
                k,
            })
        }
        Some(OutputFormat::Csv) => unreachable!("rejected above"),
    }
}

fn cmd_unrank(
    length: usize,
    weight: usize,
    index: &str,
    format: Option<OutputFormat>,
) -> Result<String, CliError> {
    no_csv(format, "unrank")?;
    let parsed_index: BigUint = index
        .parse()
        .map_err(|_| CliError::Usage(format!("index must be a decimal integer, got {index:?}")))?;
    let bits = combinatorics::unrank_k_ones(length, weight, &parsed_index)?;
    match format {
        None => Ok(format!("{bits}\n")),
        Some(OutputFormat::Json) => {
            #[derive(Serialize)]
            struct Out {
                format_version: u32,
                config: serde_json::Value,
                bitstring: String,
            }
            json_line(&Out {
                format_version: FORMAT_VERSION,
                config: json!({
                    "subcommand": "unrank",
                    "length": length,
                    "weight": weight,
                    "index": index,
                }),
                bitstring: bits.to_string(),
            })
        }
        Some(OutputFormat::Csv) => unreachable!("rejected above"),
    }
}

fn cmd_distance(
    p1: f64,
    p2: f64,
    max_m: Option<u64>,
    format: Option<OutputFormat>,
) -> Result<String, CliError> {
    no_csv(format, "distance")?;
    let distance_rad = statdist::bernoulli_distance(p1, p2)?;
    // Equal or overflow-far pairs have no finite answer; report absence
    // rather than failing, since the distance itself is still defined.
    let min_trials = match statdist::min_trials(p1, p2) {
        Ok(m) => Some(m),
        Err(StatDistError::NeverDistinguishable)
        | Err(StatDistError::TrialCountOverflow { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let packing_count = match max_m {
        Some(m) => Some(statdist::packing_count(p1, p2, m)?),
        None => None,
    };
    let normalized_count =
        packing_count.map(|count| count as f64 / (max_m.expect("set together") as f64).sqrt());

    match format {
        None => {
            let mut out = format!("distance_rad {distance_rad:.6}\n");
            if let Some(m) = min_trials {
                out.push_str(&format!("min_trials {m}\n"));
            }
            if let Some(count) = packing_count {
                out.push_str(&format!("packing_count {count}\n"));
            }
            if let Some(norm) = normalized_count {
                out.push_str(&format!("normalized_count {norm:.6}\n"));
            }
            Ok(out)
        }
        Some(OutputFormat::Json) => {
            #[derive(Serialize)]
            struct Out {
                format_version: u32,
                config: serde_json::Value,
                p1: f64,
                p2: f64,
                m: Option<u64>,
                distance_rad: f64,
                min_trials: Option<u64>,
                packing_count: Option<u64>,
                normalized_count: Option<f64>,
            }
            json_line(&Out {
                format_version: FORMAT_VERSION,
                config: json!({
                    "subcommand": "distance",
                    "p1": p1,
                    "p2": p2,
                    "max_m": max_m,
                }),
                p1,
                p2,
                m: max_m,
                distance_rad,
                min_trials,
                packing_count,
                normalized_count,
            })
        }
        Some(OutputFormat::Csv) => unreachable!("rejected above"),
    }
}

fn cmd_figure1(
    k: u64,
    n_min: u32,
    n_max: u32,
    format: Option<OutputFormat>,
) -> Result<String, CliError> {
    let points = combinatorics::figure1_curve(k, n_min, n_max)?;
    let config = json!({
        "subcommand": "figure1",
        "k": k,
        "n_min": n_min,
        "n_max": n_max,
    });
    match format {
        None | Some(OutputFormat::Csv) => {
            Ok(csv_prelude(&config) + &combinatorics::figure1_csv(&points))
        }
        Some(OutputFormat::Json) => {
            #[derive(Serialize)]
            struct Out {
                format_version: u32,
                config: serde_json::Value,
                points: Vec<CurvePoint>,
            }
            json_line(&Out {
                format_version: FORMAT_VERSION,
                config,
                points,
            })
        }
    }
}

fn cmd_scaling(
    n_min: u32,
    n_max: u32,
    reps: u64,
    seed: u64,
    guard: u64,
    format: Option<OutputFormat>,
) -> Result<String, CliError> {
    if n_min < 1 || n_min > n_max || n_max > SCALING_MAX_N {
        return Err(CliError::Precondition(format!(
            "scaling range must satisfy 1 <= n_min <= n_max <= {SCALING_MAX_N}, \
             got n_min={n_min}, n_max={n_max}"
        )));
    }
    let n_list: Vec<u32> = (n_min..=n_max).collect();
    let rows = experiments::scaling_study_with_guard(&n_list, reps, seed, guard)?;
    let config = json!({
        "subcommand": "scaling",
        "n_min": n_min,
        "n_max": n_max,
        "reps": reps,
        "seed": seed,
        "guard": guard,
    });
    match format {
        None | Some(OutputFormat::Csv) => {
            Ok(csv_prelude(&config) + &experiments::scaling_csv(&rows))
        }
        Some(OutputFormat::Json) => {
            #[derive(Serialize)]
            struct Out {
                format_version: u32,
                config: serde_json::Value,
                rows: Vec<ScalingRow>,
            }
            json_line(&Out {
                format_version: FORMAT_VERSION,
                config,
                rows,
            })
        }
    }
}

fn cmd_kestimate(
    gen: Option<&str>,
    input: Option<&std::path::Path>,
    compressor_name: &str,
    seed: u64,
    format: Option<OutputFormat>,
) -> Result<String, CliError> {
    no_csv(format, "kestimate")?;
    let (bits, source) = match (gen, input) {
        (Some(spec), None) => (generate_bits(spec, seed)?, json!(spec)),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
            (
                BitString::from_ascii(&cleaned)?,
                json!({"file": path.display().to_string()}),
            )
        }
        _ => unreachable!("clap enforces exactly one input source"),
    };
    let compressor = complexity::compressor_by_name(compressor_name)?;
    let estimate = complexity::k_estimate(&bits, compressor.as_ref())?;
    let log2_p_hat = complexity::universal_probability(&estimate);

    #[derive(Serialize)]
    struct Out {
        format_version: u32,
        config: serde_json::Value,
        input_bits: u64,
        k_hat_bits: u64,
        compressor: String,
        log2_p_hat: f64,
    }
    json_line(&Out {
        format_version: FORMAT_VERSION,
        config: json!({
            "subcommand": "kestimate",
            "source": source,
            "compressor": compressor_name,
            "seed": seed,
        }),
        input_bits: estimate.input_bits,
        k_hat_bits: estimate.k_hat_bits,
        compressor: estimate.compressor,
        log2_p_hat,
    })
}

/// Builds a bitstring from a generator spec: zeros:<len>,
/// uniform:<len>, or bernoulli:<gamma>:<len>.
fn generate_bits(spec: &str, seed: u64) -> Result<BitString, CliError> {
    let parse_len = |s: &str| -> Result<usize, CliError> {
        s.parse()
            .map_err(|_| CliError::Usage(format!("generator length must be an integer, got {s:?}")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["zeros", len] => Ok(BitString::zeros(parse_len(len)?)),
        ["uniform", len] => {
            let len = parse_len(len)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(BitString::from_fn(len, |_| rng.random()))
        }
        ["bernoulli", gamma, len] => {
            let gamma: f64 = gamma.parse().map_err(|_| {
                CliError::Usage(format!("bernoulli rate must be a number, got {gamma:?}"))
            })?;
            if !(0.0..=1.0).contains(&gamma) {
                return Err(CliError::Precondition(format!(
                    "bernoulli rate must lie in [0, 1], got {gamma}"
                )));
            }
            let len = parse_len(len)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(BitString::from_fn(len, |_| rng.random_bool(gamma)))
        }
        _ => Err(CliError::Usage(format!(
            "unknown generator {spec:?}; expected zeros:<len>, uniform:<len>, \
             or bernoulli:<gamma>:<len>"
        ))),
    }
}
