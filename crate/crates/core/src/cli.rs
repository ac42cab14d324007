//! Command-line front end: `estimate`, `simulate` and `entropy`.
//!
//! Every command prints an envelope holding the tool version, the command
//! name, the fully resolved parameters, the result and the seed (if any).
//! Feeding `params` back through the matching `run_*` function reproduces
//! `result` exactly.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 data error, 4 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::dkw::{estimate_samples, EstimationMode, SampleEstimate};
use crate::entropy::{build_ngram_table, empirical_distribution, LogBase};
use crate::error::{Error, Result};
use crate::input::{read_symbols, Encoding};
use crate::simulate::{mse_curve, GridSpec, MsePoint, SimConfig, DEFAULT_ENSEMBLE};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "entropy-samples", version, about = "Sample counts for entropy estimation of Zipfian sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum number of observations for a given alphabet and confidence.
    Estimate(EstimateArgs),
    /// Monte Carlo MSE of the plug-in entropy versus sample count.
    Simulate(SimulateArgs),
    /// N-gram entropy of a symbol file.
    Entropy(EntropyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeKind {
    Full,
    Coarse,
    #[value(name = "top-q")]
    TopQ,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Number of distinct symbols M (at least 2).
    #[arg(long)]
    pub alphabet_size: usize,
    /// Confidence level ζ, strictly between 0 and 1.
    #[arg(long)]
    pub confidence: f64,
    #[arg(long, value_enum, default_value_t = ModeKind::Full)]
    pub mode: ModeKind,
    /// Effective alphabet size for `--mode coarse`.
    #[arg(long)]
    pub mc: Option<usize>,
    /// Fraction of ranks kept for `--mode top-q`.
    #[arg(long)]
    pub q: Option<f64>,
}

impl ModelArgs {
    fn resolve_mode(&self) -> Result<EstimationMode> {
        match (self.mode, self.mc, self.q) {
            (ModeKind::Full, None, None) => Ok(EstimationMode::Full),
            (ModeKind::Coarse, Some(mc), None) => Ok(EstimationMode::Coarse { mc }),
            (ModeKind::TopQ, None, Some(q)) => Ok(EstimationMode::TopQuantile { q }),
            (ModeKind::Coarse, None, _) => Err(Error::Usage("--mode coarse requires --mc".into())),
            (ModeKind::TopQ, _, None) => Err(Error::Usage("--mode top-q requires --q".into())),
            (_, Some(_), _) => Err(Error::Usage("--mc is only valid with --mode coarse".into())),
            (_, _, Some(_)) => Err(Error::Usage("--q is only valid with --mode top-q".into())),
        }
    }

    fn params(&self) -> Result<EstimateParams> {
        Ok(EstimateParams {
            alphabet_size: self.alphabet_size,
            confidence: self.confidence,
            mode: self.resolve_mode()?,
        })
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// `min,max,points,log|lin`; defaults to 30 log-spaced points from 10 to 10 N0.
    #[arg(long)]
    pub grid: Option<String>,
    /// Independent sequences drawn per grid point.
    #[arg(long, default_value_t = DEFAULT_ENSEMBLE)]
    pub ensemble: usize,
    /// Master seed; identical seeds give identical output.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// N-gram order of the plug-in estimator.
    #[arg(long, default_value_t = 1)]
    pub ngram: usize,
    /// Logarithm base: 2, e or 10.
    #[arg(long, default_value = "2", value_parser = parse_base)]
    pub base: LogBase,
    /// Worker threads; the output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// CSV destination.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Symbol file to read.
    #[arg(long)]
    pub input: PathBuf,
    /// `tokens` (one decimal symbol per line) or `bytes` (each byte a symbol).
    #[arg(long, default_value = "tokens", value_parser = parse_encoding)]
    pub encoding: Encoding,
    /// N-gram order.
    #[arg(long, default_value_t = 1)]
    pub ngram: usize,
    /// Logarithm base: 2, e or 10.
    #[arg(long, default_value = "2", value_parser = parse_base)]
    pub base: LogBase,
    /// Inferred as the largest symbol plus one when absent (256 for bytes).
    #[arg(long)]
    pub alphabet_size: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn parse_base(s: &str) -> std::result::Result<LogBase, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_encoding(s: &str) -> std::result::Result<Encoding, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<P, R> {
    pub tool_version: String,
    pub command: String,
    pub params: P,
    pub result: R,
    pub seed: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateParams {
    pub alphabet_size: usize,
    pub confidence: f64,
    pub mode: EstimationMode,
}

pub fn run_estimate(params: &EstimateParams) -> Result<SampleEstimate> {
    estimate_samples(params.alphabet_size, params.confidence, params.mode)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateParams {
    #[serde(flatten)]
    pub config: SimConfig,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateResult {
    pub true_entropy: f64,
    #[serde(with = "crate::decimal")]
    pub n0_marker: crate::dkw::Count,
    pub points: Vec<MsePoint>,
}

/// Runs the simulation and writes the CSV to `params.out`.
pub fn run_simulate(params: &SimulateParams) -> Result<SimulateResult> {
    let curve = mse_curve(&params.config)?;
    std::fs::write(&params.out, curve.to_csv()).map_err(|source| Error::Io {
        path: params.out.clone(),
        source,
    })?;
    Ok(SimulateResult {
        true_entropy: curve.true_entropy,
        n0_marker: curve.n0_marker,
        points: curve.points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyParams {
    pub input: PathBuf,
    pub encoding: Encoding,
    pub ngram: usize,
    pub base: LogBase,
    pub alphabet_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    pub entropy: f64,
    pub total_symbols: usize,
    pub distinct_symbols: usize,
    pub distinct_ngrams: usize,
    pub alphabet_size: usize,
}

pub fn run_entropy(params: &EntropyParams) -> Result<EntropyResult> {
    let seq = read_symbols(&params.input, params.encoding, params.alphabet_size)?;
    let table = build_ngram_table(&seq, params.ngram)?;
    let distinct_symbols = empirical_distribution(&seq)?
        .counts
        .iter()
        .filter(|&&c| c > 0)
        .count();
    Ok(EntropyResult {
        entropy: table.entropy(params.base),
        total_symbols: seq.len(),
        distinct_symbols,
        distinct_ngrams: table.joint_counts().len(),
        alphabet_size: seq.alphabet_size(),
    })
}

fn envelope<P, R>(command: &str, params: P, result: R, seed: Option<u64>) -> Envelope<P, R> {
    Envelope {
        tool_version: TOOL_VERSION.to_string(),
        command: command.to_string(),
        params,
        result,
        seed: seed.map(|s| s.to_string()),
    }
}

fn render<P: Serialize, R: Serialize>(
    env: &Envelope<P, R>,
    format: Format,
    text_lines: Vec<(&str, String)>,
) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(env).expect("envelope serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("{} {}\n", env.command, env.tool_version);
            for (k, v) in text_lines {
                s.push_str(&format!("{k}: {v}\n"));
            }
            s
        }
    }
}

fn estimate_text(e: &SampleEstimate) -> Vec<(&'static str, String)> {
    vec![
        ("alphabet_size", e.alphabet_size.to_string()),
        ("confidence", format!("{:?}", e.confidence)),
        ("mode", e.mode.to_string()),
        ("alpha", format!("{:?}", e.params.alpha)),
        ("beta", format!("{:?}", e.params.beta)),
        ("gamma", format!("{:?}", e.params.gamma)),
        ("kappa", format!("{:?}", e.params.kappa)),
        ("gamma_prime", format!("{:?}", e.params.gamma_prime)),
        ("rank_lo", e.rank_lo.to_string()),
        ("delta0", format!("{:?}", e.delta0)),
        ("epsilon", format!("{:?}", e.epsilon)),
        ("n_bound", format!("{:?}", e.n_bound)),
        ("n0", e.n0.to_string()),
        ("p0", format!("{:?}", e.p0)),
        ("N0", e.n_total.to_string()),
    ]
}

fn dispatch(command: Command) -> Result<String> {
    match command {
        Command::Estimate(args) => {
            let params = args.model.params()?;
            let result = run_estimate(&params)?;
            let lines = estimate_text(&result);
            Ok(render(&envelope("estimate", params, result, None), args.format, lines))
        }
        Command::Simulate(args) => {
            let model = args.model.params()?;
            let grid = match &args.grid {
                Some(spec) => spec.parse::<GridSpec>()?,
                None => GridSpec::default_for(run_estimate(&model)?.n_total),
            };
            let params = SimulateParams {
                config: SimConfig {
                    alphabet_size: model.alphabet_size,
                    confidence: model.confidence,
                    mode: model.mode,
                    ngram_order: args.ngram,
                    base: args.base,
                    n_grid: grid.values(),
                    ensemble: args.ensemble,
                    seed: args.seed,
                },
                out: args.out,
            };
            let result = match args.threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Usage(format!("cannot start {n} threads: {e}")))?
                    .install(|| run_simulate(&params))?,
                None => run_simulate(&params)?,
            };
            let lines = vec![
                ("out", params.out.display().to_string()),
                ("points", result.points.len().to_string()),
                ("true_entropy", format!("{:?}", result.true_entropy)),
                ("n0_marker", result.n0_marker.to_string()),
            ];
            let seed = params.config.seed;
            Ok(render(&envelope("simulate", params, result, Some(seed)), args.format, lines))
        }
        Command::Entropy(args) => {
            let params = EntropyParams {
                input: args.input,
                encoding: args.encoding,
                ngram: args.ngram,
                base: args.base,
                alphabet_size: args.alphabet_size,
            };
            let result = run_entropy(&params)?;
            let lines = vec![
                ("entropy", format!("{:?}", result.entropy)),
                ("ngram", params.ngram.to_string()),
                ("base", params.base.to_string()),
                ("total_symbols", result.total_symbols.to_string()),
                ("distinct_symbols", result.distinct_symbols.to_string()),
                ("distinct_ngrams", result.distinct_ngrams.to_string()),
                ("alphabet_size", result.alphabet_size.to_string()),
            ];
            Ok(render(&envelope("entropy", params, result, None), args.format, lines))
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                2
            } else {
                let _ = write!(stdout, "{rendered}");
                0
            };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => match stdout.write_all(out.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                4
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
