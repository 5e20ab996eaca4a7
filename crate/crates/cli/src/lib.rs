//! Command-line surface: argument parsing, output formats, cache wiring,
//! and the bench harness. Exit codes: 0 success, 1 domain error, 2 usage
//! error.

pub mod emit;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use millscale_core::digits::{
    certify, constant_interval, default_requested_t, format_digit_file, metadata_for, roundtrip,
    ConstantDigits, RoundtripReport,
};
use millscale_core::primality::PrimalityConfig;
use millscale_core::search::prev_prime;
use millscale_core::sequence::{
    build_sequence, check_lemma1, extend_sequence, MillsConfig, Sequence, SequenceCache, Variant,
};
use millscale_core::{Error, Natural};

/// Env var that supplies a cache path when `--cache` is absent.
pub const CACHE_ENV: &str = "MILLSCALE_CACHE";

#[derive(Debug, Parser)]
#[command(
    name = "millscale",
    version,
    about = "Generalized Mills prime sequences and certified digits of their limit constants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the prime sequence and print each term.
    Sequence(SequenceArgs),
    /// Build (or load) the sequence and certify digits of the constant.
    Constant(ConstantArgs),
    /// Verify the round trip from certified digits back to every term.
    Verify(VerifyArgs),
    /// Sweep N in [n-min, n-max] for a prime in ((N-1)^c + 1, N^c).
    LemmaCheck(LemmaArgs),
    /// Time prev_prime near a synthetic number of 10^scale digits.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
    Bfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Ceiling,
    Floor,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Ceiling => Variant::Ceiling,
            VariantArg::Floor => Variant::Floor,
        }
    }
}

/// Flags shared by the sequence-driven subcommands.
#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Integer exponent; the construction needs c >= 3 (c = 2 via --allow-c2).
    #[arg(long, default_value_t = 3)]
    pub c: u32,

    #[arg(long, value_enum, default_value_t = VariantArg::Ceiling)]
    pub variant: VariantArg,

    /// Starting prime, decimal.
    #[arg(long, default_value = "2")]
    pub seed: String,

    #[arg(long, default_value_t = 7)]
    pub terms: usize,

    /// Extra random-base strong rounds after the BPSW pair.
    #[arg(long = "mr-rounds", default_value_t = 16)]
    pub mr_rounds: u32,

    /// Seed for the random-base generator (recorded for reproducibility).
    #[arg(long = "rng-seed", default_value_t = 0)]
    pub rng_seed: u64,

    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,

    /// Resumable sequence cache (JSON). MILLSCALE_CACHE supplies a default.
    #[arg(long)]
    pub cache: Option<PathBuf>,

    /// Write the primary output to this file instead of stdout. For
    /// `constant` this is the digit file; a JSON sidecar lands next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Accept the exploratory exponent c = 2.
    #[arg(long = "allow-c2")]
    pub allow_c2: bool,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Fractional digits to request; output truncates to what certifies.
    #[arg(long, default_value_t = 600)]
    pub digits: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Fractional digits to verify at; default is last-term digits + 20.
    #[arg(long)]
    pub digits: Option<u32>,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 3)]
    pub c: u32,

    #[arg(long = "n-min", default_value_t = 2)]
    pub n_min: u64,

    #[arg(long = "n-max", default_value_t = 1000)]
    pub n_max: u64,

    #[arg(long = "mr-rounds", default_value_t = 16)]
    pub mr_rounds: u32,

    #[arg(long = "rng-seed", default_value_t = 0)]
    pub rng_seed: u64,

    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// The synthetic target has 10^scale decimal digits.
    #[arg(long, default_value_t = 2)]
    pub scale: u32,

    #[arg(long = "mr-rounds", default_value_t = 16)]
    pub mr_rounds: u32,

    #[arg(long = "rng-seed", default_value_t = 0)]
    pub rng_seed: u64,

    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure modes `run` distinguishes for exit-code mapping.
#[derive(Debug)]
pub enum RunError {
    /// Flag combinations the parser cannot see; exit 2.
    Usage(String),
    /// Library-level failures; exit 1.
    Domain(Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(msg) => write!(f, "usage error: {msg}"),
            RunError::Domain(err) => write!(f, "error: {err}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Domain(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Domain(Error::Io(e))
    }
}

fn parse_seed(s: &str) -> Result<Natural, RunError> {
    s.parse::<Natural>()
        .map_err(|e| RunError::Usage(format!("bad --seed {s:?}: {e}")))
}

fn mills_config(common: &CommonArgs, terms: usize) -> Result<MillsConfig, RunError> {
    Ok(MillsConfig {
        c: common.c,
        variant: common.variant.into(),
        seed: parse_seed(&common.seed)?,
        terms,
        primality: PrimalityConfig {
            extra_mr_rounds: common.mr_rounds,
            rng_seed: common.rng_seed,
            ..PrimalityConfig::default()
        },
        allow_c2: common.allow_c2,
    })
}

fn cache_path(common: &CommonArgs) -> Option<PathBuf> {
    common
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

/// Build the sequence, going through the cache when one is configured. The
/// cache keeps its longest-known prefix; output views are truncated to the
/// requested term count.
fn obtain_sequence(common: &CommonArgs, terms: usize) -> Result<Sequence, RunError> {
    let cfg = mills_config(common, terms)?;
    cfg.validate().map_err(RunError::Domain)?;
    if common.allow_c2 && common.c == 2 {
        eprintln!("warning: c = 2 is outside the proven range; bound checks may abort");
    }
    let path = cache_path(common);
    let mut seq = match &path {
        Some(p) if p.exists() => SequenceCache::load(p)?.into_sequence(&cfg)?,
        _ => build_sequence(&MillsConfig {
            terms: 1,
            ..cfg.clone()
        })?,
    };
    let grew = seq.records.len() < terms;
    extend_sequence(&mut seq, terms, &cfg)?;
    if let Some(p) = path {
        if grew || !p.exists() {
            SequenceCache::from_sequence(&seq).save(&p)?;
        }
    }
    Ok(seq)
}

fn write_output(out: &Option<PathBuf>, body: &str, stdout: &mut dyn Write) -> Result<(), RunError> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(RunError::from),
        None => stdout.write_all(body.as_bytes()).map_err(RunError::from),
    }
}

/// Certify at the requested precision, bracketing with 20 guard digits.
fn certified_digits(seq: &Sequence, requested: u32) -> Result<ConstantDigits, Error> {
    let interval = constant_interval(seq, seq.c, seq.variant, requested + 20)?;
    certify(seq, &interval, requested)
}

/// Run `verify`, retrying once with doubled precision when the directed
/// powers straddle an integer.
fn run_verify(seq: &Sequence, requested: u32) -> Result<(RoundtripReport, u32, bool), Error> {
    let digits = certified_digits(seq, requested)?;
    match roundtrip(&digits, seq) {
        Ok(report) => Ok((report, requested, false)),
        Err(Error::PrecisionInsufficient { .. }) => {
            let doubled = requested * 2;
            let digits = certified_digits(seq, doubled)?;
            let report = roundtrip(&digits, seq)?;
            Ok((report, doubled, true))
        }
        Err(e) => Err(e),
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), RunError> {
    match &cli.command {
        Command::Sequence(args) => {
            let seq = obtain_sequence(&args.common, args.common.terms)?;
            let view = seq.truncated(args.common.terms);
            let body = match args.common.format {
                FormatArg::Text => emit::sequence_text(&view),
                FormatArg::Json => emit::sequence_json(&view)?,
                FormatArg::Bfile => emit::sequence_bfile(&view),
            };
            write_output(&args.common.out, &body, stdout)
        }
        Command::Constant(args) => {
            if args.common.format == FormatArg::Bfile {
                return Err(RunError::Usage(
                    "--format bfile applies to `sequence` only".into(),
                ));
            }
            let seq = obtain_sequence(&args.common, args.common.terms)?;
            let view = seq.truncated(args.common.terms);
            let digits = certified_digits(&view, args.digits)?;
            if let Some(path) = &args.common.out {
                std::fs::write(path, format_digit_file(&digits))?;
                let meta = metadata_for(&digits, &view);
                let mut sidecar = serde_json::to_string_pretty(&meta)
                    .map_err(|e| RunError::Domain(Error::Json(e)))?;
                sidecar.push('\n');
                let meta_path = path.with_extension("meta.json");
                std::fs::write(meta_path, sidecar)?;
            }
            let body = match args.common.format {
                FormatArg::Text => emit::constant_text(&digits, &view),
                FormatArg::Json => emit::constant_json(&digits, &view)?,
                FormatArg::Bfile => unreachable!("rejected above"),
            };
            stdout.write_all(body.as_bytes())?;
            Ok(())
        }
        Command::Verify(args) => {
            if args.common.format == FormatArg::Bfile {
                return Err(RunError::Usage(
                    "--format bfile applies to `sequence` only".into(),
                ));
            }
            let seq = obtain_sequence(&args.common, args.common.terms)?;
            let view = seq.truncated(args.common.terms);
            let requested = args.digits.unwrap_or_else(|| default_requested_t(&view));
            let (report, used_t, retried) = run_verify(&view, requested)?;
            let body = match args.common.format {
                FormatArg::Text => emit::verify_text(&report, used_t, retried),
                FormatArg::Json => emit::verify_json(&report, &view, used_t, retried)?,
                FormatArg::Bfile => unreachable!("rejected above"),
            };
            write_output(&args.common.out, &body, stdout)?;
            if !report.all_passed {
                return Err(RunError::Domain(Error::VariantMismatch {
                    expected: "round trip reproducing every term".into(),
                    found: "mismatched term".into(),
                }));
            }
            Ok(())
        }
        Command::LemmaCheck(args) => {
            if args.format == FormatArg::Bfile {
                return Err(RunError::Usage(
                    "--format bfile applies to `sequence` only".into(),
                ));
            }
            let cfg = PrimalityConfig {
                extra_mr_rounds: args.mr_rounds,
                rng_seed: args.rng_seed,
                ..PrimalityConfig::default()
            };
            let report = check_lemma1(args.c, args.n_min, args.n_max, &cfg)?;
            let body = match args.format {
                FormatArg::Text => emit::lemma_text(&report),
                FormatArg::Json => emit::lemma_json(&report)?,
                FormatArg::Bfile => unreachable!("rejected above"),
            };
            write_output(&args.out, &body, stdout)
        }
        Command::Bench(args) => {
            if args.format == FormatArg::Bfile {
                return Err(RunError::Usage(
                    "--format bfile applies to `sequence` only".into(),
                ));
            }
            if args.scale < 1 || args.scale > 4 {
                return Err(RunError::Usage(
                    "--scale must be 1..=4 (targets of 10 to 10000 digits)".into(),
                ));
            }
            let digits = 10u64.pow(args.scale) as u32;
            let x = synthetic_target(digits, args.rng_seed);
            let cfg = PrimalityConfig {
                extra_mr_rounds: args.mr_rounds,
                rng_seed: args.rng_seed,
                ..PrimalityConfig::default()
            };
            let (prime, stats) = prev_prime(&x, &cfg)?;
            let body = match args.format {
                FormatArg::Text => emit::bench_text(args.scale, digits, &x, &prime, &stats),
                FormatArg::Json => emit::bench_json(args.scale, digits, &x, &prime, &stats)?,
                FormatArg::Bfile => unreachable!("rejected above"),
            };
            write_output(&args.out, &body, stdout)
        }
    }
}

/// Deterministic odd number with exactly `digits` decimal digits.
fn synthetic_target(digits: u32, rng_seed: u64) -> Natural {
    // Digits of the target come from a splitmix-style walk on the seed;
    // no cryptographic needs here, just reproducibility.
    let mut state = rng_seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) as u32
    };
    let mut s = String::with_capacity(digits as usize);
    s.push(char::from(b'1' + (next() % 9) as u8));
    for _ in 1..digits {
        s.push(char::from(b'0' + (next() % 10) as u8));
    }
    let mut n: Natural = s.parse().expect("digit string");
    if (&n % 2u32) == Natural::from(0u32) {
        n += 1u32;
    }
    n
}
