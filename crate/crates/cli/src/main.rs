//! Command-line front end: define a code instance from flags and files, run
//! the spectrum/min-distance/coset computations, and emit JSON or CSV reports
//! with exact decimal-string counts.

use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polar_spectrum::code::{
    bit_reversal_pattern, builtin_reliability_sequence, load_index_list,
    load_reliability_sequence,
};
use polar_spectrum::{
    brute_spectrum, enumerate_spectrum_with, BitVector, CodeSpec, CosetEvaluator, EnumOptions,
    Mode, OracleLimits, PreTransform, Semantics, UpperTriangular,
};

/// Overrides the bundled reliability sequence with a file of the same format.
const RELIABILITY_ENV: &str = "POLAR_SPECTRUM_RELIABILITY_FILE";

#[derive(Parser)]
#[command(
    name = "polar-spectrum",
    version,
    about = "Exact partial weight spectra of pure and pre-transformed polar codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every (w, A_w) with w ≤ w-end
    Spectrum(SpectrumArgs),
    /// Minimum distance and the number of codewords attaining it
    Mindist(MindistArgs),
    /// Weight enumerator or minimum weight of a single input-prefix coset
    Coset(CosetArgs),
    /// Cross-check the engine against brute-force enumeration
    OracleCheck(OracleCheckArgs),
}

#[derive(Args)]
struct CodeArgs {
    /// log2 of the parent code length N
    #[arg(long)]
    n: usize,
    /// Information-bit count; the frozen set comes from the reliability
    /// sequence (bundled, or the file named by POLAR_SPECTRUM_RELIABILITY_FILE)
    #[arg(long, conflicts_with = "frozen_file")]
    k: Option<usize>,
    /// Frozen indices as a JSON array or whitespace-separated list
    #[arg(long)]
    frozen_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
    mode: ModeArg,
    /// Removed coordinates as a JSON array or whitespace-separated list
    #[arg(long, conflicts_with = "bit_reversal")]
    pattern_file: Option<PathBuf>,
    /// Remove COUNT coordinates chosen by the bit-reversal rule
    #[arg(long, value_name = "COUNT")]
    bit_reversal: Option<usize>,
    /// PAC convolution taps as a binary string, g_0 first (e.g. 1011011)
    #[arg(long, value_name = "BITS", conflicts_with = "matrix_file")]
    pac: Option<String>,
    /// Upper-triangular pre-transform matrix: one binary row per line
    #[arg(long)]
    matrix_file: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Plain,
    Punctured,
    Shortened,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Weight threshold; defaults to the transmitted code length
    #[arg(long)]
    w_end: Option<u32>,
    /// Keep provably irrelevant prefixes instead of discarding them
    #[arg(long)]
    no_prune: bool,
    /// Abort if the prefix list outgrows this many entries
    #[arg(long)]
    list_cap: Option<usize>,
    /// Worker bound; evaluation is currently sequential, the flag is
    /// validated and reserved
    #[arg(long, default_value_t = NonZeroUsize::new(1).unwrap())]
    threads: NonZeroUsize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MindistArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CosetArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Fixed input bits u_0.. as a binary string, e.g. 0001
    #[arg(long)]
    prefix: String,
    #[arg(long, value_enum, default_value_t = SemanticsArg::Rwef)]
    semantics: SemanticsArg,
    /// Weight threshold; defaults to the transmitted code length
    #[arg(long)]
    w_end: Option<u32>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Rwef,
    Mwef,
}

#[derive(Args)]
struct OracleCheckArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Weight threshold; defaults to the transmitted code length
    #[arg(long)]
    w_end: Option<u32>,
    /// Free-bit cap for the brute-force side
    #[arg(long, default_value_t = 20)]
    max_free_bits: usize,
}

#[derive(Serialize)]
struct Report {
    params: Params,
    spectrum: Vec<(u32, String)>,
    stats: Stats,
}

#[derive(Serialize)]
struct Params {
    command: String,
    n: usize,
    parent_len: usize,
    code_len: usize,
    k: usize,
    mode: String,
    frozen: Vec<usize>,
    derived_frozen: Vec<usize>,
    pattern: Vec<usize>,
    pre_transform: String,
    w_end: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    prefix: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    semantics: Option<String>,
}

#[derive(Serialize)]
struct Stats {
    n_c: u64,
    #[serde(rename = "C")]
    c: Vec<u64>,
    ms: u128,
}

type CliError = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Spectrum(args) => spectrum_command(args),
        Command::Mindist(args) => mindist_command(args),
        Command::Coset(args) => coset_command(args),
        Command::OracleCheck(args) => oracle_check_command(args),
    }
}

fn parse_mode(mode: ModeArg) -> Mode {
    match mode {
        ModeArg::Plain => Mode::Plain,
        ModeArg::Punctured => Mode::Punctured,
        ModeArg::Shortened => Mode::Shortened,
    }
}

fn load_matrix(path: &Path) -> Result<UpperTriangular, CliError> {
    let text = std::fs::read_to_string(path)?;
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(BitVector::from_bit_str)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(UpperTriangular::new(rows)?)
}

fn build_spec(args: &CodeArgs) -> Result<CodeSpec, CliError> {
    let mode = parse_mode(args.mode);
    let pattern = match (&args.pattern_file, args.bit_reversal) {
        (Some(path), None) => load_index_list(path)?,
        (None, Some(count)) => bit_reversal_pattern(args.n, count, mode)?,
        (None, None) if mode == Mode::Plain => Vec::new(),
        (None, None) => return Err("punctured/shortened mode needs --pattern-file or --bit-reversal".into()),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    };
    if mode == Mode::Plain && (args.pattern_file.is_some() || args.bit_reversal.is_some()) {
        return Err("plain mode takes no pattern".into());
    }
    let pre = match (&args.pac, &args.matrix_file) {
        (Some(bits), None) => PreTransform::Pac(BitVector::from_bit_str(bits)?),
        (None, Some(path)) => PreTransform::Matrix(load_matrix(path)?),
        (None, None) => PreTransform::Identity,
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    };
    match (args.k, &args.frozen_file) {
        (Some(k), None) => {
            let seq = match std::env::var_os(RELIABILITY_ENV) {
                Some(path) => load_reliability_sequence(Path::new(&path))?,
                None => builtin_reliability_sequence().to_vec(),
            };
            Ok(CodeSpec::from_reliability(args.n, k, mode, &pattern, pre, &seq)?)
        }
        (None, Some(path)) => {
            let frozen = load_index_list(path)?;
            Ok(CodeSpec::new(args.n, &frozen, mode, &pattern, pre)?)
        }
        (None, None) => Err("one of --k or --frozen-file is required".into()),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    }
}

fn describe_pre_transform(spec: &CodeSpec) -> String {
    match spec.pre_transform() {
        PreTransform::Identity => "identity".into(),
        PreTransform::Pac(g) => format!("pac:{g:?}"),
        PreTransform::Matrix(t) => format!("matrix:{0}x{0}", t.size()),
    }
}

fn params(command: &str, spec: &CodeSpec, w_end: u32) -> Params {
    Params {
        command: command.into(),
        n: spec.n(),
        parent_len: spec.parent_len(),
        code_len: spec.code_len(),
        k: spec.dim(),
        mode: format!("{:?}", spec.mode()).to_lowercase(),
        frozen: spec.frozen().to_vec(),
        derived_frozen: spec.derived_frozen().to_vec(),
        pattern: spec.pattern().to_vec(),
        pre_transform: describe_pre_transform(spec),
        w_end,
        prefix: None,
        semantics: None,
    }
}

fn emit(report: &Report, output: &OutputArgs) -> Result<(), CliError> {
    let body = match output.format {
        FormatArg::Json => {
            let mut s = serde_json::to_string(report)?;
            s.push('\n');
            s
        }
        FormatArg::Csv => {
            let mut s = String::from("w,A_w\n");
            for (w, count) in &report.spectrum {
                s.push_str(&format!("{w},{count}\n"));
            }
            eprintln!("n_c={} ms={}", report.stats.n_c, report.stats.ms);
            s
        }
    };
    match &output.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn spectrum_command(args: SpectrumArgs) -> Result<ExitCode, CliError> {
    if args.threads.get() > 1 {
        eprintln!("note: evaluation is sequential for now; --threads is accepted but unused");
    }
    let spec = build_spec(&args.code)?;
    let w_end = args.w_end.unwrap_or(spec.code_len() as u32);
    let defaults = EnumOptions::default();
    let opts = EnumOptions {
        prune: !args.no_prune,
        list_cap: args.list_cap.unwrap_or(defaults.list_cap),
        memo_cap: defaults.memo_cap,
    };
    let result = enumerate_spectrum_with(&spec, w_end, opts)?;
    let report = Report {
        params: params("spectrum", &spec, w_end),
        spectrum: result.spectrum.to_string_pairs(),
        stats: Stats {
            n_c: result.stats.n_c,
            c: result.stats.stage_sizes.clone(),
            ms: result.stats.wall.as_millis(),
        },
    };
    emit(&report, &args.output)?;
    Ok(ExitCode::SUCCESS)
}

fn mindist_command(args: MindistArgs) -> Result<ExitCode, CliError> {
    let spec = build_spec(&args.code)?;
    // Doubling search, reported with the stats of the successful run.
    let full = spec.code_len() as u32;
    let mut w_end = 4.min(full);
    loop {
        let result = enumerate_spectrum_with(&spec, w_end, EnumOptions::default())?;
        let found = result
            .spectrum
            .terms()
            .iter()
            .find(|&&(w, _)| w > 0)
            .map(|(w, c)| (*w, c.to_string()));
        if let Some((w, count)) = found {
            let report = Report {
                params: params("mindist", &spec, w_end),
                spectrum: vec![(w, count)],
                stats: Stats {
                    n_c: result.stats.n_c,
                    c: result.stats.stage_sizes.clone(),
                    ms: result.stats.wall.as_millis(),
                },
            };
            emit(&report, &args.output)?;
            return Ok(ExitCode::SUCCESS);
        }
        if w_end >= full {
            return Err(polar_spectrum::Error::AllFrozen.into());
        }
        w_end = (w_end * 2).min(full);
    }
}

fn coset_command(args: CosetArgs) -> Result<ExitCode, CliError> {
    let spec = build_spec(&args.code)?;
    let w_end = args.w_end.unwrap_or(spec.code_len() as u32);
    let prefix = BitVector::from_bit_str(&args.prefix)?;
    let start = Instant::now();
    let (spectrum, semantics) = match args.semantics {
        SemanticsArg::Rwef => {
            let poly = CosetEvaluator::new(&spec, Some(w_end), Semantics::Rwef).rwef(&prefix)?;
            (poly.to_string_pairs(), "rwef")
        }
        SemanticsArg::Mwef => {
            let poly = CosetEvaluator::new(&spec, Some(w_end), Semantics::Rwef).rwef(&prefix)?;
            // Lowest term only; an empty list means every member outweighs
            // w-end (or the coset is empty).
            (poly.to_string_pairs().into_iter().take(1).collect(), "mwef")
        }
    };
    let ms = start.elapsed().as_millis();
    let mut report = Report {
        params: params("coset", &spec, w_end),
        spectrum,
        stats: Stats { n_c: 1, c: vec![1], ms },
    };
    report.params.prefix = Some(args.prefix.clone());
    report.params.semantics = Some(semantics.into());
    emit(&report, &args.output)?;
    Ok(ExitCode::SUCCESS)
}

fn oracle_check_command(args: OracleCheckArgs) -> Result<ExitCode, CliError> {
    let spec = build_spec(&args.code)?;
    let w_end = args.w_end.unwrap_or(spec.code_len() as u32);
    let fast = enumerate_spectrum_with(&spec, w_end, EnumOptions::default())?;
    let slow = brute_spectrum(&spec, w_end, OracleLimits { max_free_bits: args.max_free_bits })?;
    if fast.spectrum == slow.spectrum {
        println!("MATCH n_c={} terms={}", fast.stats.n_c, fast.spectrum.terms().len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("MISMATCH");
        println!("engine: {:?}", fast.spectrum.to_string_pairs());
        println!("oracle: {:?}", slow.spectrum.to_string_pairs());
        Ok(ExitCode::FAILURE)
    }
}
