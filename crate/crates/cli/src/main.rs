use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use pesq_core::compare::{read_csv, write_csv};
use pesq_core::mapping::{uniform_grid, write_curve_csv};
use pesq_core::{
    batch_score, compare_batches, mapping_curve, read_manifest, read_wav, score_multichannel, BatchItem, MappingKind,
    Mode, PesqConfig, PesqError, Signal, StereoStrategy, INTERLEAVE_NOTICE,
};

#[derive(Parser)]
#[command(
    name = "pesq",
    version,
    about = "PESQ speech quality scoring (P.862, P.862.1, P.862.2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one reference/degraded pair
    Score(ScoreArgs),
    /// Score every pair listed in a manifest CSV
    Batch(BatchArgs),
    /// Compare two batch score files
    Compare(CompareArgs),
    /// Emit a raw-to-MOS-LQO mapping curve as CSV
    Curve(CurveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    NbRaw,
    NbLqo,
    Wb,
    WbC2,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Self {
        match m {
            CliMode::NbRaw => Mode::NbRaw,
            CliMode::NbLqo => Mode::NbLqo,
            CliMode::Wb => Mode::Wb,
            CliMode::WbC2 => Mode::WbC2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CliStereo {
    Dmx,
    Avg,
    PerChannel,
    Interleave,
}

impl From<CliStereo> for StereoStrategy {
    fn from(s: CliStereo) -> Self {
        match s {
            CliStereo::Dmx => StereoStrategy::MonoDmx,
            CliStereo::Avg => StereoStrategy::AvgScores,
            CliStereo::PerChannel => StereoStrategy::PerChannel,
            CliStereo::Interleave => StereoStrategy::Interleave,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveKind {
    Nb,
    Wb,
}

#[derive(clap::Args)]
struct ScoreArgs {
    /// Reference WAV file
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Degraded WAV file
    #[arg(long = "deg")]
    degraded: PathBuf,
    /// Sample rate the pair is scored at
    #[arg(long, value_parser = ["8000", "16000"])]
    rate: String,
    /// PESQ variant; there is deliberately no default
    #[arg(long, value_enum)]
    mode: CliMode,
    /// How multi-channel files are reduced
    #[arg(long, value_enum, default_value = "dmx")]
    stereo: CliStereo,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(clap::Args)]
struct BatchArgs {
    /// CSV with `ref,deg` columns; relative paths resolve against its directory
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, value_enum)]
    mode: CliMode,
    /// Sample rate; defaults to the rate of the first reference file
    #[arg(long, value_parser = ["8000", "16000"])]
    rate: Option<String>,
    #[arg(long, value_enum, default_value = "dmx")]
    stereo: CliStereo,
    /// Per-item scores CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct CompareArgs {
    /// Scores CSV written by `batch`
    #[arg(long)]
    a: PathBuf,
    /// Scores CSV written by `batch`
    #[arg(long)]
    b: PathBuf,
    /// Per-item scatter table
    #[arg(long)]
    scatter: Option<PathBuf>,
    /// Copy of the JSON report
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CurveArgs {
    #[arg(long, value_enum)]
    kind: CurveKind,
    /// Output CSV; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Lowest raw score on the grid
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    from: f64,
    /// Highest raw score on the grid
    #[arg(long, default_value_t = 4.5, allow_hyphen_values = true)]
    to: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 1001)]
    points: usize,
}

/// JSON form of a `score` result.
#[derive(Debug, Serialize, Deserialize)]
struct ScoreReport {
    mode: Mode,
    strategy: StereoStrategy,
    rate: u32,
    score: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    per_channel: Option<Vec<f64>>,
}

/// A failure and the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Self {
            code: 2,
            message: message.to_string(),
        }
    }

    fn run(message: impl ToString) -> Self {
        Self {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<PesqError> for Failure {
    fn from(e: PesqError) -> Self {
        match e {
            PesqError::InvalidConfig(_) | PesqError::InvalidRate(_) => Failure::usage(e),
            _ => Failure::run(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::run(e)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::run(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Signal, Failure> {
    read_wav(path).map_err(|e| Failure::run(format!("{}: {e}", path.display())))
}

fn run_score(args: ScoreArgs) -> Result<(), Failure> {
    let rate: u32 = args.rate.parse().map_err(Failure::usage)?;
    let cfg = Mode::from(args.mode).config(rate)?;
    let strategy = StereoStrategy::from(args.stereo);
    let reference = load(&args.reference)?;
    let degraded = load(&args.degraded)?;
    if strategy == StereoStrategy::Interleave {
        eprintln!("{INTERLEAVE_NOTICE}");
    }
    let result = score_multichannel(&reference, &degraded, &cfg, strategy)?;
    let mut out = io::stdout().lock();
    match args.format {
        Format::Json => {
            let report = ScoreReport {
                mode: result.mode,
                strategy,
                rate,
                score: result.score,
                per_channel: result.per_channel,
            };
            let json = serde_json::to_string_pretty(&report).map_err(Failure::run)?;
            writeln!(out, "{json}")?;
        }
        Format::Text => {
            writeln!(out, "{:.3} {}", result.score, result.mode)?;
            if let Some(values) = result.per_channel {
                for (i, v) in values.iter().enumerate() {
                    writeln!(out, "{v:.3} {} channel {}", result.mode, i + 1)?;
                }
            }
        }
    }
    Ok(())
}

fn run_batch(args: BatchArgs) -> Result<(), Failure> {
    let mode = Mode::from(args.mode);
    let manifest = read_manifest(&args.manifest).map_err(Failure::run)?;
    if manifest.is_empty() {
        return Err(Failure::run(format!(
            "{}: manifest lists no pairs",
            args.manifest.display()
        )));
    }
    let rate = match args.rate {
        Some(r) => r.parse().map_err(Failure::usage)?,
        None => load(&manifest[0].reference)?.rate(),
    };
    let cfg: PesqConfig = mode.config(rate)?;
    let strategy = StereoStrategy::from(args.stereo);
    if strategy == StereoStrategy::Interleave {
        eprintln!("{INTERLEAVE_NOTICE}");
    }
    let items = batch_score(&manifest, &cfg, strategy);
    write_csv(&items, create(&args.out)?)?;
    let failed: Vec<&BatchItem> = items.iter().filter(|i| i.error.is_some()).collect();
    for item in &failed {
        eprintln!("{}: {}", item.degraded, item.error.as_deref().unwrap_or_default());
    }
    let scored = items.len() - failed.len();
    println!(
        "{mode}: {scored} scored, {} failed, written to {}",
        failed.len(),
        args.out.display()
    );
    if scored == 0 {
        return Err(Failure::run("every item failed"));
    }
    Ok(())
}

fn read_scores(path: &Path) -> Result<Vec<BatchItem>, Failure> {
    let file = File::open(path).map_err(|e| Failure::run(format!("{}: {e}", path.display())))?;
    read_csv(file).map_err(|e| Failure::run(format!("{}: {e}", path.display())))
}

fn run_compare(args: CompareArgs) -> Result<(), Failure> {
    let a = read_scores(&args.a)?;
    let b = read_scores(&args.b)?;
    if a.len() != b.len() {
        return Err(Failure::run(format!(
            "score files list different numbers of items ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if let Some(i) = a
        .iter()
        .zip(&b)
        .position(|(x, y)| x.reference != y.reference || x.degraded != y.degraded)
    {
        return Err(Failure::run(format!(
            "score files disagree on the pair in row {}",
            i + 1
        )));
    }
    let (report, rows) = compare_batches(&a, &b)?;
    let json = serde_json::to_string_pretty(&report).map_err(Failure::run)?;
    if let Some(path) = &args.report {
        writeln!(create(path)?, "{json}")?;
    }
    if let Some(path) = &args.scatter {
        write_csv(&rows, create(path)?)?;
    }
    println!("{json}");
    Ok(())
}

fn run_curve(args: CurveArgs) -> Result<(), Failure> {
    let kind = match args.kind {
        CurveKind::Nb => MappingKind::Narrowband,
        CurveKind::Wb => MappingKind::Wideband,
    };
    if args.from.is_nan() || args.to.is_nan() || args.from > args.to {
        return Err(Failure::usage("--from must not exceed --to"));
    }
    let points = mapping_curve(kind, &uniform_grid(args.from, args.to, args.points))?;
    match &args.out {
        Some(path) => write_curve_csv(&points, create(path)?)?,
        None => write_curve_csv(&points, io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Score(a) => run_score(a),
        Command::Batch(a) => run_batch(a),
        Command::Compare(a) => run_compare(a),
        Command::Curve(a) => run_curve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pesq: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
