//! `submel` — MFCC extraction for full-rate and integer-factor subsampled
//! speech, with correlation-based agreement reports between the two.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 input/output
//! error, 4 numerical failure (degenerate data).

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use submel_core::{Error, HopKind, PipelineConfig, Result, WindowKind};

use commands::{Bank, CaseSelect};

#[derive(Parser)]
#[command(
    name = "submel",
    version,
    about = "MFCCs of full-rate and subsampled speech, and how well they agree"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an MFCC matrix for one WAV file
    Extract(ExtractArgs),
    /// Correlate full-rate and subsampled MFCCs of one WAV file
    Compare(CompareArgs),
    /// Aggregate correlation statistics over a corpus
    Report(ReportArgs),
    /// Dump filter-bank weights and geometry
    Fbdump(FbdumpArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum WindowArg {
    /// Symmetric Hamming window
    Standard,
    /// Asymmetric variant that rises monotonically across the frame
    PaperLiteral,
}

impl From<WindowArg> for WindowKind {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::Standard => WindowKind::Standard,
            WindowArg::PaperLiteral => WindowKind::PaperLiteral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum HopArg {
    /// Advance by half the frame length
    Half,
    /// Advance by half the frame length minus one sample
    PaperLiteral,
}

impl From<HopArg> for HopKind {
    fn from(h: HopArg) -> Self {
        match h {
            HopArg::Half => HopKind::Half,
            HopArg::PaperLiteral => HopKind::PaperLiteral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BankArg {
    /// Full-rate mel bank
    Standard,
    /// Subsampled-grid bank with fill-in rows
    Modified,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    /// One correlation over all coefficients of a file
    #[value(name = "1")]
    One,
    /// Per-frame correlations, averaged
    #[value(name = "2")]
    Two,
    /// Run both protocols
    Both,
}

impl From<CaseArg> for CaseSelect {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::One => CaseSelect::One,
            CaseArg::Two => CaseSelect::Two,
            CaseArg::Both => CaseSelect::Both,
        }
    }
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Args)]
struct PipelineFlags {
    /// Key=value config file (defaults apply when omitted)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Integer subsampling factor
    #[arg(long, value_name = "N")]
    alpha: Option<usize>,

    /// Window shape
    #[arg(long, value_enum, value_name = "KIND")]
    window: Option<WindowArg>,

    /// Frame advance rule
    #[arg(long, value_enum, value_name = "KIND")]
    hop: Option<HopArg>,
}

impl PipelineFlags {
    fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = config::load_config(self.config.as_deref())?;
        if let Some(alpha) = self.alpha {
            cfg.alpha = alpha;
        }
        if let Some(window) = self.window {
            cfg.window = window.into();
        }
        if let Some(hop) = self.hop {
            cfg.hop = hop.into();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct ExtractArgs {
    /// Input WAV file (full-rate audio for the standard bank,
    /// already-decimated audio for the modified bank)
    input: PathBuf,

    /// Output matrix path; .csv or .json picks the format
    #[arg(long, value_name = "FILE")]
    out: PathBuf,

    /// Which filter bank to apply
    #[arg(long, value_enum, default_value = "standard")]
    bank: BankArg,

    #[command(flatten)]
    flags: PipelineFlags,
}

#[derive(Args)]
struct CompareArgs {
    /// Full-rate input WAV file; decimation happens internally
    input: PathBuf,

    /// Which comparison protocol(s) to run
    #[arg(long, value_enum, default_value = "both")]
    case: CaseArg,

    #[command(flatten)]
    flags: PipelineFlags,
}

#[derive(Args)]
struct ReportArgs {
    /// WAV files and/or directories to walk for .wav files
    #[arg(required = true)]
    inputs: Vec<PathBuf>,

    /// Which comparison protocol(s) to run
    #[arg(long, value_enum, default_value = "both")]
    case: CaseArg,

    /// Write the JSON report here (with a manifest sidecar) instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads (default: one per core)
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,

    #[command(flatten)]
    flags: PipelineFlags,
}

#[derive(Args)]
struct FbdumpArgs {
    /// Directory to write bank matrices and metadata into
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Optional WAV file; sets the sample rate and adds per-band
    /// log-energy traces for both streams
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,

    /// Sample rate in Hz when no input file is given
    #[arg(long, value_name = "HZ", default_value_t = 16_000)]
    rate: u32,

    #[command(flatten)]
    flags: PipelineFlags,
}

/// Map domain errors onto the exit-code classes. Exhaustive on purpose:
/// a new error variant must pick a class here before it compiles.
fn exit_class(err: &Error) -> i32 {
    use Error::*;
    match err {
        InvalidConfig { .. }
        | InvalidAlpha
        | AlphaIncompatible { .. }
        | ZeroHop
        | WindowTooShort(_)
        | ActiveCountOutOfRange { .. }
        | NegativeFrequency(_)
        | NegativeMel(_) => 2,
        FileNotFound(_)
        | Io { .. }
        | MalformedWav { .. }
        | NonPcmWav { .. }
        | UnsupportedBitDepth { .. }
        | EmptyDataChunk(_)
        | EmptyMatrix
        | SignalTooShort { .. }
        | NoInputFiles
        | AllFilesFailed(_) => 3,
        WindowMismatch { .. }
        | BankDimensionMismatch { .. }
        | LengthMismatch { .. }
        | TooFewPoints(_)
        | ZeroVariance
        | RowCountMismatch { .. }
        | AllFramesDegenerate(_) => 4,
    }
}

fn run(cli: Cli, argv: &[String]) -> Result<()> {
    match cli.command {
        Command::Extract(args) => {
            let mut cfg = args.flags.resolve()?;
            match args.bank {
                BankArg::Standard => {
                    if let Some(alpha) = args.flags.alpha {
                        if alpha != 1 {
                            return Err(Error::InvalidConfig {
                                field: "alpha",
                                message: format!(
                                    "--bank standard analyzes full-rate audio; \
                                     --alpha {alpha} only applies to --bank modified"
                                ),
                            });
                        }
                    }
                    cfg.alpha = 1;
                }
                BankArg::Modified => {}
            }
            commands::cmd_extract(
                &args.input,
                &args.out,
                match args.bank {
                    BankArg::Standard => Bank::Standard,
                    BankArg::Modified => Bank::Modified,
                },
                &cfg,
                argv,
            )
        }
        Command::Compare(args) => {
            let cfg = args.flags.resolve()?;
            commands::cmd_compare(&args.input, args.case.into(), &cfg)
        }
        Command::Report(args) => {
            let cfg = args.flags.resolve()?;
            commands::cmd_report(
                &args.inputs,
                args.case.into(),
                args.out.as_deref(),
                args.jobs.map(|j| j as usize),
                &cfg,
                argv,
            )
        }
        Command::Fbdump(args) => {
            let cfg = args.flags.resolve()?;
            commands::cmd_fbdump(&args.out, args.input.as_deref(), args.rate, &cfg, argv)
        }
    }
}

fn main() {
    env_logger::init();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    if let Err(err) = run(cli, &argv) {
        eprintln!("error: {err}");
        std::process::exit(exit_class(&err));
    }
}
