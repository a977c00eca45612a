//! `dpbf`: deterministic dual-polarization beam synthesis from the command
//! line.
//!
//! Subcommands: `synthesize` (config-driven optimization), `companion`
//! (closed-form orthogonal twin of a weights file), `pattern` (normalized
//! cut/grid export), `verify` (invariant check of a weights pair).
//!
//! Exit codes: 0 success, 1 invariant failure, 2 input error.

mod commands;
mod config;
mod report;
mod weights_io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::WeightsCommandOptions;
use config::RunConfig;

/// Errors surfaced to the user: bad input (exit 2) or a violated numeric
/// invariant (exit 1).
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Invariant(String),
}

#[derive(Parser)]
#[command(
    name = "dpbf",
    version,
    about = "Dual-polarization wide-beam synthesis, companion beams, and pattern export"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl FormatArg {
    fn as_str(self) -> &'static str {
        match self {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        }
    }
}

#[derive(Args)]
struct SynthesizeArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override synthesis.seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Override grid.step_deg from the config.
    #[arg(long)]
    grid_step_deg: Option<f64>,
    /// Override output.dir from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override output.format from the config.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct SharedWeightsArgs {
    /// Evaluation grid step in degrees.
    #[arg(long, default_value_t = 1.0)]
    grid_step_deg: f64,
    /// Element azimuth half-power beamwidth, degrees.
    #[arg(long, default_value_t = 90.0)]
    element_az_hpbw_deg: f64,
    /// Element elevation half-power beamwidth, degrees.
    #[arg(long, default_value_t = 90.0)]
    element_el_hpbw_deg: f64,
    /// Directory for generated reports.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Pattern export format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

impl SharedWeightsArgs {
    fn options(&self) -> WeightsCommandOptions {
        WeightsCommandOptions {
            grid_step_deg: self.grid_step_deg,
            hpbw_az_deg: self.element_az_hpbw_deg,
            hpbw_el_deg: self.element_el_hpbw_deg,
            out_dir: self.out.clone(),
            format: self.format.as_str().to_string(),
        }
    }
}

#[derive(Args)]
struct CompanionArgs {
    /// Input weights file.
    input: PathBuf,
    /// Output path for the companion weights.
    output: PathBuf,
    #[command(flatten)]
    shared: SharedWeightsArgs,
}

#[derive(Args)]
struct PatternArgs {
    /// Weights file to evaluate.
    weights: PathBuf,
    #[command(flatten)]
    shared: SharedWeightsArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Weights file to check.
    weights: PathBuf,
    /// Companion weights file; computed in closed form when omitted.
    companion: Option<PathBuf>,
    #[command(flatten)]
    shared: SharedWeightsArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize weights from a config and write weights, pattern, metrics.
    Synthesize(SynthesizeArgs),
    /// Construct the orthogonally polarized companion of a weights file.
    Companion(CompanionArgs),
    /// Export the normalized pattern of a weights file.
    Pattern(PatternArgs),
    /// Check companion invariants for a weights file (or a pair of files).
    Verify(VerifyArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Synthesize(args) => {
            let mut cfg = RunConfig::load(&args.config)?;
            if let Some(seed) = args.seed {
                cfg.synthesis.seed = seed;
            }
            if let Some(step) = args.grid_step_deg {
                cfg.grid.step_deg = step;
            }
            if let Some(out) = args.out {
                cfg.output.dir = out.to_string_lossy().into_owned();
            }
            if let Some(format) = args.format {
                cfg.output.format = format.as_str().to_string();
            }
            cfg.validate()?;
            commands::cmd_synthesize(&cfg)
        }
        Command::Companion(args) => {
            commands::cmd_companion(&args.input, &args.output, &args.shared.options())
        }
        Command::Pattern(args) => commands::cmd_pattern(&args.weights, &args.shared.options()),
        Command::Verify(args) => {
            commands::cmd_verify(&args.weights, args.companion.as_deref(), &args.shared.options())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Invariant(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
