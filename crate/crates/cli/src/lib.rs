//! Command-line front end: `upscale`, `eval` and `baseline`.

pub mod commands;
pub mod error;
pub mod io;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{BaselineMethod, Channel, RunConfig};
pub use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ahfsr", version, about = "Patch-based image upscaling with arctangent step-function dictionaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Super-resolve an 8-bit grayscale or RGB image.
    Upscale(UpscaleArgs),
    /// RMSE between a reference and a test image (0-255 scale).
    Eval(EvalArgs),
    /// Nearest-neighbour or bicubic upscaling.
    Baseline(BaselineArgs),
}

#[derive(Debug, clap::Args)]
pub struct UpscaleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub scale: usize,
    /// Suppress edge-layer ringing on flat regions.
    #[arg(long)]
    pub mask: bool,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub xi1: Option<f64>,
    #[arg(long)]
    pub xi2: Option<f64>,
    #[arg(long)]
    pub tau: Option<usize>,
    #[arg(long)]
    pub patch: Option<usize>,
    #[arg(long)]
    pub overlap: Option<usize>,
    #[arg(long)]
    pub angles: Option<usize>,
    /// Gradient threshold for --mask.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Worker threads for per-patch solves (default: available parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write one JSON object per patch with its residual trace.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

impl From<&UpscaleArgs> for RunConfig {
    fn from(a: &UpscaleArgs) -> Self {
        RunConfig {
            input_path: a.input.clone(),
            output_path: a.output.clone(),
            scale: a.scale,
            mask_enabled: a.mask,
            lambda1: a.lambda1,
            lambda2: a.lambda2,
            rho: a.rho,
            xi1: a.xi1,
            xi2: a.xi2,
            tau: a.tau,
            patch_size: a.patch,
            overlap: a.overlap,
            angles: a.angles,
            threshold: a.threshold,
            threads: a.threads,
            trace_path: a.trace.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChannelArg {
    Y,
    Gray,
    R,
    G,
    B,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Y => Channel::Y,
            ChannelArg::Gray => Channel::Gray,
            ChannelArg::R => Channel::R,
            ChannelArg::G => Channel::G,
            ChannelArg::B => Channel::B,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Defaults to y for color images and gray otherwise.
    #[arg(long, value_enum)]
    pub channel: Option<ChannelArg>,
    /// Use full-range (JFIF) luma instead of BT.601 studio swing.
    #[arg(long)]
    pub full_swing: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Nearest,
    Bicubic,
}

#[derive(Debug, clap::Args)]
pub struct BaselineArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub scale: usize,
    #[arg(long, value_enum)]
    pub method: MethodArg,
}

/// Executes a parsed command line, returning the text to print on success.
pub fn run(cli: &Cli) -> Result<Option<String>, CliError> {
    match &cli.command {
        Command::Upscale(args) => {
            commands::cmd_upscale(&RunConfig::from(args))?;
            Ok(None)
        }
        Command::Eval(args) => {
            let report = commands::cmd_eval(&args.reference, &args.test, args.channel.map(Into::into), args.full_swing)?;
            Ok(Some(report.to_string()))
        }
        Command::Baseline(args) => {
            let method = match args.method {
                MethodArg::Nearest => BaselineMethod::Nearest,
                MethodArg::Bicubic => BaselineMethod::Bicubic,
            };
            commands::cmd_baseline(&args.input, &args.output, args.scale, method)?;
            Ok(None)
        }
    }
}
