//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or fatal error, 2 partial failure.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::extraction::{ExtractionConfig, Threshold};
use crate::metrics::MetricConfig;
use crate::rendering::AxisOverlayConfig;

pub use config::{apply_config_text, ConfigSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FATAL: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bezier-glyph", version, about = "Glyph vectorization and Bézier program scoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert PNG/PGM glyph images into .bezierseq programs.
    Extract(ExtractArgs),
    /// Score a generated program against ground truth.
    Score(ScoreArgs),
    /// Score every same-named program pair in two directories.
    BatchScore(BatchScoreArgs),
    /// Rasterize a program to PNG/PGM and/or SVG.
    Render(RenderArgs),
    /// Draw a glyph under labeled coordinate axes.
    Overlay(OverlayArgs),
    /// Win rate from wins/ties/losses counts.
    Winrate(WinrateArgs),
}

#[derive(Debug, Args, Default)]
struct ExtractionFlags {
    /// `otsu` or a luminance in 1..=255.
    #[arg(long)]
    binarize_threshold: Option<Threshold>,
    #[arg(long)]
    rdp_epsilon: Option<f64>,
    #[arg(long)]
    merge_gap: Option<f64>,
    /// Degrees.
    #[arg(long)]
    merge_angle: Option<f64>,
    #[arg(long)]
    min_path_pixels: Option<usize>,
    #[arg(long)]
    fit_tolerance: Option<f64>,
}

#[derive(Debug, Args, Default)]
struct MetricFlags {
    #[arg(long)]
    sample_count: Option<usize>,
    #[arg(long)]
    w_distance: Option<f64>,
    #[arg(long)]
    w_length: Option<f64>,
    #[arg(long)]
    w_angle: Option<f64>,
    #[arg(long)]
    sigmoid_center: Option<f64>,
    #[arg(long)]
    sigmoid_steepness: Option<f64>,
    /// Report unshaped scores.
    #[arg(long)]
    no_sigmoid: bool,
}

#[derive(Debug, Args, Default)]
struct OverlayFlags {
    #[arg(long)]
    margin_frac: Option<f64>,
    #[arg(long)]
    tick_step: Option<f64>,
    #[arg(long)]
    label_decimals: Option<usize>,
    #[arg(long)]
    glyph_stroke_px: Option<f64>,
    /// Output side length in pixels.
    #[arg(long)]
    size: Option<u32>,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Output directory (default: beside each input).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG per input.
    #[arg(long)]
    svg: bool,
    /// Manifest path (default: manifest.json in the output directory).
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Decimal places of emitted coordinates.
    #[arg(long, default_value_t = crate::serialization::DEFAULT_PRECISION)]
    precision: usize,
    #[command(flatten)]
    extraction: ExtractionFlags,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    gt: PathBuf,
    gen: PathBuf,
    /// Reject any defect in the generated program.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    metric: MetricFlags,
}

#[derive(Debug, Args)]
struct BatchScoreArgs {
    gt_dir: PathBuf,
    gen_dir: PathBuf,
    /// Score pairs whose generated file is missing as 0 instead of skipping them.
    #[arg(long)]
    missing_as_zero: bool,
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    metric: MetricFlags,
}

#[derive(Debug, Args)]
struct RenderArgs {
    input: PathBuf,
    /// PNG output (default: <input stem>.png when no output is given).
    #[arg(long)]
    png: Option<PathBuf>,
    /// Binary PGM output.
    #[arg(long)]
    pgm: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    size: u32,
    #[arg(long, default_value_t = 3.0)]
    stroke_width: f64,
}

#[derive(Debug, Args)]
struct OverlayArgs {
    /// A .bezierseq program or a PNG/PGM image.
    input: PathBuf,
    /// Output PNG (default: <input stem>.overlay.png).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overlay: OverlayFlags,
}

#[derive(Debug, Args)]
struct WinrateArgs {
    /// Counts as `wins ties losses` triplets.
    counts: Vec<u64>,
    /// CSV rows of `wins,ties,losses`, optionally preceded by a label column.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Configuration snapshot recorded in manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub extraction: ExtractionConfig,
    pub metric: MetricConfig,
    pub overlay: AxisOverlayConfig,
}

/// Per-input outcome of a batch command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileStatus {
    pub input: String,
    /// `ok`, `failed`, `missing` or `skipped`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strokes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Record of one batch run. Contains no timestamps, so identical runs
/// produce identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: ConfigSnapshot,
    pub inputs: Vec<String>,
    pub files: Vec<FileStatus>,
}

impl RunManifest {
    fn new(command: &str, config: ConfigSnapshot, files: Vec<FileStatus>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            command: command.to_owned(),
            config,
            inputs: files.iter().map(|f| f.input.clone()).collect(),
            files,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_FATAL
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Extract(a) => commands::extract(a, stdout, stderr),
        Command::Score(a) => commands::score(a, stdout, stderr),
        Command::BatchScore(a) => commands::batch_score(a, stdout, stderr),
        Command::Render(a) => commands::render(a, stdout, stderr),
        Command::Overlay(a) => commands::overlay(a, stdout, stderr),
        Command::Winrate(a) => commands::winrate(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(stderr, "error: {message}");
            EXIT_FATAL
        }
    }
}
