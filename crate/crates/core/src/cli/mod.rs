//! The `gaitsym` command line.
//!
//! Subcommands: `analyze` (everything, written to `--out-dir`), `cycle`,
//! `shiftcorr`, `dissim`, and `synth` for generating test records.
//!
//! Exit status: 0 success, 2 unreadable or malformed input, 3 degenerate
//! signal or no periodicity, 4 invalid parameters.

pub mod pipeline;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::ingest::{write_keypoint_csv, write_openpose_dir, DEFAULT_CONFIDENCE_THRESHOLD, DEFAULT_SMOOTH_WINDOW};
use crate::signal::{CycleSearch, SpeedMode};
use crate::symmetry::{CaseOutcome, DissimilarityOptions, DEFAULT_DIS_THRESHOLD};
use crate::synth::{generate_gait, GaitParams};
use pipeline::{AnalysisConfig, InputFormat, Stage, StageError};

/// Exit status for malformed command lines.
const USAGE_EXIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "gaitsym", version, about = "Left-right gait symmetry from 2D pose keypoints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full pipeline: summary.csv plus speed, convolution and shift charts.
    Analyze(AnalysisArgs),
    /// Gait cycle per ankle and combined.
    Cycle(AnalysisArgs),
    /// Quarter-cycle shift correlation of the ankle speeds.
    Shiftcorr(AnalysisArgs),
    /// Ankle-to-wrist coupling dissimilarity for the four cases.
    Dissim(AnalysisArgs),
    /// Write a synthetic walking record.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct AnalysisArgs {
    /// OpenPose JSON directory or keypoint CSV file.
    #[arg(long)]
    input: PathBuf,
    /// Defaults to openpose-dir for directories, csv otherwise.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    #[arg(long, default_value_t = DEFAULT_CONFIDENCE_THRESHOLD)]
    confidence_threshold: f64,
    #[arg(long, default_value_t = DEFAULT_SMOOTH_WINDOW)]
    smooth_window: usize,
    /// Ankle speed for the shift correlation.
    #[arg(long, default_value = "abs-sum")]
    speed_mode: SpeedMode,
    /// Ankle speed used to find the gait cycle.
    #[arg(long, default_value = "horizontal")]
    cycle_mode: SpeedMode,
    #[arg(long, default_value_t = CycleSearch::default().min_lag)]
    min_lag: usize,
    /// Defaults to half the record.
    #[arg(long)]
    max_lag: Option<usize>,
    #[arg(long, default_value_t = CycleSearch::default().min_peak, allow_negative_numbers = true)]
    min_peak: f64,
    #[arg(long, default_value_t = DEFAULT_DIS_THRESHOLD)]
    dis_threshold: f64,
    /// Remove each speed series' mean before convolving.
    #[arg(long)]
    demean: bool,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// analyze: also write summary.json. Other commands: print JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Subject label in the summary; defaults to the input name.
    #[arg(long)]
    subject: Option<String>,
}

impl AnalysisArgs {
    fn config(&self) -> AnalysisConfig {
        AnalysisConfig {
            input: self.input.clone(),
            format: self.format,
            confidence_threshold: self.confidence_threshold,
            smooth_window: self.smooth_window,
            speed_mode: self.speed_mode,
            cycle_mode: self.cycle_mode,
            search: CycleSearch {
                min_lag: self.min_lag,
                max_lag: self.max_lag,
                min_peak: self.min_peak,
            },
            dissimilarity: DissimilarityOptions {
                threshold: self.dis_threshold,
                demean: self.demean,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SynthFormat {
    Csv,
    OpenposeDir,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Output CSV file, or directory for openpose-dir.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: SynthFormat,
    #[arg(long, default_value_t = GaitParams::default().cycle_frames)]
    cycle_frames: usize,
    #[arg(long, default_value_t = GaitParams::default().n_strides)]
    n_strides: usize,
    #[arg(long, default_value_t = GaitParams::default().fps)]
    fps: u32,
    #[arg(long, default_value_t = GaitParams::default().ankle_amp)]
    ankle_amp: f64,
    #[arg(long, default_value_t = GaitParams::default().wrist_amp)]
    wrist_amp: f64,
    #[arg(long, default_value_t = GaitParams::default().forward_speed, allow_negative_numbers = true)]
    forward_speed: f64,
    #[arg(long, default_value_t = GaitParams::default().left_amp_ratio)]
    left_amp_ratio: f64,
    #[arg(long, default_value_t = GaitParams::default().left_phase_jitter, allow_negative_numbers = true)]
    left_phase_jitter: f64,
    #[arg(long, default_value_t = GaitParams::default().waveform_distortion)]
    waveform_distortion: f64,
    #[arg(long, default_value_t = GaitParams::default().noise_std)]
    noise_std: f64,
    #[arg(long, default_value_t = GaitParams::default().dropout_rate)]
    dropout_rate: f64,
    #[arg(long, default_value_t = GaitParams::default().seed)]
    seed: u64,
}

impl SynthArgs {
    fn params(&self) -> GaitParams {
        GaitParams {
            cycle_frames: self.cycle_frames,
            n_strides: self.n_strides,
            fps: self.fps,
            ankle_amp: self.ankle_amp,
            wrist_amp: self.wrist_amp,
            forward_speed: self.forward_speed,
            left_amp_ratio: self.left_amp_ratio,
            left_phase_jitter: self.left_phase_jitter,
            waveform_distortion: self.waveform_distortion,
            noise_std: self.noise_std,
            dropout_rate: self.dropout_rate,
            seed: self.seed,
        }
    }
}

/// Runs the command line and returns the process exit status. Normal output
/// goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    USAGE_EXIT
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "gaitsym: {e}");
            e.exit_code()
        }
    }
}

type CmdResult = Result<i32, StageError>;

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match command {
        Command::Analyze(a) => cmd_analyze(&a, out, err),
        Command::Cycle(a) => cmd_cycle(&a, out),
        Command::Shiftcorr(a) => cmd_shiftcorr(&a, out),
        Command::Dissim(a) => cmd_dissim(&a, out, err),
        Command::Synth(a) => cmd_synth(&a, out),
    }
}

fn output_err(e: Error) -> StageError {
    StageError::new(Stage::Output, e)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), StageError> {
    out.write_all(text.as_bytes())
        .map_err(|e| output_err(Error::io("<stdout>", e)))
}

/// Reports per-case failures on the error stream; their presence turns a
/// completed run into exit status 3.
fn report_failed_cases(report: &crate::symmetry::DissimilarityReport, err: &mut dyn Write) -> i32 {
    let mut code = 0;
    for c in &report.cases {
        if let CaseOutcome::Failed(e) = &c.outcome {
            let _ = writeln!(err, "gaitsym: dissimilarity stage, case {}: {e}", c.case);
            code = e.exit_code();
        }
    }
    code
}

fn cmd_analyze(args: &AnalysisArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let config = args.config();
    let subject = args
        .subject
        .clone()
        .unwrap_or_else(|| pipeline::default_subject(&args.input));
    let analysis = pipeline::analyze(&config, subject)?;

    let dir = &args.out_dir;
    report::ensure_dir(dir).map_err(output_err)?;
    let csv = report::summary_csv(&analysis).map_err(output_err)?;
    report::write_atomic(&dir.join("summary.csv"), csv.as_bytes()).map_err(output_err)?;
    if args.json {
        let json = report::summary_json(&analysis, &config.search);
        report::write_atomic(&dir.join("summary.json"), json.as_bytes()).map_err(output_err)?;
    }
    report::write_dissimilarity_charts(dir, &analysis.dissimilarity, true).map_err(output_err)?;
    report::write_atomic(
        &dir.join("shift_correlation.svg"),
        report::shift_svg(&analysis.shift).as_bytes(),
    )
    .map_err(output_err)?;

    emit(out, &csv)?;
    Ok(report_failed_cases(&analysis.dissimilarity, err))
}

fn cmd_cycle(args: &AnalysisArgs, out: &mut dyn Write) -> CmdResult {
    let config = args.config();
    let (_, trajectories) = pipeline::prepare(&config)?;
    let cycle = pipeline::find_cycle(&trajectories, config.cycle_mode, &config.search)?;
    if args.json {
        emit(
            out,
            &(serde_json::to_string_pretty(&cycle).expect("cycle serializes") + "\n"),
        )?;
    } else {
        emit(out, &report::cycle_text(&cycle))?;
    }
    Ok(0)
}

fn cmd_shiftcorr(args: &AnalysisArgs, out: &mut dyn Write) -> CmdResult {
    let config = args.config();
    let (_, trajectories) = pipeline::prepare(&config)?;
    let cycle = pipeline::find_cycle(&trajectories, config.cycle_mode, &config.search)?;
    let shift = pipeline::shift_correlation(&trajectories, config.speed_mode, &cycle.combined)?;

    report::ensure_dir(&args.out_dir).map_err(output_err)?;
    report::write_atomic(
        &args.out_dir.join("shift_correlation.svg"),
        report::shift_svg(&shift).as_bytes(),
    )
    .map_err(output_err)?;
    if args.json {
        emit(out, &report::shift_json_string(&shift))?;
    } else {
        emit(out, &report::shift_text(&shift))?;
    }
    Ok(0)
}

fn cmd_dissim(args: &AnalysisArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let config = args.config();
    let (_, trajectories) = pipeline::prepare(&config)?;
    let dissim = pipeline::dissimilarity(&trajectories, &config.dissimilarity)?;

    report::ensure_dir(&args.out_dir).map_err(output_err)?;
    report::write_dissimilarity_charts(&args.out_dir, &dissim, false).map_err(output_err)?;
    if args.json {
        let json = serde_json::to_string_pretty(&report::dissimilarity_json(&dissim)).expect("report serializes");
        emit(out, &(json + "\n"))?;
    } else {
        emit(out, &report::dissimilarity_table(&dissim))?;
    }
    Ok(report_failed_cases(&dissim, err))
}

fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> CmdResult {
    let params = args.params();
    let frames = generate_gait(&params).map_err(|e| StageError::new(Stage::Config, e))?;
    match args.format {
        SynthFormat::Csv => {
            if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
                report::ensure_dir(parent).map_err(output_err)?;
            }
            let mut buf = Vec::new();
            write_keypoint_csv(&frames, &mut buf).map_err(|e| output_err(Error::io(&args.out, e)))?;
            report::write_atomic(&args.out, &buf).map_err(output_err)?;
        }
        SynthFormat::OpenposeDir => {
            write_openpose_dir(&frames, &args.out, "synth").map_err(output_err)?;
        }
    }
    emit(
        out,
        &format!("wrote {} frames to {}\n", frames.len(), args.out.display()),
    )?;
    Ok(0)
}
