//! Stage-by-stage analysis of one subject's record.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::Error;
use crate::ingest::{
    extract_trajectory, interpolate_gaps, parse_openpose_dir, read_keypoint_csv, smooth_moving_average, JointId,
    JointTrajectory, KeypointFrame, DEFAULT_CONFIDENCE_THRESHOLD, DEFAULT_SMOOTH_WINDOW,
};
use crate::signal::{estimate_cycle, speed_series, CycleEstimate, CycleSearch, SpeedMode};
use crate::symmetry::{
    combine_cycle_estimates, evaluate_all_cases, quarter_shift_correlation, DissimilarityOptions, DissimilarityReport,
    ShiftCorrelationResult,
};

/// The joints every metric draws on.
pub const TRACKED: [JointId; 4] = [JointId::RAnkle, JointId::RWrist, JointId::LAnkle, JointId::LWrist];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    OpenposeDir,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Ingest,
    Repair,
    Cycle,
    ShiftCorrelation,
    Dissimilarity,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Repair => "repair",
            Stage::Cycle => "cycle",
            Stage::ShiftCorrelation => "shift-correlation",
            Stage::Dissimilarity => "dissimilarity",
            Stage::Output => "output",
        })
    }
}

/// A pipeline failure tagged with where it happened.
#[derive(Debug, Clone, PartialEq)]
pub struct StageError {
    pub stage: Stage,
    pub joint: Option<JointId>,
    pub source: Error,
}

impl StageError {
    pub fn new(stage: Stage, source: Error) -> Self {
        StageError {
            stage,
            joint: None,
            source,
        }
    }

    pub fn at(stage: Stage, joint: JointId, source: Error) -> Self {
        StageError {
            stage,
            joint: Some(joint),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.source.exit_code()
    }
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.joint {
            Some(j) => write!(f, "{} stage, joint {j}: {}", self.stage, self.source),
            None => write!(f, "{} stage: {}", self.stage, self.source),
        }
    }
}

type StageResult<T> = std::result::Result<T, StageError>;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub input: PathBuf,
    pub format: Option<InputFormat>,
    pub confidence_threshold: f64,
    pub smooth_window: usize,
    /// Speed used by the shift correlation.
    pub speed_mode: SpeedMode,
    /// Speed used to find the gait cycle.
    pub cycle_mode: SpeedMode,
    pub search: CycleSearch,
    pub dissimilarity: DissimilarityOptions,
}

impl AnalysisConfig {
    /// The command-line defaults for `input`.
    pub fn new(input: impl Into<PathBuf>) -> Self {
        AnalysisConfig {
            input: input.into(),
            format: None,
            confidence_threshold: DEFAULT_CONFIDENCE_THRESHOLD,
            smooth_window: DEFAULT_SMOOTH_WINDOW,
            speed_mode: SpeedMode::AbsSum,
            cycle_mode: SpeedMode::Horizontal,
            search: CycleSearch::default(),
            dissimilarity: DissimilarityOptions::default(),
        }
    }

    pub fn validate(&self) -> StageResult<()> {
        let fail = |msg: String| Err(StageError::new(Stage::Config, Error::InvalidParameter(msg)));
        if !(0.0..1.0).contains(&self.confidence_threshold) {
            return fail(format!(
                "confidence threshold must lie in [0, 1), got {}",
                self.confidence_threshold
            ));
        }
        if self.smooth_window == 0 || self.smooth_window.is_multiple_of(2) {
            return fail(format!(
                "smooth window must be a positive odd number, got {}",
                self.smooth_window
            ));
        }
        if !self.dissimilarity.threshold.is_finite() || self.dissimilarity.threshold <= 0.0 {
            return fail(format!(
                "dissimilarity threshold must be positive, got {}",
                self.dissimilarity.threshold
            ));
        }
        if !(-1.0..=1.0).contains(&self.search.min_peak) {
            return fail(format!("min peak must lie in [-1, 1], got {}", self.search.min_peak));
        }
        Ok(())
    }

    pub fn resolved_format(&self) -> InputFormat {
        self.format.unwrap_or(if self.input.is_dir() {
            InputFormat::OpenposeDir
        } else {
            InputFormat::Csv
        })
    }
}

pub fn load_frames(input: &Path, format: InputFormat) -> StageResult<Vec<KeypointFrame>> {
    let frames = match format {
        InputFormat::OpenposeDir => parse_openpose_dir(input),
        InputFormat::Csv => read_keypoint_csv(input),
    }
    .map_err(|e| StageError::new(Stage::Ingest, e))?;
    if frames.len() < 2 {
        return Err(StageError::new(
            Stage::Ingest,
            Error::InsufficientData(format!("need at least 2 frames, got {}", frames.len())),
        ));
    }
    Ok(frames)
}

/// Gap filling then smoothing for each tracked joint.
pub fn repair_joints(
    frames: &[KeypointFrame],
    confidence_threshold: f64,
    smooth_window: usize,
) -> StageResult<BTreeMap<JointId, JointTrajectory>> {
    TRACKED
        .iter()
        .map(|&joint| {
            let at = |e| StageError::at(Stage::Repair, joint, e);
            let raw = extract_trajectory(frames, joint).map_err(at)?;
            let filled = interpolate_gaps(&raw, confidence_threshold).map_err(at)?;
            let smooth = smooth_moving_average(&filled, smooth_window).map_err(at)?;
            Ok((joint, smooth))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CycleOutcome {
    pub left: CycleEstimate,
    pub right: CycleEstimate,
    pub combined: CycleEstimate,
}

pub fn find_cycle(
    trajectories: &BTreeMap<JointId, JointTrajectory>,
    mode: SpeedMode,
    search: &CycleSearch,
) -> StageResult<CycleOutcome> {
    let side = |joint: JointId| {
        let at = |e| StageError::at(Stage::Cycle, joint, e);
        let traj = trajectories.get(&joint).ok_or(Error::MissingJoint(joint)).map_err(at)?;
        let speed = speed_series(traj, mode).map_err(at)?;
        estimate_cycle(&speed.values, search).map_err(at)
    };
    let left = side(JointId::LAnkle)?;
    let right = side(JointId::RAnkle)?;
    let combined = combine_cycle_estimates(&left, &right).map_err(|e| StageError::new(Stage::Cycle, e))?;
    Ok(CycleOutcome { left, right, combined })
}

pub fn shift_correlation(
    trajectories: &BTreeMap<JointId, JointTrajectory>,
    mode: SpeedMode,
    cycle: &CycleEstimate,
) -> StageResult<ShiftCorrelationResult> {
    let speed = |joint: JointId| {
        let at = |e| StageError::at(Stage::ShiftCorrelation, joint, e);
        let traj = trajectories.get(&joint).ok_or(Error::MissingJoint(joint)).map_err(at)?;
        speed_series(traj, mode).map_err(at)
    };
    let left = speed(JointId::LAnkle)?;
    let right = speed(JointId::RAnkle)?;
    quarter_shift_correlation(&left, &right, cycle).map_err(|e| StageError::new(Stage::ShiftCorrelation, e))
}

pub fn dissimilarity(
    trajectories: &BTreeMap<JointId, JointTrajectory>,
    options: &DissimilarityOptions,
) -> StageResult<DissimilarityReport> {
    evaluate_all_cases(trajectories, options).map_err(|e| match e {
        Error::MissingJoint(j) => StageError::at(Stage::Dissimilarity, j, e),
        other => StageError::new(Stage::Dissimilarity, other),
    })
}

/// Everything `analyze` computes for one subject.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub subject: String,
    pub frames: usize,
    pub trajectories: BTreeMap<JointId, JointTrajectory>,
    pub cycle: CycleOutcome,
    pub shift: ShiftCorrelationResult,
    pub dissimilarity: DissimilarityReport,
}

/// Repaired trajectories plus the record length.
pub fn prepare(config: &AnalysisConfig) -> StageResult<(usize, BTreeMap<JointId, JointTrajectory>)> {
    config.validate()?;
    let frames = load_frames(&config.input, config.resolved_format())?;
    let trajectories = repair_joints(&frames, config.confidence_threshold, config.smooth_window)?;
    Ok((frames.len(), trajectories))
}

pub fn analyze(config: &AnalysisConfig, subject: String) -> StageResult<Analysis> {
    let (frames, trajectories) = prepare(config)?;
    let cycle = find_cycle(&trajectories, config.cycle_mode, &config.search)?;
    let shift = shift_correlation(&trajectories, config.speed_mode, &cycle.combined)?;
    let dissimilarity = dissimilarity(&trajectories, &config.dissimilarity)?;
    Ok(Analysis {
        subject,
        frames,
        trajectories,
        cycle,
        shift,
        dissimilarity,
    })
}

/// Subject label derived from the input path.
pub fn default_subject(input: &Path) -> String {
    let name = if input.is_dir() {
        input.file_name()
    } else {
        input.file_stem()
    };
    name.map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "subject".to_string())
}
