//! Left-right symmetry metrics.
//!
//! *Quarter-cycle shift correlation*: the left ankle speed is delayed by a
//! quarter gait cycle and the right one advanced by a quarter cycle, which
//! lines up the two alternating limbs; their Pearson correlation is the
//! symmetry index.
//!
//! *Coupling dissimilarity*: each body side is treated as a linear
//! time-invariant system from ankle speed (input) to wrist speed (output).
//! With right-side input/output `a`, `b` and left-side `x`, `y`, equal
//! transfer functions mean `A(z)Y(z) = X(z)B(z)`. Comparing the two
//! cross-convolutions `u = a∗y` and `v = x∗b` tests that identity without
//! ever dividing polynomials:
//!
//! ```text
//! Dis = ‖u − v‖² / (‖u‖·‖v‖)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{JointId, JointTrajectory};
use crate::signal::{
    estimate_cycle, fractional_circular_shift, linear_convolution, pearson, speed_series, CycleEstimate, CycleSearch,
    SpeedMode, SpeedSeries,
};

/// Relative spread between the two per-side cycle estimates beyond which
/// they are not averaged.
const MAX_CYCLE_DIVERGENCE: f64 = 0.25;

pub const DEFAULT_DIS_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftCorrelationResult {
    pub rho: f64,
    pub cycle_frames: usize,
    /// Delay applied to the left series, +T/4 frames.
    pub left_shift: f64,
    /// Delay applied to the right series, −T/4 frames.
    pub right_shift: f64,
    /// Whole cycles kept from the record, in frames.
    pub analyzed_length: usize,
    /// First sample of the analyzed window within the speed series.
    pub window_start: usize,
    pub left_shifted: Vec<f64>,
    pub right_shifted: Vec<f64>,
}

/// Quarter-cycle shift correlation between left and right speed series.
///
/// Both series are cut to the largest whole number of cycles, centered in the
/// record so the moving-average boundary samples fall outside the window.
/// The circular shift then sees an exactly periodic extension.
pub fn quarter_shift_correlation(
    left: &SpeedSeries,
    right: &SpeedSeries,
    cycle: &CycleEstimate,
) -> Result<ShiftCorrelationResult> {
    if left.len() != right.len() {
        return Err(Error::InvalidInput(format!(
            "left and right speed series differ in length ({} vs {})",
            left.len(),
            right.len()
        )));
    }
    let m = left.len();
    let period = cycle.period_frames;
    if period == 0 || 2 * period > m {
        return Err(Error::InsufficientRecord {
            cycle: period,
            needed: 2 * period,
            available: m,
        });
    }
    let analyzed_length = (m / period) * period;
    let window_start = (m - analyzed_length) / 2;
    let window = window_start..window_start + analyzed_length;

    let quarter = period as f64 / 4.0;
    let left_shifted = fractional_circular_shift(&left.values[window.clone()], quarter)?;
    let right_shifted = fractional_circular_shift(&right.values[window], -quarter)?;
    let rho = pearson(&left_shifted, &right_shifted)?;

    Ok(ShiftCorrelationResult {
        rho,
        cycle_frames: period,
        left_shift: quarter,
        right_shift: -quarter,
        analyzed_length,
        window_start,
        left_shifted,
        right_shifted,
    })
}

/// Gait cycle from both ankles: the rounded mean of the two per-side
/// estimates.
pub fn combined_cycle(
    left_ankle: &SpeedSeries,
    right_ankle: &SpeedSeries,
    search: &CycleSearch,
) -> Result<CycleEstimate> {
    let left = estimate_cycle(&left_ankle.values, search)?;
    let right = estimate_cycle(&right_ankle.values, search)?;
    combine_cycle_estimates(&left, &right)
}

pub fn combine_cycle_estimates(left: &CycleEstimate, right: &CycleEstimate) -> Result<CycleEstimate> {
    let (l, r) = (left.period_frames as f64, right.period_frames as f64);
    let mean = (l + r) / 2.0;
    if (l - r).abs() > MAX_CYCLE_DIVERGENCE * mean {
        return Err(Error::AmbiguousCycle {
            left: left.period_frames,
            right: right.period_frames,
        });
    }
    Ok(CycleEstimate {
        period_frames: mean.round() as usize,
        peak_acf: (left.peak_acf + right.peak_acf) / 2.0,
        search_range: (
            left.search_range.0.min(right.search_range.0),
            left.search_range.1.max(right.search_range.1),
        ),
    })
}

/// Ankle-to-wrist coupling cases: the first letter is the ankle (input)
/// component, the second the wrist (output) component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CouplingCase {
    HV,
    VH,
    HH,
    VV,
}

impl CouplingCase {
    /// Report order.
    pub const ALL: [CouplingCase; 4] = [CouplingCase::HV, CouplingCase::VH, CouplingCase::HH, CouplingCase::VV];

    pub fn input_mode(self) -> SpeedMode {
        match self {
            CouplingCase::HV | CouplingCase::HH => SpeedMode::Horizontal,
            CouplingCase::VH | CouplingCase::VV => SpeedMode::Vertical,
        }
    }

    pub fn output_mode(self) -> SpeedMode {
        match self {
            CouplingCase::VH | CouplingCase::HH => SpeedMode::Horizontal,
            CouplingCase::HV | CouplingCase::VV => SpeedMode::Vertical,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CouplingCase::HV => "HV",
            CouplingCase::VH => "VH",
            CouplingCase::HH => "HH",
            CouplingCase::VV => "VV",
        }
    }
}

impl fmt::Display for CouplingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CouplingCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CouplingCase::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown coupling case {s:?}"))
    }
}

/// The four speed series of one coupling case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseSeries {
    pub case: CouplingCase,
    /// Right ankle, input component.
    pub a: SpeedSeries,
    /// Right wrist, output component.
    pub b: SpeedSeries,
    /// Left ankle, input component.
    pub x: SpeedSeries,
    /// Left wrist, output component.
    pub y: SpeedSeries,
}

pub fn case_series(trajectories: &BTreeMap<JointId, JointTrajectory>, case: CouplingCase) -> Result<CaseSeries> {
    let get = |joint: JointId| trajectories.get(&joint).ok_or(Error::MissingJoint(joint));
    let (ra, rw, la, lw) = (
        get(JointId::RAnkle)?,
        get(JointId::RWrist)?,
        get(JointId::LAnkle)?,
        get(JointId::LWrist)?,
    );
    let n = ra.len();
    if [rw, la, lw].iter().any(|t| t.len() != n) {
        return Err(Error::InvalidInput(
            "ankle and wrist trajectories differ in length".into(),
        ));
    }
    Ok(CaseSeries {
        case,
        a: speed_series(ra, case.input_mode())?,
        b: speed_series(rw, case.output_mode())?,
        x: speed_series(la, case.input_mode())?,
        y: speed_series(lw, case.output_mode())?,
    })
}

/// Cross-convolutions of the two coupling systems.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvolutionPair {
    /// a ∗ y
    pub u: Vec<f64>,
    /// x ∗ b
    pub v: Vec<f64>,
}

/// `Dis((a, b), (x, y)) = ‖a∗y − x∗b‖² / (‖a∗y‖·‖x∗b‖)`.
pub fn dissimilarity(a: &[f64], b: &[f64], x: &[f64], y: &[f64]) -> Result<(f64, ConvolutionPair)> {
    let n = a.len();
    if [b, x, y].iter().any(|s| s.len() != n) {
        return Err(Error::InvalidInput("dissimilarity inputs differ in length".into()));
    }
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "dissimilarity needs at least 2 samples, got {n}"
        )));
    }
    let u = linear_convolution(a, y)?;
    let v = linear_convolution(x, b)?;
    let norm_u = norm(&u);
    let norm_v = norm(&v);
    if norm_u == 0.0 || norm_v == 0.0 {
        let side = if norm_u == 0.0 {
            "right ankle ∗ left wrist"
        } else {
            "left ankle ∗ right wrist"
        };
        return Err(Error::DegenerateSystem(format!(
            "{side} cross-convolution is identically zero (motionless limb)"
        )));
    }
    let diff_sq: f64 = u.iter().zip(&v).map(|(p, q)| (p - q) * (p - q)).sum();
    Ok((diff_sq / (norm_u * norm_v), ConvolutionPair { u, v }))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Symmetric,
    Asymmetric,
}

impl Classification {
    pub fn from_dis(dis: f64, threshold: f64) -> Self {
        if dis < threshold {
            Classification::Symmetric
        } else {
            Classification::Asymmetric
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Symmetric => "Symmetric",
            Classification::Asymmetric => "Asymmetric",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissimilarityOptions {
    pub threshold: f64,
    /// Subtract each speed series' mean before convolving.
    pub demean: bool,
}

impl Default for DissimilarityOptions {
    fn default() -> Self {
        DissimilarityOptions {
            threshold: DEFAULT_DIS_THRESHOLD,
            demean: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CaseOutcome {
    Computed {
        dis: f64,
        pair: ConvolutionPair,
        classification: Classification,
    },
    /// The case could not be evaluated, typically a motionless limb.
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub case: CouplingCase,
    pub series: CaseSeries,
    pub outcome: CaseOutcome,
}

impl CaseReport {
    pub fn dis(&self) -> Option<f64> {
        match &self.outcome {
            CaseOutcome::Computed { dis, .. } => Some(*dis),
            CaseOutcome::Failed(_) => None,
        }
    }

    pub fn classification(&self) -> Option<Classification> {
        match &self.outcome {
            CaseOutcome::Computed { classification, .. } => Some(*classification),
            CaseOutcome::Failed(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityReport {
    pub threshold: f64,
    pub demean: bool,
    /// One entry per case, in [`CouplingCase::ALL`] order.
    pub cases: Vec<CaseReport>,
}

impl DissimilarityReport {
    pub fn case(&self, case: CouplingCase) -> &CaseReport {
        self.cases
            .iter()
            .find(|c| c.case == case)
            .expect("report holds every case")
    }

    pub fn dis(&self, case: CouplingCase) -> Option<f64> {
        self.case(case).dis()
    }
}

/// Runs all four coupling cases. A missing joint aborts; a case whose
/// dissimilarity cannot be formed is recorded as failed and the others still
/// run.
pub fn evaluate_all_cases(
    trajectories: &BTreeMap<JointId, JointTrajectory>,
    options: &DissimilarityOptions,
) -> Result<DissimilarityReport> {
    if !options.threshold.is_finite() || options.threshold <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "dissimilarity threshold must be positive, got {}",
            options.threshold
        )));
    }
    let mut cases = Vec::with_capacity(CouplingCase::ALL.len());
    for case in CouplingCase::ALL {
        let series = case_series(trajectories, case)?;
        let prep = |s: &SpeedSeries| {
            if options.demean {
                demeaned(&s.values)
            } else {
                s.values.clone()
            }
        };
        let outcome = match dissimilarity(&prep(&series.a), &prep(&series.b), &prep(&series.x), &prep(&series.y)) {
            Ok((dis, pair)) => CaseOutcome::Computed {
                dis,
                pair,
                classification: Classification::from_dis(dis, options.threshold),
            },
            Err(e) => CaseOutcome::Failed(e),
        };
        cases.push(CaseReport { case, series, outcome });
    }
    Ok(DissimilarityReport {
        threshold: options.threshold,
        demean: options.demean,
        cases,
    })
}

fn demeaned(values: &[f64]) -> Vec<f64> {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| v - mean).collect()
}
