//! Numeric kernels shared by both symmetry metrics.

mod convolution;
mod correlation;
mod spectrum;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{JointId, JointTrajectory};

pub use convolution::{linear_convolution, linear_convolution_direct, linear_convolution_fft};
pub use correlation::{autocorrelation, estimate_cycle, pearson, CycleEstimate, CycleSearch};
pub use spectrum::{dft, fractional_circular_shift, idft, SpectrumCoefficients};

/// How a frame-to-frame displacement (dx, dy) is reduced to one speed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpeedMode {
    /// dx + dy
    SignedSum,
    /// |dx| + |dy|
    AbsSum,
    /// sqrt(dx² + dy²)
    Euclidean,
    /// dx
    Horizontal,
    /// dy
    Vertical,
}

impl SpeedMode {
    pub const ALL: [SpeedMode; 5] = [
        SpeedMode::SignedSum,
        SpeedMode::AbsSum,
        SpeedMode::Euclidean,
        SpeedMode::Horizontal,
        SpeedMode::Vertical,
    ];

    pub fn apply(self, dx: f64, dy: f64) -> f64 {
        match self {
            SpeedMode::SignedSum => dx + dy,
            SpeedMode::AbsSum => dx.abs() + dy.abs(),
            SpeedMode::Euclidean => dx.hypot(dy),
            SpeedMode::Horizontal => dx,
            SpeedMode::Vertical => dy,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpeedMode::SignedSum => "signed-sum",
            SpeedMode::AbsSum => "abs-sum",
            SpeedMode::Euclidean => "euclidean",
            SpeedMode::Horizontal => "horizontal",
            SpeedMode::Vertical => "vertical",
        }
    }
}

impl fmt::Display for SpeedMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpeedMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpeedMode::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown speed mode {s:?}"))
    }
}

/// Per-frame speed of one joint in pixels/frame; one sample shorter than
/// the trajectory it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedSeries {
    pub values: Vec<f64>,
    pub mode: SpeedMode,
    pub source: JointId,
}

impl SpeedSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn speed_series(traj: &JointTrajectory, mode: SpeedMode) -> Result<SpeedSeries> {
    if traj.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "trajectory of {} needs at least 2 samples",
            traj.joint
        )));
    }
    if !traj.is_repaired() {
        return Err(Error::UnrepairedGap(traj.joint));
    }
    let values = traj
        .x
        .windows(2)
        .zip(traj.y.windows(2))
        .map(|(x, y)| mode.apply(x[1] - x[0], y[1] - y[0]))
        .collect();
    Ok(SpeedSeries {
        values,
        mode,
        source: traj.joint,
    })
}

pub(crate) fn check_finite(values: &[f64], what: &str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::InvalidInput(format!(
            "{what} has a non-finite value at index {i}"
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{extract_trajectory, KeypointFrame};

    fn traj(points: &[(f64, f64)]) -> JointTrajectory {
        let (x, y) = points.iter().copied().unzip();
        JointTrajectory::from_coordinates(JointId::RAnkle, x, y).unwrap()
    }

    #[test]
    fn signed_sum_of_steps() {
        let s = speed_series(&traj(&[(0.0, 0.0), (3.0, 4.0), (6.0, 8.0)]), SpeedMode::SignedSum).unwrap();
        assert_eq!(s.values, vec![7.0, 7.0]);
        assert_eq!(s.source, JointId::RAnkle);
    }

    #[test]
    fn euclidean_step() {
        let s = speed_series(&traj(&[(0.0, 0.0), (3.0, 4.0)]), SpeedMode::Euclidean).unwrap();
        assert_eq!(s.values, vec![5.0]);
    }

    #[test]
    fn sign_handling_separates_modes() {
        let t = traj(&[(0.0, 0.0), (-3.0, 4.0)]);
        assert_eq!(speed_series(&t, SpeedMode::SignedSum).unwrap().values, vec![1.0]);
        assert_eq!(speed_series(&t, SpeedMode::AbsSum).unwrap().values, vec![7.0]);
        assert_eq!(speed_series(&t, SpeedMode::Horizontal).unwrap().values, vec![-3.0]);
        assert_eq!(speed_series(&t, SpeedMode::Vertical).unwrap().values, vec![4.0]);
    }

    #[test]
    fn length_is_one_less() {
        let pts: Vec<_> = (0..17).map(|i| (i as f64, (i * i) as f64)).collect();
        for mode in SpeedMode::ALL {
            assert_eq!(speed_series(&traj(&pts), mode).unwrap().len(), 16);
        }
    }

    #[test]
    fn unrepaired_gap_is_rejected() {
        let frames: Vec<_> = (0..4).map(KeypointFrame::empty).collect();
        let t = extract_trajectory(&frames, JointId::LAnkle).unwrap();
        assert_eq!(
            speed_series(&t, SpeedMode::AbsSum).unwrap_err(),
            Error::UnrepairedGap(JointId::LAnkle)
        );
    }

    #[test]
    fn mode_names_parse() {
        for m in SpeedMode::ALL {
            assert_eq!(m.name().parse::<SpeedMode>().unwrap(), m);
        }
    }
}
