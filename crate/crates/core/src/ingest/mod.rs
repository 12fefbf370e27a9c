//! Keypoint ingestion and the preprocessing chain applied to every joint
//! before any metric is computed: gate low-confidence samples, fill them by
//! linear interpolation, then smooth with a centered moving average.

mod keypoint_csv;
mod openpose;
mod repair;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use keypoint_csv::{parse_keypoint_csv, read_keypoint_csv, write_keypoint_csv};
pub use openpose::{parse_openpose_dir, write_openpose_dir, BODY25_LEN};
pub use repair::{interpolate_gaps, smooth_moving_average, DEFAULT_CONFIDENCE_THRESHOLD, DEFAULT_SMOOTH_WINDOW};

/// The ten tracked joints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum JointId {
    RAnkle,
    LAnkle,
    RKnee,
    LKnee,
    RHip,
    LHip,
    RWrist,
    LWrist,
    RShoulder,
    LShoulder,
}

impl JointId {
    pub const ALL: [JointId; 10] = [
        JointId::RAnkle,
        JointId::LAnkle,
        JointId::RKnee,
        JointId::LKnee,
        JointId::RHip,
        JointId::LHip,
        JointId::RWrist,
        JointId::LWrist,
        JointId::RShoulder,
        JointId::LShoulder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            JointId::RAnkle => "RAnkle",
            JointId::LAnkle => "LAnkle",
            JointId::RKnee => "RKnee",
            JointId::LKnee => "LKnee",
            JointId::RHip => "RHip",
            JointId::LHip => "LHip",
            JointId::RWrist => "RWrist",
            JointId::LWrist => "LWrist",
            JointId::RShoulder => "RShoulder",
            JointId::LShoulder => "LShoulder",
        }
    }

    /// The same joint on the other side of the body.
    pub fn mirror(self) -> JointId {
        match self {
            JointId::RAnkle => JointId::LAnkle,
            JointId::LAnkle => JointId::RAnkle,
            JointId::RKnee => JointId::LKnee,
            JointId::LKnee => JointId::RKnee,
            JointId::RHip => JointId::LHip,
            JointId::LHip => JointId::RHip,
            JointId::RWrist => JointId::LWrist,
            JointId::LWrist => JointId::RWrist,
            JointId::RShoulder => JointId::LShoulder,
            JointId::LShoulder => JointId::RShoulder,
        }
    }

    pub fn is_left(self) -> bool {
        matches!(
            self,
            JointId::LAnkle | JointId::LKnee | JointId::LHip | JointId::LWrist | JointId::LShoulder
        )
    }

    /// Keypoint index in OpenPose's BODY_25 model.
    pub fn body25_index(self) -> usize {
        match self {
            JointId::RShoulder => 2,
            JointId::RWrist => 4,
            JointId::LShoulder => 5,
            JointId::LWrist => 7,
            JointId::RHip => 9,
            JointId::RKnee => 10,
            JointId::RAnkle => 11,
            JointId::LHip => 12,
            JointId::LKnee => 13,
            JointId::LAnkle => 14,
        }
    }
}

impl fmt::Display for JointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for JointId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        JointId::ALL
            .iter()
            .copied()
            .find(|j| j.name() == s)
            .ok_or_else(|| format!("unknown joint name {s:?}"))
    }
}

/// One raw detection: pixel coordinates plus detector confidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Keypoint {
    pub x: f64,
    pub y: f64,
    pub confidence: f64,
}

impl Keypoint {
    pub const MISSING: Keypoint = Keypoint {
        x: 0.0,
        y: 0.0,
        confidence: 0.0,
    };

    pub fn new(x: f64, y: f64, confidence: f64) -> Self {
        Keypoint { x, y, confidence }
    }
}

/// All tracked joints observed in one video frame.
///
/// Sequences produced by the parsers always carry every joint; joints the
/// source did not report are stored as [`Keypoint::MISSING`].
#[derive(Debug, Clone, PartialEq)]
pub struct KeypointFrame {
    pub frame_index: u64,
    pub joints: BTreeMap<JointId, Keypoint>,
}

impl KeypointFrame {
    /// A frame with every joint missing.
    pub fn empty(frame_index: u64) -> Self {
        let joints = JointId::ALL.iter().map(|&j| (j, Keypoint::MISSING)).collect();
        KeypointFrame { frame_index, joints }
    }

    pub fn get(&self, joint: JointId) -> Keypoint {
        self.joints.get(&joint).copied().unwrap_or(Keypoint::MISSING)
    }
}

/// A single joint's coordinate series over a record.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTrajectory {
    pub joint: JointId,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub confidence: Vec<f64>,
    /// True where the coordinates were filled in rather than observed.
    pub gap_mask: Vec<bool>,
    repaired: bool,
}

impl JointTrajectory {
    /// Builds a fully observed trajectory (confidence 1 everywhere).
    pub fn from_coordinates(joint: JointId, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "x and y lengths differ ({} vs {})",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "trajectory of {joint} needs at least 2 samples, got {}",
                x.len()
            )));
        }
        let n = x.len();
        Ok(JointTrajectory {
            joint,
            x,
            y,
            confidence: vec![1.0; n],
            gap_mask: vec![false; n],
            repaired: true,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Whether the trajectory can be differenced: either it went through
    /// [`interpolate_gaps`], or it never had a structural gap.
    pub fn is_repaired(&self) -> bool {
        self.repaired || (!self.gap_mask.iter().any(|&g| g) && self.x.iter().chain(&self.y).all(|v| v.is_finite()))
    }
}

/// Copies one joint's readings out of a frame sequence.
pub fn extract_trajectory(frames: &[KeypointFrame], joint: JointId) -> Result<JointTrajectory> {
    if frames.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 frames, got {}",
            frames.len()
        )));
    }
    let n = frames.len();
    let mut traj = JointTrajectory {
        joint,
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        confidence: Vec::with_capacity(n),
        gap_mask: Vec::with_capacity(n),
        repaired: false,
    };
    for frame in frames {
        let kp = frame.get(joint);
        traj.x.push(kp.x);
        traj.y.push(kp.y);
        traj.confidence.push(kp.confidence);
        traj.gap_mask.push(kp.confidence <= 0.0);
    }
    Ok(traj)
}

/// Rejects readings that violate the frame invariants.
pub(crate) fn validate_keypoint(kp: &Keypoint) -> std::result::Result<(), String> {
    if !kp.x.is_finite() || !kp.y.is_finite() {
        return Err(format!("non-finite coordinate ({}, {})", kp.x, kp.y));
    }
    if !(0.0..=1.0).contains(&kp.confidence) {
        return Err(format!("confidence {} outside [0, 1]", kp.confidence));
    }
    Ok(())
}
