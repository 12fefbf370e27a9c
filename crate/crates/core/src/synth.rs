//! Synthetic walking keypoints with controllable left-right asymmetry.
//!
//! The right side follows low-harmonic periodic waveforms; the left side
//! replays them half a cycle later. Every oscillation uses odd harmonics
//! only, so a half-cycle delay is an exact sign flip: with the asymmetry
//! knobs at their neutral values and no forward drift, every left speed
//! component is exactly the negated right one. Three knobs then break the
//! symmetry in known places:
//!
//! * `left_amp_ratio` r scales the left ankle's vertical lift by r and the
//!   left wrist's vertical motion by 1/r, a smaller step answered by a
//!   larger arm movement (cases HV, VH, VV),
//! * `left_phase_jitter` offsets the phase of the left vertical motion of
//!   ankle and wrist (cases HV, VH, VV),
//! * `waveform_distortion` blends a third harmonic into the left vertical
//!   motion of ankle and wrist (cases HV, VH, VV).
//!
//! Horizontal motion is never altered, so case HH stays symmetric under
//! every knob.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{JointId, Keypoint, KeypointFrame};
use crate::symmetry::CouplingCase;

/// Confidence given to every generated detection that is not a dropout.
pub const SYNTH_CONFIDENCE: f64 = 0.9;

const ANKLE_THIRD_HARMONIC: f64 = 0.1;
const LIFT_THIRD_HARMONIC: f64 = -0.2;
const LIFT_TO_STRIDE: f64 = 5.0 / 6.0;
const WRIST_VERTICAL_TO_SWING: f64 = 0.32;
/// Phase lead (radians) of the vertical motion relative to the horizontal.
const VERTICAL_PHASE_LEAD: f64 = 1.0;

/// Knob magnitudes below these count as symmetric in [`expected_verdict`].
pub const AMP_RATIO_TOLERANCE: f64 = 0.05;
pub const PHASE_TOLERANCE: f64 = 0.05;
pub const DISTORTION_TOLERANCE: f64 = 0.05;
/// Largest noise level at which the shift correlation is expected to stay high.
pub const HIGH_RHO_MAX_NOISE: f64 = 0.5;
/// Largest dropout fraction at which the shift correlation is expected to stay high.
pub const HIGH_RHO_MAX_DROPOUT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitParams {
    /// Gait cycle T in frames.
    pub cycle_frames: usize,
    pub n_strides: usize,
    /// Recorded as metadata only.
    pub fps: u32,
    /// Horizontal ankle excursion, pixels.
    pub ankle_amp: f64,
    /// Horizontal wrist swing, pixels.
    pub wrist_amp: f64,
    /// Whole-body drift, pixels/frame. Zero means body-centred coordinates.
    pub forward_speed: f64,
    pub left_amp_ratio: f64,
    /// Radians.
    pub left_phase_jitter: f64,
    /// Third-harmonic weight in [0, 1).
    pub waveform_distortion: f64,
    /// Gaussian position noise, pixels.
    pub noise_std: f64,
    /// Fraction of detections replaced by zero-confidence dropouts.
    pub dropout_rate: f64,
    pub seed: u64,
}

impl Default for GaitParams {
    fn default() -> Self {
        GaitParams {
            cycle_frames: 33,
            n_strides: 3,
            fps: 30,
            ankle_amp: 30.0,
            wrist_amp: 25.0,
            forward_speed: 0.0,
            left_amp_ratio: 1.0,
            left_phase_jitter: 0.0,
            waveform_distortion: 0.0,
            noise_std: 0.0,
            dropout_rate: 0.0,
            seed: 0,
        }
    }
}

impl GaitParams {
    pub fn total_frames(&self) -> usize {
        self.cycle_frames * self.n_strides
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParameter(msg));
        if self.cycle_frames < 8 {
            return fail(format!("cycle_frames must be at least 8, got {}", self.cycle_frames));
        }
        if self.n_strides == 0 {
            return fail("n_strides must be positive".into());
        }
        if self.fps == 0 {
            return fail("fps must be positive".into());
        }
        for (name, v) in [
            ("ankle_amp", self.ankle_amp),
            ("wrist_amp", self.wrist_amp),
            ("noise_std", self.noise_std),
        ] {
            if !v.is_finite() || v < 0.0 {
                return fail(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        if !self.forward_speed.is_finite() || !self.left_phase_jitter.is_finite() {
            return fail("forward_speed and left_phase_jitter must be finite".into());
        }
        if !self.left_amp_ratio.is_finite() || self.left_amp_ratio <= 0.0 {
            return fail(format!("left_amp_ratio must be positive, got {}", self.left_amp_ratio));
        }
        if !(0.0..1.0).contains(&self.waveform_distortion) {
            return fail(format!(
                "waveform_distortion must lie in [0, 1), got {}",
                self.waveform_distortion
            ));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return fail(format!("dropout_rate must lie in [0, 1), got {}", self.dropout_rate));
        }
        Ok(())
    }
}

/// Per-side asymmetry applied to the vertical waveforms.
#[derive(Clone, Copy)]
struct SideShape {
    lift_ratio: f64,
    phase: f64,
    distortion: f64,
}

impl SideShape {
    const NEUTRAL: SideShape = SideShape {
        lift_ratio: 1.0,
        phase: 0.0,
        distortion: 0.0,
    };

    fn blend(&self, fundamental: f64, third: f64) -> f64 {
        (1.0 - self.distortion) * fundamental + self.distortion * third
    }
}

/// Image-space rest positions (x, y) of each joint.
fn rest_position(joint: JointId) -> (f64, f64) {
    match joint {
        JointId::RAnkle | JointId::LAnkle => (320.0, 400.0),
        JointId::RKnee | JointId::LKnee => (320.0, 330.0),
        JointId::RHip | JointId::LHip => (320.0, 260.0),
        JointId::RWrist | JointId::LWrist => (320.0, 270.0),
        JointId::RShoulder | JointId::LShoulder => (320.0, 170.0),
    }
}

/// Oscillation of one joint around its rest position at gait phase `theta`.
fn oscillation(params: &GaitParams, joint: JointId, theta: f64, shape: SideShape) -> (f64, f64) {
    let stride = params.ankle_amp;
    let lift = LIFT_TO_STRIDE * stride;
    let swing = params.wrist_amp;
    let tv = theta + VERTICAL_PHASE_LEAD + shape.phase;
    match joint {
        JointId::RAnkle | JointId::LAnkle => {
            let dx = stride * (theta.sin() + ANKLE_THIRD_HARMONIC * (3.0 * theta).sin());
            let profile = shape.blend(tv.cos(), (3.0 * tv).cos()) + LIFT_THIRD_HARMONIC * (3.0 * tv).cos();
            // image y grows downward: lifting the foot decreases y
            (dx, -shape.lift_ratio * lift * profile)
        }
        JointId::RWrist | JointId::LWrist => {
            let dx = -swing * theta.sin();
            let dy = WRIST_VERTICAL_TO_SWING * swing * shape.blend(tv.sin(), (3.0 * tv).sin()) / shape.lift_ratio;
            (dx, dy)
        }
        JointId::RKnee | JointId::LKnee => (0.5 * stride * theta.sin(), -0.5 * lift * tv.cos()),
        JointId::RHip | JointId::LHip => (0.1 * stride * theta.sin(), 0.05 * lift * tv.cos()),
        JointId::RShoulder | JointId::LShoulder => (-0.2 * swing * theta.sin(), 0.05 * lift * tv.cos()),
    }
}

/// Generates `n_strides · cycle_frames` frames of all ten joints.
pub fn generate_gait(params: &GaitParams) -> Result<Vec<KeypointFrame>> {
    params.validate()?;
    let left = SideShape {
        lift_ratio: params.left_amp_ratio,
        phase: params.left_phase_jitter,
        distortion: params.waveform_distortion,
    };
    let period = params.cycle_frames as f64;

    let mut noise_rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut dropout_rng = ChaCha8Rng::seed_from_u64(params.seed);
    dropout_rng.set_stream(1);
    let normal = Normal::new(0.0, params.noise_std).map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let frames = (0..params.total_frames())
        .map(|n| {
            let t = n as f64;
            let theta = 2.0 * PI * t / period;
            let drift = params.forward_speed * t;
            let mut frame = KeypointFrame::empty(n as u64);
            for joint in JointId::ALL {
                let (shape, phase) = if joint.is_left() {
                    (left, theta - PI)
                } else {
                    (SideShape::NEUTRAL, theta)
                };
                let (rx, ry) = rest_position(joint);
                let (dx, dy) = oscillation(params, joint, phase, shape);
                let mut x = rx + drift + dx;
                let mut y = ry + dy;
                if params.noise_std > 0.0 {
                    x += normal.sample(&mut noise_rng);
                    y += normal.sample(&mut noise_rng);
                }
                let kp = if params.dropout_rate > 0.0 && dropout_rng.random::<f64>() < params.dropout_rate {
                    Keypoint::MISSING
                } else {
                    Keypoint::new(x, y, SYNTH_CONFIDENCE)
                };
                frame.joints.insert(joint, kp);
            }
            frame
        })
        .collect();
    Ok(frames)
}

/// What the metrics should report for a parameter set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedVerdict {
    /// Shift correlation expected at or above 0.95.
    pub method1_high_rho: bool,
    /// Coupling cases whose dissimilarity should rise above the symmetric
    /// baseline.
    pub asymmetric_cases: BTreeSet<CouplingCase>,
}

pub fn expected_verdict(params: &GaitParams) -> ExpectedVerdict {
    let amp_off = (params.left_amp_ratio - 1.0).abs() > AMP_RATIO_TOLERANCE;
    let phase_off = params.left_phase_jitter.abs() > PHASE_TOLERANCE;
    let shape_off = params.waveform_distortion > DISTORTION_TOLERANCE;

    let mut asymmetric_cases = BTreeSet::new();
    if amp_off || phase_off || shape_off {
        asymmetric_cases.extend([CouplingCase::HV, CouplingCase::VH, CouplingCase::VV]);
    }

    // the shift correlation is blind to amplitude but not to timing or shape
    let method1_high_rho = !phase_off
        && !shape_off
        && (0.5..=2.0).contains(&params.left_amp_ratio)
        && params.noise_std <= HIGH_RHO_MAX_NOISE
        && params.dropout_rate <= HIGH_RHO_MAX_DROPOUT;

    ExpectedVerdict {
        method1_high_rho,
        asymmetric_cases,
    }
}
