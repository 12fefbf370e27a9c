//! OpenPose per-frame JSON output (BODY_25 model).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{validate_keypoint, JointId, Keypoint, KeypointFrame};
use crate::error::{Error, Result};

/// 25 keypoints times (x, y, confidence).
pub const BODY25_LEN: usize = 75;

#[derive(Debug, Serialize, Deserialize)]
struct FrameFile {
    #[serde(default)]
    version: Option<f64>,
    people: Vec<Person>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Person {
    pose_keypoints_2d: Vec<f64>,
}

impl Person {
    fn total_confidence(&self) -> f64 {
        self.pose_keypoints_2d.iter().skip(2).step_by(3).sum()
    }
}

/// Reads every `*.json` file in `dir`, in lexicographic filename order, one
/// frame per file. When a file lists several people, the one with the largest
/// summed confidence is kept; a file with nobody in it yields an all-missing
/// frame.
pub fn parse_openpose_dir(dir: &Path) -> Result<Vec<KeypointFrame>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|ext| ext == "json") {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if files.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} holds {} keypoint file(s), need at least 2",
            dir.display(),
            files.len()
        )));
    }

    files
        .iter()
        .enumerate()
        .map(|(index, path)| parse_frame_file(path, index as u64))
        .collect()
}

fn parse_frame_file(path: &Path, frame_index: u64) -> Result<KeypointFrame> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_error = |message: String| Error::Parse {
        location: path.display().to_string(),
        message,
    };
    let parsed: FrameFile = serde_json::from_str(&text).map_err(|e| parse_error(e.to_string()))?;

    for (i, person) in parsed.people.iter().enumerate() {
        if person.pose_keypoints_2d.len() != BODY25_LEN {
            return Err(parse_error(format!(
                "person {i}: pose_keypoints_2d has {} values, expected {BODY25_LEN}",
                person.pose_keypoints_2d.len()
            )));
        }
    }

    let mut frame = KeypointFrame::empty(frame_index);
    // max_by keeps the last maximum; iterate in reverse so ties go to the first person
    let selected = parsed
        .people
        .iter()
        .rev()
        .max_by(|a, b| a.total_confidence().total_cmp(&b.total_confidence()));
    if let Some(person) = selected {
        for joint in JointId::ALL {
            let base = joint.body25_index() * 3;
            let raw = &person.pose_keypoints_2d[base..base + 3];
            let kp = Keypoint::new(raw[0], raw[1], raw[2]);
            validate_keypoint(&kp).map_err(|m| parse_error(format!("{joint}: {m}")))?;
            frame.joints.insert(joint, kp);
        }
    }
    Ok(frame)
}

/// Writes one OpenPose-style JSON file per frame, named like OpenPose's own
/// output (`<stem>_<frame:012>_keypoints.json`). Untracked BODY_25 slots are
/// zero.
pub fn write_openpose_dir(frames: &[KeypointFrame], dir: &Path, stem: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for frame in frames {
        let mut flat = vec![0.0; BODY25_LEN];
        for (&joint, kp) in &frame.joints {
            let base = joint.body25_index() * 3;
            flat[base..base + 3].copy_from_slice(&[kp.x, kp.y, kp.confidence]);
        }
        let file = FrameFile {
            version: Some(1.3),
            people: vec![Person {
                pose_keypoints_2d: flat,
            }],
        };
        let path = dir.join(format!("{stem}_{:012}_keypoints.json", frame.frame_index));
        let json = serde_json::to_string(&file).expect("frame serializes");
        fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
