#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use gaitsym::ingest::{write_keypoint_csv, write_openpose_dir, JointId, Keypoint, KeypointFrame};
use gaitsym::synth::{generate_gait, GaitParams};

pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line in-process.
pub fn cli(args: &[&str]) -> CliOutput {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gaitsym").chain(args.iter().copied());
    let code = gaitsym::cli::run(argv, &mut out, &mut err);
    CliOutput {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

pub fn write_csv(path: &Path, frames: &[KeypointFrame]) {
    let mut buf = Vec::new();
    write_keypoint_csv(frames, &mut buf).unwrap();
    fs::write(path, buf).unwrap();
}

pub fn synth_csv(dir: &Path, name: &str, params: &GaitParams) -> PathBuf {
    let path = dir.join(name);
    write_csv(&path, &generate_gait(params).unwrap());
    path
}

pub fn synth_openpose(dir: &Path, name: &str, params: &GaitParams) -> PathBuf {
    let path = dir.join(name);
    write_openpose_dir(&generate_gait(params).unwrap(), &path, "walk").unwrap();
    path
}

/// Frames whose four tracked joints follow the given (x, y) series; all
/// other joints sit still at full confidence.
pub fn frames_from_tracks(tracks: &[(JointId, Vec<f64>, Vec<f64>)]) -> Vec<KeypointFrame> {
    let n = tracks[0].1.len();
    (0..n)
        .map(|i| {
            let mut frame = KeypointFrame::empty(i as u64);
            for joint in JointId::ALL {
                frame.joints.insert(joint, Keypoint::new(100.0, 100.0, 1.0));
            }
            for (joint, x, y) in tracks {
                frame.joints.insert(*joint, Keypoint::new(x[i], y[i], 1.0));
            }
            frame
        })
        .collect()
}

/// Reads one summary.csv data row as a header→value map.
pub fn summary_row(path: &Path) -> std::collections::BTreeMap<String, String> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().clone();
    let row = reader.records().next().unwrap().unwrap();
    header
        .iter()
        .map(String::from)
        .zip(row.iter().map(String::from))
        .collect()
}

pub fn summary_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Full-precision dis for `case` from a summary.json document.
pub fn json_dis(doc: &serde_json::Value, case: &str) -> f64 {
    doc["dissimilarity"]["cases"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["case"] == case)
        .unwrap()["dis"]
        .as_f64()
        .unwrap()
}
