//! Flat CSV keypoint format: one `frame,joint,x,y,confidence` row per
//! (frame, joint).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{validate_keypoint, JointId, Keypoint, KeypointFrame};
use crate::error::{Error, Result};

const HEADER: [&str; 5] = ["frame", "joint", "x", "y", "confidence"];

pub fn read_keypoint_csv(path: &Path) -> Result<Vec<KeypointFrame>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_keypoint_csv(file)
}

/// Parses the CSV format. Frames come back sorted and contiguous: any
/// (frame, joint) pair without a row, including whole frames absent between
/// the first and last index, is stored with confidence 0.
pub fn parse_keypoint_csv<R: Read>(input: R) -> Result<Vec<KeypointFrame>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let header = reader.headers().map_err(|e| parse_err("header", e))?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(Error::Parse {
            location: "header".into(),
            message: format!(
                "expected `{}`, found `{}`",
                HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut by_frame: BTreeMap<u64, BTreeMap<JointId, Keypoint>> = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        // data rows are numbered from 1, the header being row 0
        let row = i + 1;
        let location = format!("row {row}");
        let record = record.map_err(|e| parse_err(&location, e))?;
        if record.len() != HEADER.len() {
            return Err(Error::Parse {
                location,
                message: format!("expected {} fields, found {}", HEADER.len(), record.len()),
            });
        }
        let frame: u64 = record[0].parse().map_err(|_| field_err(row, "frame", &record[0]))?;
        let joint: JointId = record[1].parse().map_err(|m: String| Error::Parse {
            location: location.clone(),
            message: m,
        })?;
        let number = |idx: usize, name: &str| -> Result<f64> {
            record[idx].parse().map_err(|_| field_err(row, name, &record[idx]))
        };
        let kp = Keypoint::new(number(2, "x")?, number(3, "y")?, number(4, "confidence")?);
        validate_keypoint(&kp).map_err(|message| Error::Parse {
            location: location.clone(),
            message,
        })?;
        if by_frame.entry(frame).or_default().insert(joint, kp).is_some() {
            return Err(Error::Parse {
                location,
                message: format!("duplicate row for frame {frame}, joint {joint}"),
            });
        }
    }

    let (Some(&first), Some(&last)) = (by_frame.keys().next(), by_frame.keys().next_back()) else {
        return Err(Error::InsufficientData("CSV holds no frames".into()));
    };
    let frames: Vec<KeypointFrame> = (first..=last)
        .map(|index| {
            let mut frame = KeypointFrame::empty(index);
            if let Some(joints) = by_frame.remove(&index) {
                frame.joints.extend(joints);
            }
            frame
        })
        .collect();
    if frames.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 frames, got {}",
            frames.len()
        )));
    }
    Ok(frames)
}

/// Writes frames in the CSV format. Floats use the shortest representation
/// that parses back to the same value, so a round trip is lossless.
pub fn write_keypoint_csv<W: Write>(frames: &[KeypointFrame], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", HEADER.join(","))?;
    for frame in frames {
        for joint in JointId::ALL {
            let kp = frame.get(joint);
            writeln!(
                out,
                "{},{},{},{},{}",
                frame.frame_index, joint, kp.x, kp.y, kp.confidence
            )?;
        }
    }
    out.flush()
}

fn parse_err(location: &str, err: csv::Error) -> Error {
    Error::Parse {
        location: location.to_string(),
        message: err.to_string(),
    }
}

fn field_err(row: usize, field: &str, value: &str) -> Error {
    Error::Parse {
        location: format!("row {row}"),
        message: format!("non-numeric {field} value {value:?}"),
    }
}
