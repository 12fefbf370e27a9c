use super::JointTrajectory;
use crate::error::{Error, Result};

/// Samples at or below this confidence are treated as not recorded.
pub const DEFAULT_CONFIDENCE_THRESHOLD: f64 = 0.5;

pub const DEFAULT_SMOOTH_WINDOW: usize = 3;

/// Replaces every sample with confidence `<= threshold` by linear
/// interpolation between the nearest valid neighbours, x and y independently.
///
/// Gaps touching either end of the record have only one anchor and hold that
/// anchor's value. Valid samples are never modified, so the operation is
/// idempotent.
pub fn interpolate_gaps(traj: &JointTrajectory, threshold: f64) -> Result<JointTrajectory> {
    if !threshold.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "confidence threshold must be finite, got {threshold}"
        )));
    }
    let valid: Vec<usize> = traj
        .confidence
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > threshold)
        .map(|(i, _)| i)
        .collect();
    if valid.is_empty() {
        return Err(Error::AllOccluded(traj.joint));
    }

    let mut out = traj.clone();
    fill_series(&mut out.x, &valid);
    fill_series(&mut out.y, &valid);
    out.gap_mask = traj.confidence.iter().map(|&c| c <= threshold).collect();
    out.repaired = true;
    Ok(out)
}

fn fill_series(values: &mut [f64], valid: &[usize]) {
    let first = valid[0];
    let last = valid[valid.len() - 1];
    let (head, tail) = (values[first], values[last]);
    values[..first].fill(head);
    values[last + 1..].fill(tail);

    for pair in valid.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi - lo < 2 {
            continue;
        }
        let (v0, v1) = (values[lo], values[hi]);
        let span = (hi - lo) as f64;
        for (i, v) in values.iter_mut().enumerate().take(hi).skip(lo + 1) {
            *v = (v0 * (hi - i) as f64 + v1 * (i - lo) as f64) / span;
        }
    }
}

/// Centered moving average over x and y. The window shrinks at the record
/// boundaries instead of padding.
pub fn smooth_moving_average(traj: &JointTrajectory, window: usize) -> Result<JointTrajectory> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "smoothing window must be odd and positive, got {window}"
        )));
    }
    if window > traj.len() {
        return Err(Error::InvalidParameter(format!(
            "smoothing window {window} exceeds record length {}",
            traj.len()
        )));
    }
    let mut out = traj.clone();
    out.x = centered_mean(&traj.x, window);
    out.y = centered_mean(&traj.y, window);
    Ok(out)
}

fn centered_mean(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let n = values.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            let slice = &values[lo..=hi];
            slice.iter().sum::<f64>() / slice.len() as f64
        })
        .collect()
}
