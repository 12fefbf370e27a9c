use serde::Serialize;

use super::check_finite;
use crate::error::{Error, Result};

/// Variance below this fraction of the mean square counts as zero.
const REL_VARIANCE_FLOOR: f64 = 1e-24;

/// Lags inspected on each side of the autocorrelation peak when refining it.
const REFINE_RADIUS: usize = 2;

/// Pearson correlation with population (1/M) normalization.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "correlation inputs differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "correlation needs at least 2 samples, got {}",
            x.len()
        )));
    }
    check_finite(x, "x")?;
    check_finite(y, "y")?;
    let (dx, sxx) = deviations(x);
    let (dy, syy) = deviations(y);
    if degenerate(x, sxx) || degenerate(y, syy) {
        return Err(Error::DegenerateSignal("correlation input has zero variance".into()));
    }
    let sxy: f64 = dx.iter().zip(&dy).map(|(a, b)| a * b).sum();
    Ok(sxy / (sxx * syy).sqrt())
}

/// Normalized autocorrelation r[τ], τ = 0..M, using the biased estimator:
/// every lag's sum is divided by the lag-0 sum, so r[0] = 1.
pub fn autocorrelation(series: &[f64]) -> Result<Vec<f64>> {
    if series.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "autocorrelation needs at least 4 samples, got {}",
            series.len()
        )));
    }
    check_finite(series, "series")?;
    let (d, energy) = deviations(series);
    if degenerate(series, energy) {
        return Err(Error::DegenerateSignal("series has zero variance".into()));
    }
    let m = d.len();
    Ok((0..m)
        .map(|lag| d[..m - lag].iter().zip(&d[lag..]).map(|(a, b)| a * b).sum::<f64>() / energy)
        .collect())
}

/// Lag window and peak floor for [`estimate_cycle`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleSearch {
    pub min_lag: usize,
    /// Defaults to half the series length.
    pub max_lag: Option<usize>,
    pub min_peak: f64,
}

impl Default for CycleSearch {
    fn default() -> Self {
        CycleSearch {
            min_lag: 15,
            max_lag: None,
            min_peak: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleEstimate {
    pub period_frames: usize,
    /// Autocorrelation at `period_frames`.
    pub peak_acf: f64,
    pub search_range: (usize, usize),
}

/// Gait cycle length from the autocorrelation of a speed series.
///
/// The strongest local maximum of r[τ] within the lag window (ties go to the
/// smaller lag) selects the cycle. The biased estimator's triangular taper
/// pulls that maximum toward shorter lags by up to a frame for long cycles, so
/// the lag is then refined within ±2 by maximizing the correlation between
/// the series and its own lagged copy over their overlap.
pub fn estimate_cycle(series: &[f64], search: &CycleSearch) -> Result<CycleEstimate> {
    let r = autocorrelation(series)?;
    let m = series.len();
    let min_lag = search.min_lag;
    let max_lag = search.max_lag.unwrap_or(m / 2);
    if min_lag < 1 || max_lag <= min_lag {
        return Err(Error::InvalidParameter(format!(
            "cycle search needs 1 <= min_lag < max_lag, got min_lag {min_lag}, max_lag {max_lag} (series length {m})"
        )));
    }
    if max_lag + 2 > m {
        return Err(Error::InvalidParameter(format!(
            "max_lag {max_lag} too large for a series of length {m}"
        )));
    }
    if !search.min_peak.is_finite() {
        return Err(Error::InvalidParameter("min_peak must be finite".into()));
    }

    let mut best: Option<usize> = None;
    for lag in min_lag..=max_lag {
        let is_peak = r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1];
        if is_peak && r[lag] >= search.min_peak && best.is_none_or(|b| r[lag] > r[b]) {
            best = Some(lag);
        }
    }
    let Some(coarse) = best else {
        return Err(Error::NoPeriodicity(format!(
            "no autocorrelation peak >= {} between lags {min_lag} and {max_lag}",
            search.min_peak
        )));
    };

    let lo = coarse.saturating_sub(REFINE_RADIUS).max(min_lag);
    let hi = (coarse + REFINE_RADIUS).min(max_lag);
    let mut period = coarse;
    let mut best_overlap = overlap_correlation(series, coarse);
    for lag in lo..=hi {
        let c = overlap_correlation(series, lag);
        if c > best_overlap || (c == best_overlap && lag < period) {
            period = lag;
            best_overlap = c;
        }
    }

    Ok(CycleEstimate {
        period_frames: period,
        peak_acf: r[period],
        search_range: (min_lag, max_lag),
    })
}

fn overlap_correlation(series: &[f64], lag: usize) -> f64 {
    let m = series.len();
    pearson(&series[..m - lag], &series[lag..]).unwrap_or(f64::NEG_INFINITY)
}

fn deviations(x: &[f64]) -> (Vec<f64>, f64) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let d: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let ss = d.iter().map(|v| v * v).sum();
    (d, ss)
}

fn degenerate(x: &[f64], sum_sq_dev: f64) -> bool {
    let mean_sq: f64 = x.iter().map(|v| v * v).sum();
    sum_sq_dev <= REL_VARIANCE_FLOOR * mean_sq || sum_sq_dev == 0.0
}
