use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::check_finite;
use crate::error::{Error, Result};

/// Imaginary residue tolerated when synthesizing a real signal.
const IMAG_RESIDUE_TOL: f64 = 1e-6;
/// Relative tolerance on X(k) = conj(X(M-k)).
const SYMMETRY_REL_TOL: f64 = 1e-9;

/// DFT coefficients X(0..M) of a real series of length M.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCoefficients {
    pub coefficients: Vec<Complex64>,
    pub original_length: usize,
}

impl SpectrumCoefficients {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        let original_length = coefficients.len();
        SpectrumCoefficients {
            coefficients,
            original_length,
        }
    }

    /// Largest deviation from conjugate symmetry, relative to the largest
    /// coefficient magnitude.
    pub fn symmetry_error(&self) -> f64 {
        let c = &self.coefficients;
        let m = c.len();
        let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let worst = (0..m)
            .map(|k| (c[k] - c[(m - k) % m].conj()).norm())
            .fold(0.0, f64::max);
        worst / scale
    }
}

/// X(k) = Σₙ x(n)·exp(−j2πkn/M), k = 0..M.
pub fn dft(series: &[f64]) -> Result<SpectrumCoefficients> {
    if series.is_empty() {
        return Err(Error::InvalidInput("cannot transform an empty series".into()));
    }
    check_finite(series, "series")?;
    let mut buf: Vec<Complex64> = series.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    Ok(SpectrumCoefficients::new(buf))
}

/// x(n) = (1/M)·Σₖ X(k)·exp(+j2πkn/M) for a spectrum of a real signal.
pub fn idft(spec: &SpectrumCoefficients) -> Result<Vec<f64>> {
    let m = spec.coefficients.len();
    if m == 0 || m != spec.original_length {
        return Err(Error::InvalidSpectrum(format!(
            "{} coefficients for original length {}",
            m, spec.original_length
        )));
    }
    if spec.coefficients.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidSpectrum("non-finite coefficient".into()));
    }
    let asym = spec.symmetry_error();
    if asym > SYMMETRY_REL_TOL {
        return Err(Error::InvalidSpectrum(format!(
            "not conjugate-symmetric (relative deviation {asym:.3e})"
        )));
    }
    let mut buf = spec.coefficients.clone();
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let residue = buf.iter().map(|z| (z.im * scale).abs()).fold(0.0, f64::max);
    if residue > IMAG_RESIDUE_TOL {
        return Err(Error::InvalidSpectrum(format!(
            "imaginary residue {residue:.3e} after inversion"
        )));
    }
    Ok(buf.iter().map(|z| z.re * scale).collect())
}

/// Circularly delays `series` by `shift_frames` samples (negative advances),
/// fractional amounts included, by a linear phase ramp on the DFT.
///
/// Bin k and its mirror M−k get conjugate factors exp(∓j2πkd/M); the Nyquist
/// bin of an even-length series is scaled by cos(πd) so the output stays real.
pub fn fractional_circular_shift(series: &[f64], shift_frames: f64) -> Result<Vec<f64>> {
    let m = series.len();
    if m < 2 {
        return Err(Error::InvalidInput(format!("shift needs at least 2 samples, got {m}")));
    }
    if !shift_frames.is_finite() {
        return Err(Error::InvalidParameter(format!("shift {shift_frames} is not finite")));
    }
    let mut spec = dft(series)?;
    let mf = m as f64;
    // reduce the shift modulo M first; large d would otherwise lose phase precision
    let d = shift_frames.rem_euclid(mf);
    let coeffs = &mut spec.coefficients;
    for k in 1..m.div_ceil(2) {
        let phase = Complex64::from_polar(1.0, -2.0 * PI * k as f64 * d / mf);
        coeffs[k] *= phase;
        coeffs[m - k] *= phase.conj();
    }
    if m.is_multiple_of(2) {
        coeffs[m / 2] *= (PI * d).cos();
    }
    idft(&spec)
}
