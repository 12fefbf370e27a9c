use num_complex::Complex64;
use rustfft::FftPlanner;

use super::check_finite;
use crate::error::{Error, Result};

/// Inputs at least this long go through the FFT path.
const FFT_CUTOVER: usize = 64;

/// Full linear convolution of two equal-length series:
/// out[k] = Σ_{l=0}^{k} a[l]·b[k−l], length 2N−1.
pub fn linear_convolution(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    check_pair(a, b)?;
    if a.len() >= FFT_CUTOVER {
        Ok(fft_convolve(a, b))
    } else {
        Ok(direct_convolve(a, b))
    }
}

/// Direct O(N²) evaluation of [`linear_convolution`].
pub fn linear_convolution_direct(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    check_pair(a, b)?;
    Ok(direct_convolve(a, b))
}

/// Zero-padded FFT evaluation of [`linear_convolution`].
pub fn linear_convolution_fft(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    check_pair(a, b)?;
    Ok(fft_convolve(a, b))
}

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "convolution inputs differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::InvalidInput("convolution of empty series".into()));
    }
    check_finite(a, "first convolution input")?;
    check_finite(b, "second convolution input")
}

fn direct_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn fft_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let pad = |s: &[f64]| {
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for (dst, &v) in buf.iter_mut().zip(s) {
            dst.re = v;
        }
        buf
    };
    let mut fa = pad(a);
    let mut fb = pad(b);
    forward.process(&mut fa);
    forward.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inverse.process(&mut fa);
    let scale = 1.0 / size as f64;
    fa[..out_len].iter().map(|z| z.re * scale).collect()
}
