//! Normalized discrete Fourier transform.
//!
//! The forward transform carries the 1/N factor, so squared bin magnitudes
//! are average powers independent of the sequence length. Every power
//! expression in this crate relies on that placement. The inverse is the
//! plain conjugate sum without scaling, so `idft(dft(x)) == x`.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Forward DFT of a real sequence with 1/N normalization.
pub fn dft(input: &[f64]) -> Result<Vec<Complex64>> {
    let buf: Vec<Complex64> = input.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    dft_complex(&buf)
}

/// Forward DFT of a complex sequence with 1/N normalization.
pub fn dft_complex(input: &[Complex64]) -> Result<Vec<Complex64>> {
    if input.is_empty() {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    let mut buf = input.to_vec();
    FftPlanner::new()
        .plan_fft_forward(buf.len())
        .process(&mut buf);
    let scale = 1.0 / input.len() as f64;
    for v in &mut buf {
        *v *= scale;
    }
    Ok(buf)
}

/// Inverse of [`dft`]: unscaled conjugate-exponent sum.
pub fn idft(input: &[Complex64]) -> Result<Vec<Complex64>> {
    if input.is_empty() {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    let mut buf = input.to_vec();
    FftPlanner::new()
        .plan_fft_inverse(buf.len())
        .process(&mut buf);
    Ok(buf)
}

/// Reusable transform plan for hot loops (Monte-Carlo trials reuse one plan
/// per worker instead of re-planning every draw).
pub struct DftPlan {
    fft: Arc<dyn Fft<f64>>,
    scale: f64,
    scratch: Vec<Complex64>,
}

impl DftPlan {
    pub fn new(n: usize) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(n);
        let scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        Self {
            fft,
            scale: 1.0 / n as f64,
            scratch,
        }
    }

    pub fn len(&self) -> usize {
        self.fft.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fft.len() == 0
    }

    /// Forward transform of a real sequence into `out`, 1/N normalized.
    pub fn dft_real_into(&mut self, input: &[f64], out: &mut Vec<Complex64>) {
        debug_assert_eq!(input.len(), self.fft.len());
        out.clear();
        out.extend(input.iter().map(|&x| Complex64::new(x, 0.0)));
        self.fft.process_with_scratch(out, &mut self.scratch);
        for v in out.iter_mut() {
            *v *= self.scale;
        }
    }
}
