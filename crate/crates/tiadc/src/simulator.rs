//! Brute-force time-domain oracle for the analytic predictions.
//!
//! Samples exact continuous-time multitones through an N-way interleaved
//! ADC with a concrete mismatch set and measures the resulting single-sided
//! spectrum. Skews are applied as exact delays (no first-order model), so
//! comparing against the analytic skew prediction exposes the approximation
//! error itself.
//!
//! Captures are coherent and unwindowed. Tone phases for on-grid tones are
//! computed from exact integer cycle counts; evaluating cos(2*pi*f*k/f_s)
//! directly would lose ~2*pi*f*k/f_s * eps of phase at the end of a long
//! capture and bury the -250 dBFS recombination floor.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

use crate::analytic::SpurReport;
use crate::error::{Error, Result};
use crate::types::{AdcConfig, MismatchSet, Spectrum, SpurKind, ToneSpec};

/// Capture length and coherence bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaptureConfig {
    /// Number of samples M; must be a multiple of N so every sub-ADC is
    /// used equally often.
    pub num_samples: usize,
    /// Whether the tones were snapped to the coherent grid.
    pub coherent: bool,
}

impl CaptureConfig {
    pub fn new(num_samples: usize) -> Self {
        Self {
            num_samples,
            coherent: true,
        }
    }

    /// Default capture: 4096 samples per sub-ADC.
    pub fn default_for(config: &AdcConfig) -> Self {
        Self::new(4096 * config.interleave_factor)
    }

    fn validate(&self, config: &AdcConfig) -> Result<()> {
        if self.num_samples == 0 || !self.num_samples.is_multiple_of(config.interleave_factor) {
            return Err(Error::InvalidInput(format!(
                "capture length {} is not a positive multiple of N={}",
                self.num_samples, config.interleave_factor
            )));
        }
        Ok(())
    }
}

/// A tone frequency snapped onto the coherent grid J * f_s / M.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnappedTone {
    /// Snapped frequency in Hz.
    pub frequency: f64,
    /// Integer number of cycles J in the capture.
    pub cycles: u64,
    /// True when the tone (or one of its replicas) folds onto the
    /// k * f_s / (2N) grid, colliding with offset spurs, other replicas,
    /// DC, or Nyquist. Comparisons against per-line predictions are
    /// ambiguous on such bins.
    pub on_ambiguous_grid: bool,
}

/// Snap a requested frequency to the nearest bin of an M-sample capture.
pub fn snap_coherent(config: &AdcConfig, requested: f64, m: usize) -> Result<SnappedTone> {
    if m < 4 {
        return Err(Error::InvalidInput(format!("capture length {m} too short")));
    }
    if !(requested > 0.0 && requested < config.nyquist()) {
        return Err(Error::ToneOutOfBand {
            frequency: requested,
            nyquist: config.nyquist(),
        });
    }
    let max_j = (m - 1) / 2;
    let j = ((requested * m as f64 / config.sample_rate).round() as u64).clamp(1, max_j as u64);
    Ok(SnappedTone {
        frequency: j as f64 * config.sample_rate / m as f64,
        cycles: j,
        on_ambiguous_grid: (2 * config.interleave_factor as u64 * j).is_multiple_of(m as u64),
    })
}

/// Snap like [`snap_coherent`], then walk to the nearest bin that is not on
/// the ambiguous grid. Fails when every bin collides (M = 2N).
pub fn snap_coherent_clear(config: &AdcConfig, requested: f64, m: usize) -> Result<SnappedTone> {
    let base = snap_coherent(config, requested, m)?;
    if !base.on_ambiguous_grid {
        return Ok(base);
    }
    let max_j = ((m - 1) / 2) as i64;
    for step in 1..=max_j {
        for j in [base.cycles as i64 - step, base.cycles as i64 + step] {
            if j < 1 || j > max_j {
                continue;
            }
            if !(2 * config.interleave_factor as u64 * j as u64).is_multiple_of(m as u64) {
                return Ok(SnappedTone {
                    frequency: j as f64 * config.sample_rate / m as f64,
                    cycles: j as u64,
                    on_ambiguous_grid: false,
                });
            }
        }
    }
    Err(Error::InvalidInput(format!(
        "no collision-free coherent bin exists for M={m}, N={}",
        config.interleave_factor
    )))
}

/// Per-tone phase evaluator.
enum TonePhase {
    /// On-grid tone: phase in cycles at sample i is (j * i mod m) / m, exact
    /// in integer arithmetic.
    Exact { j: u64, m: u64 },
    /// Off-grid tone: plain floating-point cycle count.
    Float { cycles_per_sample: f64 },
}

impl TonePhase {
    fn for_tone(tone: &ToneSpec, config: &AdcConfig, m: usize) -> Self {
        let pos = tone.frequency * m as f64 / config.sample_rate;
        if (pos - pos.round()).abs() < 1e-9 && pos.round() >= 0.0 {
            TonePhase::Exact {
                j: pos.round() as u64,
                m: m as u64,
            }
        } else {
            TonePhase::Float {
                cycles_per_sample: tone.frequency / config.sample_rate,
            }
        }
    }

    /// Signal phase in cycles at sample index i, before skew correction.
    fn cycles(&self, i: usize) -> f64 {
        match self {
            TonePhase::Exact { j, m } => ((j * i as u64) % m) as f64 / *m as f64,
            TonePhase::Float { cycles_per_sample } => (cycles_per_sample * i as f64).fract(),
        }
    }
}

/// Sample the interleaved ADC output:
/// y[i] = (1 + g[i%N]) * x(i/f_s - s[i%N]) + o[i%N],
/// with x the exact multitone evaluated at the skewed instant.
pub fn sample(
    config: &AdcConfig,
    mismatch: &MismatchSet,
    tones: &[ToneSpec],
    cap: &CaptureConfig,
) -> Result<Vec<f64>> {
    cap.validate(config)?;
    mismatch.validate(config)?;
    for tone in tones {
        tone.validate(config)?;
    }
    let n = config.interleave_factor;
    let m = cap.num_samples;
    let phases: Vec<TonePhase> = tones
        .iter()
        .map(|t| TonePhase::for_tone(t, config, m))
        .collect();
    // Phase retardation from each sub-ADC's skew, in cycles, per tone.
    let skew_cycles: Vec<Vec<f64>> = tones
        .iter()
        .map(|t| mismatch.skews.iter().map(|&s| t.frequency * s).collect())
        .collect();

    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let sub = i % n;
        let mut x = 0.0;
        for ((tone, phase), skew) in tones.iter().zip(&phases).zip(&skew_cycles) {
            let cycles = phase.cycles(i) - skew[sub];
            x += tone.amplitude * (TAU * cycles + tone.phase).cos();
        }
        out.push((1.0 + mismatch.gains[sub]) * x + mismatch.offsets[sub]);
    }
    Ok(out)
}

/// Single-sided, dBFS-calibrated periodogram of a coherent capture.
///
/// A full-scale coherent sine measures exactly 1.0 (0 dBFS) in its bin;
/// interior bins carry 4|y_dft[k]|^2 (conjugate fold times full-scale
/// reference), DC and Nyquist carry 2|y_dft[k]|^2.
pub fn measure_spectrum(samples: &[f64], config: &AdcConfig) -> Spectrum {
    let m = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let half = m / 2;
    let powers = buf[..=half]
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let mag_sqr = (v * scale).norm_sqr();
            let edge = k == 0 || (m.is_multiple_of(2) && k == half);
            if edge {
                2.0 * mag_sqr
            } else {
                4.0 * mag_sqr
            }
        })
        .collect();
    Spectrum {
        sample_rate: config.sample_rate,
        num_samples: m,
        powers,
    }
}

/// Max non-signal bin power (dBFS) of a zero-mismatch capture. Ideal
/// recombination means this is floating-point residue only.
pub fn recombination_residual(config: &AdcConfig, tones: &[ToneSpec], m: usize) -> Result<f64> {
    let cap = CaptureConfig::new(m);
    let samples = sample(config, &MismatchSet::zero(config.interleave_factor), tones, &cap)?;
    let spectrum = measure_spectrum(&samples, config);
    let mut signal_bins = Vec::with_capacity(tones.len());
    for tone in tones {
        signal_bins.push(spectrum.bin_of(tone.frequency)?);
    }
    let residual = spectrum
        .powers
        .iter()
        .enumerate()
        .filter(|(k, _)| !signal_bins.contains(k))
        .map(|(_, &p)| p)
        .fold(0.0f64, f64::max);
    Ok(10.0 * residual.max(1e-40).log10())
}

/// One predicted line paired with its measured power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpurComparison {
    pub frequency: f64,
    pub predicted_db: f64,
    pub measured_db: f64,
    pub kind: SpurKind,
}

impl SpurComparison {
    pub fn delta_db(&self) -> f64 {
        self.measured_db - self.predicted_db
    }
}

/// Pair analytic predictions with measured bin powers.
///
/// Carrier-referenced predictions are compared in dBc against the measured
/// power of their originating tone's bin, with the report's known average
/// gain error backed out so the reference is the input tone itself. Errors
/// when a predicted frequency is off the bin grid (incoherent setup).
pub fn extract_spurs(spectrum: &Spectrum, predicted: &SpurReport) -> Result<Vec<SpurComparison>> {
    let carrier_scale = predicted.carrier_scale.unwrap_or(1.0);
    let mut out = Vec::with_capacity(predicted.spurs.len());
    for spur in &predicted.spurs {
        let power = spectrum.power_at(spur.frequency)?;
        let measured_db = match spur.tone_frequency {
            None => 10.0 * power.log10(),
            Some(carrier) => {
                let carrier_power = spectrum.power_at(carrier)? / carrier_scale;
                10.0 * (power / carrier_power).log10()
            }
        };
        out.push(SpurComparison {
            frequency: spur.frequency,
            predicted_db: spur.power_db(),
            measured_db,
            kind: spur.kind,
        });
    }
    Ok(out)
}
