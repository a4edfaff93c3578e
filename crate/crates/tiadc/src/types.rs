//! Shared domain types and unit conventions.
//!
//! The full-scale range is fixed to [-1, 1] everywhere; 0 dBFS is the power
//! of a full-scale sine wave. Powers are carried as linear ratios and only
//! converted to dB at presentation boundaries.

use crate::error::{Error, Result};

/// Interleaved ADC configuration: N sub-ADCs at `sample_rate / N` each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdcConfig {
    /// Interleave factor N (number of sub-ADCs), N >= 2.
    pub interleave_factor: usize,
    /// Aggregate sample rate f_s in Hz.
    pub sample_rate: f64,
    /// Resolution in bits, B >= 1.
    pub resolution_bits: u32,
}

impl AdcConfig {
    pub fn new(interleave_factor: usize, sample_rate: f64, resolution_bits: u32) -> Result<Self> {
        if interleave_factor < 2 {
            return Err(Error::InvalidInput(format!(
                "interleave factor must be >= 2, got {interleave_factor}"
            )));
        }
        if sample_rate <= 0.0 || !sample_rate.is_finite() {
            return Err(Error::InvalidInput(format!(
                "sample rate must be positive and finite, got {sample_rate}"
            )));
        }
        if resolution_bits < 1 {
            return Err(Error::InvalidInput("resolution must be >= 1 bit".into()));
        }
        Ok(Self {
            interleave_factor,
            sample_rate,
            resolution_bits,
        })
    }

    /// Least-significant-bit step on the [-1, 1] range: 2^(1-B).
    pub fn lsb(&self) -> f64 {
        2f64.powi(1 - self.resolution_bits as i32)
    }

    /// Nyquist frequency f_s / 2.
    pub fn nyquist(&self) -> f64 {
        self.sample_rate / 2.0
    }

    /// Spur grid spacing f_s / N.
    pub fn spur_spacing(&self) -> f64 {
        self.sample_rate / self.interleave_factor as f64
    }
}

/// Which sub-ADC non-ideality a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MismatchKind {
    Offset,
    Gain,
    Skew,
}

impl MismatchKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MismatchKind::Offset => "offset",
            MismatchKind::Gain => "gain",
            MismatchKind::Skew => "skew",
        }
    }
}

/// One concrete device instance: per-sub-ADC offsets, gains, and skews.
///
/// Offsets are in full-scale units, gains are relative (0.01 = 1 %), skews
/// are in seconds. All three sequences have length N.
#[derive(Debug, Clone, PartialEq)]
pub struct MismatchSet {
    pub offsets: Vec<f64>,
    pub gains: Vec<f64>,
    pub skews: Vec<f64>,
}

impl MismatchSet {
    /// An ideal device: all mismatches zero.
    pub fn zero(n: usize) -> Self {
        Self {
            offsets: vec![0.0; n],
            gains: vec![0.0; n],
            skews: vec![0.0; n],
        }
    }

    pub fn with_offsets(n: usize, offsets: Vec<f64>) -> Self {
        Self {
            offsets,
            ..Self::zero(n)
        }
    }

    pub fn with_gains(n: usize, gains: Vec<f64>) -> Self {
        Self {
            gains,
            ..Self::zero(n)
        }
    }

    pub fn with_skews(n: usize, skews: Vec<f64>) -> Self {
        Self {
            skews,
            ..Self::zero(n)
        }
    }

    pub fn validate(&self, config: &AdcConfig) -> Result<()> {
        let n = config.interleave_factor;
        for (name, seq) in [
            ("offsets", &self.offsets),
            ("gains", &self.gains),
            ("skews", &self.skews),
        ] {
            if seq.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: seq.len(),
                });
            }
            if seq.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite entry in {name}")));
            }
        }
        if self.gains.iter().any(|g| g.abs() >= 1.0) {
            return Err(Error::InvalidInput(
                "relative gain mismatch must satisfy |g| < 1".into(),
            ));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.offsets.iter().all(|&v| v == 0.0)
            && self.gains.iter().all(|&v| v == 0.0)
            && self.skews.iter().all(|&v| v == 0.0)
    }
}

/// A single sinusoidal input tone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneSpec {
    /// Frequency in Hz, inside the first Nyquist zone.
    pub frequency: f64,
    /// Amplitude in full-scale units, in (0, 1].
    pub amplitude: f64,
    /// Phase in radians.
    pub phase: f64,
}

impl ToneSpec {
    pub fn new(frequency: f64, amplitude: f64, phase: f64) -> Self {
        Self {
            frequency,
            amplitude,
            phase,
        }
    }

    /// Full-scale tone (amplitude 1, phase 0).
    pub fn full_scale(frequency: f64) -> Self {
        Self::new(frequency, 1.0, 0.0)
    }

    pub fn validate(&self, config: &AdcConfig) -> Result<()> {
        if !(self.frequency > 0.0 && self.frequency < config.nyquist()) {
            return Err(Error::ToneOutOfBand {
                frequency: self.frequency,
                nyquist: config.nyquist(),
            });
        }
        if !(self.amplitude > 0.0 && self.amplitude <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "tone amplitude must be in (0, 1], got {}",
                self.amplitude
            )));
        }
        if !self.phase.is_finite() {
            return Err(Error::InvalidInput("tone phase must be finite".into()));
        }
        Ok(())
    }

    /// Time-average power of the tone relative to a full-scale sine (0 dBFS).
    pub fn power_fs(&self) -> f64 {
        self.amplitude * self.amplitude
    }
}

/// Single-sided power spectrum of a coherent capture.
///
/// Bin powers are linear, relative to the power of a full-scale sine: a
/// full-scale coherent tone measures exactly 1.0 (0 dBFS) in its bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Sample rate of the capture in Hz.
    pub sample_rate: f64,
    /// Capture length M the spectrum was computed from.
    pub num_samples: usize,
    /// Bin powers for frequencies k * f_s / M, k = 0..=M/2.
    pub powers: Vec<f64>,
}

impl Spectrum {
    pub fn bin_width(&self) -> f64 {
        self.sample_rate / self.num_samples as f64
    }

    pub fn frequency(&self, bin: usize) -> f64 {
        bin as f64 * self.bin_width()
    }

    pub fn num_bins(&self) -> usize {
        self.powers.len()
    }

    /// Bin index of a frequency, if it lies on the grid (relative tol 1e-6 bins).
    pub fn bin_of(&self, frequency: f64) -> Result<usize> {
        let pos = frequency / self.bin_width();
        let bin = pos.round() as usize;
        if (pos - pos.round()).abs() > 1e-6 || bin >= self.powers.len() {
            return Err(Error::OffGrid {
                frequency,
                bin_width: self.bin_width(),
            });
        }
        Ok(bin)
    }

    pub fn power_at(&self, frequency: f64) -> Result<f64> {
        Ok(self.powers[self.bin_of(frequency)?])
    }

    /// Iterate (frequency_hz, linear_power) pairs.
    pub fn bins(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.powers
            .iter()
            .enumerate()
            .map(|(k, &p)| (self.frequency(k), p))
    }
}

/// Reference level a spur power is expressed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerReference {
    /// Relative to the power of a full-scale sine (dBFS).
    FullScale,
    /// Relative to the power of the originating input tone (dBc).
    Carrier,
}

/// What produced a predicted spectral line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpurKind {
    Offset,
    GainReplica,
    SkewReplica,
}

impl SpurKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpurKind::Offset => "offset",
            SpurKind::GainReplica => "gain-replica",
            SpurKind::SkewReplica => "skew-replica",
        }
    }
}

/// One predicted spur or replica.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpurPrediction {
    /// Frequency folded into [0, f_s/2].
    pub frequency: f64,
    /// Linear power relative to `reference` (use [`SpurPrediction::power_db`] to present).
    pub power: f64,
    pub reference: PowerReference,
    pub kind: SpurKind,
    /// Mismatch-DFT bin index k in [0, N-1] that produced the line.
    pub bin_index: usize,
    /// Originating tone frequency for replicas (None for offset spurs).
    pub tone_frequency: Option<f64>,
}

impl SpurPrediction {
    /// Power in dB (dBFS or dBc depending on `reference`).
    pub fn power_db(&self) -> f64 {
        10.0 * self.power.log10()
    }
}

/// Statistical model of one mismatch population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    /// Zero-mean Gaussian with standard deviation `sigma`.
    Gaussian { sigma: f64 },
    /// Uniform on [-step/2, step/2]; the residual after calibration with step `step`.
    Uniform { step: f64 },
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        let v = match self {
            DistributionSpec::Gaussian { sigma } => *sigma,
            DistributionSpec::Uniform { step } => *step,
        };
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::InvalidInput(format!(
                "distribution scale must be positive and finite, got {v}"
            )));
        }
        Ok(())
    }

    /// Standard deviation of the distribution (uniform: step / sqrt(12)).
    pub fn sigma(&self) -> f64 {
        match self {
            DistributionSpec::Gaussian { sigma } => *sigma,
            DistributionSpec::Uniform { step } => step / 12f64.sqrt(),
        }
    }
}

/// A yield question: how tight must one mismatch kind be so that the
/// strongest included spur stays below `target_power_db` with probability
/// `yield_target` across devices?
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YieldQuery {
    pub kind: MismatchKind,
    /// Target level in dB: dBFS for offset, dBc for gain/skew.
    pub target_power_db: f64,
    /// Required fraction of passing devices, in (0, 1).
    pub yield_target: f64,
    /// Count the DC spur (offset only; gain/skew have no DC contributor).
    pub include_dc: bool,
    /// Count the Nyquist-bin term where it exists (even N).
    pub include_nyquist: bool,
    /// Input tone frequency in Hz; required for skew queries.
    pub signal_frequency: Option<f64>,
}

impl YieldQuery {
    pub fn validate(&self) -> Result<()> {
        if !(self.yield_target > 0.0 && self.yield_target < 1.0) {
            return Err(Error::InvalidInput(format!(
                "yield must be in (0, 1), got {}",
                self.yield_target
            )));
        }
        if !self.target_power_db.is_finite() {
            return Err(Error::InvalidInput("target power must be finite".into()));
        }
        if self.kind == MismatchKind::Skew {
            match self.signal_frequency {
                Some(f) if f > 0.0 => {}
                _ => {
                    return Err(Error::InvalidInput(
                        "skew queries require a positive signal frequency".into(),
                    ))
                }
            }
        }
        Ok(())
    }
}

/// Linear power ratio to dB. Errors on non-positive input.
pub fn db(p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "dB conversion needs a positive power ratio, got {p}"
        )));
    }
    Ok(10.0 * p.log10())
}

/// dB back to a linear power ratio.
pub fn db_to_linear(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}
