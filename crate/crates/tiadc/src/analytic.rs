//! Closed-form spur and replica prediction from the DFT of a mismatch
//! sequence.
//!
//! Offsets put input-independent spurs on the k*f_s/N grid with amplitudes
//! given by the offset-sequence DFT. Gain mismatch replicates each input
//! tone around the same grid, scaled by the gain-sequence DFT. Timing skew
//! does the same to the differentiated input (first-order model), so skew
//! replica power grows 6 dB per octave of input frequency.
//!
//! All powers are linear: dBFS-referenced for offset spurs, dBc-referenced
//! (per originating tone) for replicas. Lines below -300 dB are treated as
//! numerically zero and omitted.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::dft::dft;
use crate::error::{Error, Result};
use crate::types::{AdcConfig, PowerReference, SpurKind, SpurPrediction, ToneSpec};

/// Powers at or below this are floating-point residue, not predictions.
const ZERO_POWER_FLOOR: f64 = 1e-30;

/// Relative frequency tolerance for deciding two replicas share a bin.
const FREQ_MERGE_TOL: f64 = 1e-9;

/// Prediction result for one mismatch kind over one device instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SpurReport {
    /// Predicted lines sorted by frequency, zero-power lines omitted.
    pub spurs: Vec<SpurPrediction>,
    /// Highest-power line, if any.
    pub worst: Option<SpurPrediction>,
    /// Sum of all predicted line powers (linear, carrier excluded).
    pub total_power: f64,
    /// Carrier power scaling |1 + g_dft[0]|^2 from the average gain error
    /// (gain predictions only; not a spur).
    pub carrier_scale: Option<f64>,
    /// 2*pi*f_max*max|s_n| for skew predictions; the first-order model is
    /// trustworthy when this is small (warn above 0.01).
    pub first_order_product: Option<f64>,
}

impl SpurReport {
    fn from_spurs(mut spurs: Vec<SpurPrediction>) -> Self {
        spurs.sort_by(|a, b| {
            a.frequency
                .partial_cmp(&b.frequency)
                .unwrap()
                .then(a.tone_frequency.partial_cmp(&b.tone_frequency).unwrap())
        });
        let worst = spurs
            .iter()
            .copied()
            .max_by(|a, b| a.power.partial_cmp(&b.power).unwrap());
        let total_power = spurs.iter().map(|s| s.power).sum();
        Self {
            spurs,
            worst,
            total_power,
            carrier_scale: None,
            first_order_product: None,
        }
    }
}

/// Alias of `f` in the first Nyquist zone [0, f_s/2].
pub fn fold_frequency(f: f64, sample_rate: f64) -> f64 {
    ((f + 0.5 * sample_rate).rem_euclid(sample_rate) - 0.5 * sample_rate).abs()
}

fn check_len(seq: &[f64], config: &AdcConfig) -> Result<()> {
    if seq.len() != config.interleave_factor {
        return Err(Error::LengthMismatch {
            expected: config.interleave_factor,
            got: seq.len(),
        });
    }
    if seq.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite mismatch entry".into()));
    }
    Ok(())
}

/// Offset-induced spurs at k*f_s/N, k = 0..=floor(N/2).
///
/// Single-sided dBFS power is 4|o_dft[k]|^2 for interior bins and
/// 2|o_dft[k]|^2 at DC and (even N) Nyquist: one factor of two folds the
/// conjugate bin pair, the other rescales to the full-scale-sine reference.
pub fn predict_offset_spurs(offsets: &[f64], config: &AdcConfig) -> Result<SpurReport> {
    check_len(offsets, config)?;
    let n = config.interleave_factor;
    let spectrum = dft(offsets)?;
    let mut spurs = Vec::new();
    for (k, value) in spectrum.iter().enumerate().take(n / 2 + 1) {
        let edge = k == 0 || (n.is_multiple_of(2) && k == n / 2);
        let power = if edge { 2.0 } else { 4.0 } * value.norm_sqr();
        if power > ZERO_POWER_FLOOR {
            spurs.push(SpurPrediction {
                frequency: k as f64 * config.spur_spacing(),
                power,
                reference: PowerReference::FullScale,
                kind: SpurKind::Offset,
                bin_index: k,
                tone_frequency: None,
            });
        }
    }
    Ok(SpurReport::from_spurs(spurs))
}

/// Gain-mismatch replicas of each tone at k*f_s/N +- f_tone (folded),
/// k = 1..N-1, each with dBc power |g_dft[k]|^2 relative to its tone.
///
/// The k = 0 term is the average gain error; it scales the carrier and is
/// reported as `carrier_scale` rather than as a spur.
pub fn predict_gain_replicas(
    gains: &[f64],
    tones: &[ToneSpec],
    config: &AdcConfig,
) -> Result<SpurReport> {
    check_len(gains, config)?;
    for tone in tones {
        tone.validate(config)?;
    }
    let spectrum = dft(gains)?;
    let carrier_scale = (Complex64::new(1.0, 0.0) + spectrum[0]).norm_sqr();

    let mut spurs = Vec::new();
    for tone in tones {
        let components =
            replica_components(&spectrum, tone, config, SpurKind::GainReplica, |amp, _, _| amp);
        spurs.extend(fold_and_merge(components, config, tone.frequency));
    }
    let mut report = SpurReport::from_spurs(spurs);
    report.carrier_scale = Some(carrier_scale);
    Ok(report)
}

/// First-order skew replicas: same grid as gain, dBc power
/// (2*pi*f_tone)^2 |s_dft[k]|^2. The exact-delay behavior lives in the
/// simulator so the approximation error stays observable.
pub fn predict_skew_replicas(
    skews: &[f64],
    tones: &[ToneSpec],
    config: &AdcConfig,
) -> Result<SpurReport> {
    check_len(skews, config)?;
    for tone in tones {
        tone.validate(config)?;
    }
    let spectrum = dft(skews)?;

    let mut spurs = Vec::new();
    for tone in tones {
        // Component at k*f_s/N + sign*f is -sign * 2*pi*j*f * s_dft[k],
        // carrying the differentiation of the input.
        let components =
            replica_components(&spectrum, tone, config, SpurKind::SkewReplica, |amp, sign, f| {
                -sign * Complex64::new(0.0, TAU * f) * amp
            });
        spurs.extend(fold_and_merge(components, config, tone.frequency));
    }
    let mut report = SpurReport::from_spurs(spurs);
    report.first_order_product = Some(first_order_product(skews, tones));
    Ok(report)
}

/// First-order replicas with gain and skew present at once. Both effects
/// shift the same output frequencies, so a shared line must be predicted
/// from the complex sum of the two contributions; only the second-order
/// gain*skew cross products stay unmodeled. Each line is labeled by its
/// dominant contributor.
pub fn predict_combined_replicas(
    gains: &[f64],
    skews: &[f64],
    tones: &[ToneSpec],
    config: &AdcConfig,
) -> Result<SpurReport> {
    check_len(gains, config)?;
    check_len(skews, config)?;
    for tone in tones {
        tone.validate(config)?;
    }
    let gain_dft = dft(gains)?;
    let skew_dft = dft(skews)?;

    let mut spurs = Vec::new();
    for tone in tones {
        let mut components = replica_components(
            &gain_dft,
            tone,
            config,
            SpurKind::GainReplica,
            |amp, _, _| amp,
        );
        let skew_part = replica_components(
            &skew_dft,
            tone,
            config,
            SpurKind::SkewReplica,
            |amp, sign, f| -sign * Complex64::new(0.0, TAU * f) * amp,
        );
        // Same (k, sideband) enumeration order on both sides.
        for (gain_comp, skew_comp) in components.iter_mut().zip(skew_part) {
            debug_assert_eq!(gain_comp.bin_index, skew_comp.bin_index);
            if skew_comp.amplitude.norm_sqr() > gain_comp.amplitude.norm_sqr() {
                gain_comp.kind = SpurKind::SkewReplica;
            }
            gain_comp.amplitude += skew_comp.amplitude;
        }
        spurs.extend(fold_and_merge(components, config, tone.frequency));
    }
    let mut report = SpurReport::from_spurs(spurs);
    report.carrier_scale = Some((Complex64::new(1.0, 0.0) + gain_dft[0]).norm_sqr());
    report.first_order_product = Some(first_order_product(skews, tones));
    Ok(report)
}

fn first_order_product(skews: &[f64], tones: &[ToneSpec]) -> f64 {
    let f_max = tones.iter().fold(0.0f64, |m, t| m.max(t.frequency));
    let s_max = skews.iter().fold(0.0f64, |m, &s| m.max(s.abs()));
    TAU * f_max * s_max
}

/// One complex line of a replica pattern before folding.
struct Component {
    /// Frequency reduced mod f_s into [0, f_s).
    frequency: f64,
    /// Amplitude relative to the tone's phasor amplitude A/2.
    amplitude: Complex64,
    bin_index: usize,
    kind: SpurKind,
}

/// Enumerate both sidebands k*f_s/N +- f_tone for k = 1..N-1. `shape` maps
/// the raw DFT entry to the component amplitude for the given sideband.
fn replica_components(
    spectrum: &[Complex64],
    tone: &ToneSpec,
    config: &AdcConfig,
    kind: SpurKind,
    shape: impl Fn(Complex64, f64, f64) -> Complex64,
) -> Vec<Component> {
    let fs = config.sample_rate;
    let spacing = config.spur_spacing();
    let mut out = Vec::with_capacity(2 * (spectrum.len() - 1));
    for (k, &entry) in spectrum.iter().enumerate().skip(1) {
        for sign in [1.0, -1.0] {
            let phase = Complex64::from_polar(1.0, sign * tone.phase);
            out.push(Component {
                frequency: (k as f64 * spacing + sign * tone.frequency).rem_euclid(fs),
                amplitude: shape(entry, sign, tone.frequency) * phase,
                bin_index: k,
                kind,
            });
        }
    }
    out
}

/// Group components landing on the same single-sided frequency, complex-sum
/// each group, and convert to per-line dBc power.
///
/// Components in the upper half of [0, f_s) are the Hermitian images of
/// lower-half groups and are dropped; at DC and Nyquist both images of a
/// line coincide, so the (real) group sum covers the whole line and the
/// single-sided power is |sum|^2 / 2.
fn fold_and_merge(
    mut components: Vec<Component>,
    config: &AdcConfig,
    tone_frequency: f64,
) -> Vec<SpurPrediction> {
    let n = config.interleave_factor;
    let fs = config.sample_rate;
    let half = 0.5 * fs;
    let tol = fs * FREQ_MERGE_TOL;

    // Snap near-DC/near-Nyquist/near-fs values onto the exact edge so the
    // grouping below sees them as equal.
    for c in &mut components {
        if c.frequency < tol || (fs - c.frequency) < tol {
            c.frequency = 0.0;
        } else if (c.frequency - half).abs() < tol {
            c.frequency = half;
        }
    }
    components.retain(|c| c.frequency <= half + tol);
    components.sort_by(|a, b| a.frequency.partial_cmp(&b.frequency).unwrap());

    let mut out = Vec::new();
    let mut i = 0;
    while i < components.len() {
        let f0 = components[i].frequency;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut dominant = (0.0f64, components[i].bin_index, components[i].kind);
        let mut j = i;
        while j < components.len() && components[j].frequency - f0 <= tol {
            let c = &components[j];
            sum += c.amplitude;
            let mag = c.amplitude.norm_sqr();
            if mag > dominant.0 {
                dominant = (mag, c.bin_index, c.kind);
            }
            j += 1;
        }
        let edge = f0 == 0.0 || f0 == half;
        let power = if edge {
            // Both conjugate images are in the sum; single-sided dBc is
            // 2 * |y|^2 / carrier with y = (A/2) * sum, carrier = A^2.
            sum.norm_sqr() / 2.0
        } else {
            sum.norm_sqr()
        };
        if power > ZERO_POWER_FLOOR {
            // A line draws equally on bin k and its conjugate mirror N-k;
            // label it with the lower of the two.
            let bin = dominant.1.min(n - dominant.1);
            out.push(SpurPrediction {
                frequency: f0,
                power,
                reference: PowerReference::Carrier,
                kind: dominant.2,
                bin_index: bin,
                tone_frequency: Some(tone_frequency),
            });
        }
        i = j;
    }
    out
}
