//! Subcommand argument structs and implementations.
//!
//! Every numeric parameter can also come from a `--config file.json` (keys
//! are the long option names); explicit flags win. Curve-like results go to
//! CSV, scalar results to JSON.

use clap::{Args, ValueEnum};
use serde_json::json;
use std::path::PathBuf;

use tiadc::analytic::{
    predict_combined_replicas, predict_gain_replicas, predict_offset_spurs, predict_skew_replicas,
    SpurReport,
};
use tiadc::calibration::{invert_yield, sweep_step_vs_target};
use tiadc::montecarlo::{empirical_ccdf, gaussian_gap_db, BinSelector, RNG_ALGORITHM};
use tiadc::simulator::{measure_spectrum, sample, snap_coherent, CaptureConfig, SnappedTone};
use tiadc::statistics::{
    cdf_gain_circ, cdf_gain_real, cdf_offset_circ, cdf_offset_real, cdf_skew_circ, cdf_skew_real,
};
use tiadc::{
    db_to_linear, AdcConfig, DistributionSpec, MismatchKind, MismatchSet, ToneSpec, YieldQuery,
};

use crate::config::ConfigFile;
use crate::error::CliError;
use crate::mismatch_file::parse_mismatch_file;
use crate::output::{csv_document, emit, emit_json};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Offset,
    Gain,
    Skew,
}

impl KindArg {
    fn kind(self) -> MismatchKind {
        match self {
            KindArg::Offset => MismatchKind::Offset,
            KindArg::Gain => MismatchKind::Gain,
            KindArg::Skew => MismatchKind::Skew,
        }
    }

    fn from_name(name: &str) -> Result<Self, CliError> {
        match name {
            "offset" => Ok(KindArg::Offset),
            "gain" => Ok(KindArg::Gain),
            "skew" => Ok(KindArg::Skew),
            other => Err(CliError::Validation(format!(
                "unknown mismatch kind '{other}' (expected offset, gain, or skew)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

// ---------------------------------------------------------------------------
// Shared parsing helpers
// ---------------------------------------------------------------------------

fn parse_f64_list(what: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Validation(format!("invalid {what} entry '{s}'")))
        })
        .collect()
}

/// Tone syntax: FREQ[:AMP[:PHASE]] (Hz, full-scale units, radians).
fn parse_tone(text: &str) -> Result<ToneSpec, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.is_empty() || parts.len() > 3 {
        return Err(CliError::Validation(format!(
            "invalid tone '{text}' (expected FREQ[:AMP[:PHASE]])"
        )));
    }
    let field = |i: usize, name: &str, default: f64| -> Result<f64, CliError> {
        match parts.get(i) {
            None => Ok(default),
            Some(s) => s.parse::<f64>().map_err(|_| {
                CliError::Validation(format!("invalid tone {name} '{s}' in '{text}'"))
            }),
        }
    };
    Ok(ToneSpec::new(
        field(0, "frequency", 0.0)?,
        field(1, "amplitude", 1.0)?,
        field(2, "phase", 0.0)?,
    ))
}

fn parse_count(text: &str) -> Result<u64, CliError> {
    let value: f64 = text
        .parse()
        .map_err(|_| CliError::Validation(format!("invalid count '{text}'")))?;
    if !(1.0..=1e15).contains(&value) || value.fract() != 0.0 {
        return Err(CliError::Validation(format!(
            "count '{text}' must be a positive integer"
        )));
    }
    Ok(value as u64)
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Validation(format!("missing required parameter --{flag}")))
}

/// Include/exclude flag pairs shared by the statistics-facing commands.
#[derive(Debug, Args, Clone, Copy)]
pub struct InclusionFlags {
    /// Count the DC spur (offset default; gain/skew have no DC term)
    #[arg(long, overrides_with = "exclude_dc")]
    include_dc: bool,
    /// Leave the DC spur out of the combined CDF
    #[arg(long)]
    exclude_dc: bool,
    /// Count the Nyquist-bin term (default)
    #[arg(long, overrides_with = "exclude_nyquist")]
    include_nyquist: bool,
    /// Leave the Nyquist-bin term out of the combined CDF
    #[arg(long)]
    exclude_nyquist: bool,
}

impl InclusionFlags {
    /// Resolve flags against config-file values and per-kind defaults.
    fn resolve(&self, kind: MismatchKind, file: &ConfigFile) -> Result<(bool, bool), CliError> {
        let default_dc = kind == MismatchKind::Offset;
        let dc = if self.include_dc {
            true
        } else if self.exclude_dc {
            false
        } else {
            file.bool("include-dc")?.unwrap_or(default_dc)
        };
        let nyquist = if self.include_nyquist {
            true
        } else if self.exclude_nyquist {
            false
        } else {
            file.bool("include-nyquist")?.unwrap_or(true)
        };
        Ok((dc, nyquist))
    }
}

struct AdcParams {
    config: AdcConfig,
}

fn resolve_adc(
    n: Option<usize>,
    fs: Option<f64>,
    bits: Option<u32>,
    file: &ConfigFile,
) -> Result<AdcParams, CliError> {
    let n = require(n.or(file.usize("n")?), "n")?;
    let fs = fs.or(file.f64("fs")?).unwrap_or(1e9);
    let bits = bits.or(file.usize("bits")?.map(|b| b as u32)).unwrap_or(12);
    Ok(AdcParams {
        config: AdcConfig::new(n, fs, bits)?,
    })
}

fn resolve_tones(cli_tones: &[String], file: &ConfigFile) -> Result<Vec<ToneSpec>, CliError> {
    let specs: Vec<String> = if cli_tones.is_empty() {
        file.string_list("tone")?.unwrap_or_default()
    } else {
        cli_tones.to_vec()
    };
    specs.iter().map(|s| parse_tone(s)).collect()
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

/// Closed-form spur/replica table for one concrete device.
#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Mismatch kind to predict
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Interleave factor N
    #[arg(long)]
    n: Option<usize>,
    /// Sample rate f_s in Hz
    #[arg(long)]
    fs: Option<f64>,
    /// Resolution in bits
    #[arg(long)]
    bits: Option<u32>,
    /// Comma-separated per-sub-ADC offsets, full-scale units
    #[arg(long, allow_hyphen_values = true)]
    offsets: Option<String>,
    /// Comma-separated per-sub-ADC relative gain errors (0.01 = 1 %)
    #[arg(long, allow_hyphen_values = true)]
    gains: Option<String>,
    /// Comma-separated per-sub-ADC timing skews in seconds
    #[arg(long, allow_hyphen_values = true)]
    skews: Option<String>,
    /// Device file with `offsets/gains/skews` lines
    #[arg(long)]
    mismatch_file: Option<PathBuf>,
    /// Input tone FREQ[:AMP[:PHASE]]; repeatable (gain/skew need one)
    #[arg(long)]
    tone: Vec<String>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the table here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON file of defaults for the flags above
    #[arg(long)]
    config: Option<PathBuf>,
}

fn mismatch_for_kind(
    kind: MismatchKind,
    inline: Option<Vec<f64>>,
    file_path: Option<&PathBuf>,
    wrong_inline: bool,
) -> Result<Vec<f64>, CliError> {
    match (inline, file_path) {
        (Some(_), Some(_)) => Err(CliError::Validation(
            "give the mismatch inline or as --mismatch-file, not both".into(),
        )),
        (Some(values), None) => Ok(values),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let name = path.display().to_string();
            let parsed = parse_mismatch_file(&name, &text)?;
            let section = match kind {
                MismatchKind::Offset => parsed.offsets,
                MismatchKind::Gain => parsed.gains,
                MismatchKind::Skew => parsed.skews,
            };
            section.ok_or_else(|| {
                CliError::Validation(format!("{name}: no {}s line", kind.as_str()))
            })
        }
        (None, None) if wrong_inline => Err(CliError::Validation(format!(
            "--kind {} needs --{}s (or --mismatch-file)",
            kind.as_str(),
            kind.as_str()
        ))),
        (None, None) => Err(CliError::Validation(
            "no mismatch source: give an inline list or --mismatch-file".into(),
        )),
    }
}

pub fn run_predict(args: PredictArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.config.as_deref())?;
    let kind = match args.kind {
        Some(k) => k,
        None => KindArg::from_name(&require(file.string("kind")?, "kind")?)?,
    }
    .kind();
    let adc = resolve_adc(args.n, args.fs, args.bits, &file)?.config;
    let tones = resolve_tones(&args.tone, &file)?;

    let inline_for = |name: &str, cli: &Option<String>| -> Result<Option<Vec<f64>>, CliError> {
        match cli {
            Some(text) => parse_f64_list(name, text).map(Some),
            None => file.f64_list(name),
        }
    };
    let offsets = inline_for("offsets", &args.offsets)?;
    let gains = inline_for("gains", &args.gains)?;
    let skews = inline_for("skews", &args.skews)?;
    let (own, others_given) = match kind {
        MismatchKind::Offset => (offsets, gains.is_some() || skews.is_some()),
        MismatchKind::Gain => (gains, offsets.is_some() || skews.is_some()),
        MismatchKind::Skew => (skews, offsets.is_some() || gains.is_some()),
    };
    if others_given && own.is_none() {
        return Err(CliError::Validation(format!(
            "--kind {} predicts from --{}s; a different mismatch list was given",
            kind.as_str(),
            kind.as_str()
        )));
    }
    let sequence = mismatch_for_kind(kind, own, args.mismatch_file.as_ref(), false)?;

    if kind != MismatchKind::Offset && tones.is_empty() {
        return Err(CliError::Validation(format!(
            "{} replica prediction needs at least one --tone",
            kind.as_str()
        )));
    }
    let report = match kind {
        MismatchKind::Offset => predict_offset_spurs(&sequence, &adc)?,
        MismatchKind::Gain => predict_gain_replicas(&sequence, &tones, &adc)?,
        MismatchKind::Skew => predict_skew_replicas(&sequence, &tones, &adc)?,
    };
    if let Some(product) = report.first_order_product {
        if product > 0.01 {
            eprintln!(
                "warning: 2*pi*f_max*max|skew| = {product:.3e} exceeds 0.01; \
                 the first-order replica model degrades"
            );
        }
    }

    let metadata = json!({
        "tool": "tiadc", "version": VERSION, "command": "predict",
        "kind": kind.as_str(), "n": adc.interleave_factor, "fs_hz": adc.sample_rate,
    });
    match args.format.unwrap_or(FormatArg::Csv) {
        FormatArg::Csv => {
            let rows: Vec<String> = report
                .spurs
                .iter()
                .map(|s| {
                    format!(
                        "{},{:.6},{},{},{},{}",
                        s.frequency,
                        s.power_db(),
                        reference_name(s.reference),
                        s.kind.as_str(),
                        s.bin_index,
                        s.tone_frequency.map_or(String::new(), |f| f.to_string()),
                    )
                })
                .collect();
            let doc = csv_document(
                &metadata,
                "frequency_hz,power_db,reference,kind,bin_index,tone_hz",
                &rows,
            );
            emit(args.output.as_deref(), &doc)
        }
        FormatArg::Json => emit_json(args.output.as_deref(), &predict_json(&metadata, &report)),
    }
}

fn reference_name(reference: tiadc::PowerReference) -> &'static str {
    match reference {
        tiadc::PowerReference::FullScale => "dbfs",
        tiadc::PowerReference::Carrier => "dbc",
    }
}

fn predict_json(metadata: &serde_json::Value, report: &SpurReport) -> serde_json::Value {
    json!({
        "metadata": metadata,
        "spurs": report.spurs.iter().map(|s| json!({
            "frequency_hz": s.frequency,
            "power_db": s.power_db(),
            "reference": reference_name(s.reference),
            "kind": s.kind.as_str(),
            "bin_index": s.bin_index,
            "tone_hz": s.tone_frequency,
        })).collect::<Vec<_>>(),
        "worst_db": report.worst.map(|s| s.power_db()),
        "total_power_linear": report.total_power,
        "carrier_scale": report.carrier_scale,
        "first_order_product": report.first_order_product,
    })
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

/// Time-domain capture: spectrum export plus prediction-vs-measurement table.
#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    fs: Option<f64>,
    #[arg(long)]
    bits: Option<u32>,
    /// Comma-separated per-sub-ADC offsets, full-scale units
    #[arg(long, allow_hyphen_values = true)]
    offsets: Option<String>,
    /// Comma-separated relative gain errors
    #[arg(long, allow_hyphen_values = true)]
    gains: Option<String>,
    /// Comma-separated timing skews in seconds
    #[arg(long, allow_hyphen_values = true)]
    skews: Option<String>,
    /// Device file with `offsets/gains/skews` lines
    #[arg(long)]
    mismatch_file: Option<PathBuf>,
    /// Draw a mismatch set: KIND:gaussian:SIGMA or KIND:uniform:STEP
    /// (repeatable, one per kind)
    #[arg(long)]
    draw: Vec<String>,
    /// Seed for --draw
    #[arg(long)]
    seed: Option<u64>,
    /// Input tone FREQ[:AMP[:PHASE]]; repeatable. Snapped to the coherent grid.
    #[arg(long)]
    tone: Vec<String>,
    /// Capture length M (default 4096*N)
    #[arg(long)]
    samples: Option<usize>,
    /// Write the measured spectrum as CSV (frequency_hz, power_dbfs)
    #[arg(long)]
    spectrum_out: Option<PathBuf>,
    /// Write the prediction comparison as CSV
    #[arg(long)]
    pairs_out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_draw(text: &str) -> Result<(MismatchKind, DistributionSpec), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [kind, family, scale] = parts.as_slice() else {
        return Err(CliError::Validation(format!(
            "invalid draw '{text}' (expected KIND:gaussian:SIGMA or KIND:uniform:STEP)"
        )));
    };
    let kind = KindArg::from_name(kind)?.kind();
    let scale: f64 = scale
        .parse()
        .map_err(|_| CliError::Validation(format!("invalid draw scale in '{text}'")))?;
    let dist = match *family {
        "gaussian" => DistributionSpec::Gaussian { sigma: scale },
        "uniform" => DistributionSpec::Uniform { step: scale },
        other => {
            return Err(CliError::Validation(format!(
                "unknown distribution '{other}' in '{text}'"
            )))
        }
    };
    dist.validate()?;
    Ok((kind, dist))
}

fn resolve_mismatch_set(args: &SimulateArgs, file: &ConfigFile, n: usize) -> Result<(MismatchSet, u64), CliError> {
    let inline_for = |name: &str, cli: &Option<String>| -> Result<Option<Vec<f64>>, CliError> {
        match cli {
            Some(text) => parse_f64_list(name, text).map(Some),
            None => file.f64_list(name),
        }
    };
    let offsets = inline_for("offsets", &args.offsets)?;
    let gains = inline_for("gains", &args.gains)?;
    let skews = inline_for("skews", &args.skews)?;
    let draws: Vec<String> = if args.draw.is_empty() {
        file.string_list("draw")?.unwrap_or_default()
    } else {
        args.draw.clone()
    };
    let seed = args.seed.or(file.u64("seed")?).unwrap_or(1);

    let have_inline = offsets.is_some() || gains.is_some() || skews.is_some();
    let have_file = args.mismatch_file.is_some();
    let have_draw = !draws.is_empty();
    if [have_inline, have_file, have_draw].iter().filter(|&&b| b).count() != 1 {
        return Err(CliError::Validation(
            "give exactly one mismatch source: inline lists, --mismatch-file, or --draw".into(),
        ));
    }

    let mut set = MismatchSet::zero(n);
    if have_inline {
        if let Some(v) = offsets {
            set.offsets = v;
        }
        if let Some(v) = gains {
            set.gains = v;
        }
        if let Some(v) = skews {
            set.skews = v;
        }
    } else if have_file {
        let path = args.mismatch_file.as_ref().unwrap();
        let text = std::fs::read_to_string(path)?;
        let parsed = parse_mismatch_file(&path.display().to_string(), &text)?;
        if let Some(v) = parsed.offsets {
            set.offsets = v;
        }
        if let Some(v) = parsed.gains {
            set.gains = v;
        }
        if let Some(v) = parsed.skews {
            set.skews = v;
        }
    } else {
        for text in &draws {
            let (kind, dist) = parse_draw(text)?;
            // Sub-streams per kind keep the three draws independent.
            let stream_seed = seed.wrapping_add(match kind {
                MismatchKind::Offset => 0,
                MismatchKind::Gain => 1,
                MismatchKind::Skew => 2,
            });
            let values = tiadc::montecarlo::sample_mismatch(&dist, n, stream_seed);
            match kind {
                MismatchKind::Offset => set.offsets = values,
                MismatchKind::Gain => set.gains = values,
                MismatchKind::Skew => set.skews = values,
            }
        }
    }
    Ok((set, seed))
}

pub fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.config.as_deref())?;
    let adc = resolve_adc(args.n, args.fs, args.bits, &file)?.config;
    let n = adc.interleave_factor;
    let (mismatch, seed) = resolve_mismatch_set(&args, &file, n)?;
    mismatch.validate(&adc)?;
    let m = args
        .samples
        .or(file.usize("samples")?)
        .unwrap_or(4096 * n);

    // Snap tones onto the coherent grid; collisions with the spur/replica
    // grid are legal but make per-line comparisons ambiguous, so they count
    // as warnings.
    let requested = resolve_tones(&args.tone, &file)?;
    let mut tones = Vec::with_capacity(requested.len());
    let mut snap_info: Vec<(f64, SnappedTone)> = Vec::with_capacity(requested.len());
    let mut warnings = 0usize;
    for tone in &requested {
        let snapped = snap_coherent(&adc, tone.frequency, m)?;
        if snapped.on_ambiguous_grid {
            warnings += 1;
            eprintln!(
                "warning: tone snapped to {} Hz lands on the k*fs/(2N) grid; \
                 spur comparisons on shared bins are ambiguous",
                snapped.frequency
            );
        }
        snap_info.push((tone.frequency, snapped));
        tones.push(ToneSpec::new(snapped.frequency, tone.amplitude, tone.phase));
    }

    let capture = CaptureConfig::new(m);
    let samples = sample(&adc, &mismatch, &tones, &capture)?;
    let spectrum = measure_spectrum(&samples, &adc);

    // Offset spurs live on their own grid; gain and skew replicas share
    // frequencies, so when both are present the comparison uses their
    // coherent first-order superposition (the second-order gain*skew cross
    // products remain visible in the deltas).
    let mut pairs = Vec::new();
    let mut first_order_product = None;
    if mismatch.offsets.iter().any(|&v| v != 0.0) {
        let report = predict_offset_spurs(&mismatch.offsets, &adc)?;
        pairs.extend(tiadc::simulator::extract_spurs(&spectrum, &report)?);
    }
    let have_gains = mismatch.gains.iter().any(|&v| v != 0.0);
    let have_skews = mismatch.skews.iter().any(|&v| v != 0.0);
    let replica_report = match (have_gains, have_skews) {
        (true, true) => Some(predict_combined_replicas(
            &mismatch.gains,
            &mismatch.skews,
            &tones,
            &adc,
        )?),
        (true, false) => Some(predict_gain_replicas(&mismatch.gains, &tones, &adc)?),
        (false, true) => Some(predict_skew_replicas(&mismatch.skews, &tones, &adc)?),
        (false, false) => None,
    };
    if let Some(report) = replica_report {
        if have_skews {
            first_order_product = report.first_order_product;
            if report.first_order_product.unwrap_or(0.0) > 0.01 {
                warnings += 1;
                eprintln!(
                    "warning: 2*pi*f_max*max|skew| exceeds 0.01; first-order predictions degrade"
                );
            }
        }
        pairs.extend(tiadc::simulator::extract_spurs(&spectrum, &report)?);
    }

    // Ideal recombination check for a mismatch-free device.
    let residual_dbfs = if mismatch.is_zero() {
        let mut signal_bins = Vec::new();
        for tone in &tones {
            signal_bins.push(spectrum.bin_of(tone.frequency)?);
        }
        let max_residual = spectrum
            .powers
            .iter()
            .enumerate()
            .filter(|(k, _)| !signal_bins.contains(k))
            .map(|(_, &p)| p)
            .fold(0.0f64, f64::max);
        Some(10.0 * max_residual.max(1e-40).log10())
    } else {
        None
    };

    let metadata = json!({
        "tool": "tiadc", "version": VERSION, "command": "simulate",
        "n": n, "fs_hz": adc.sample_rate, "samples": m, "seed": seed,
    });

    if let Some(path) = &args.spectrum_out {
        let rows: Vec<String> = spectrum
            .bins()
            .map(|(f, p)| format!("{},{:.6}", f, 10.0 * p.max(1e-40).log10()))
            .collect();
        emit(Some(path), &csv_document(&metadata, "frequency_hz,power_dbfs", &rows))?;
    }
    let pair_rows: Vec<String> = pairs
        .iter()
        .map(|p| {
            format!(
                "{},{:.6},{:.6},{}",
                p.frequency,
                p.predicted_db,
                p.measured_db,
                p.kind.as_str()
            )
        })
        .collect();
    if let Some(path) = &args.pairs_out {
        emit(
            Some(path),
            &csv_document(&metadata, "frequency_hz,predicted_db,measured_db,kind", &pair_rows),
        )?;
    }

    match args.format.unwrap_or(FormatArg::Json) {
        FormatArg::Csv => emit(
            args.output.as_deref(),
            &csv_document(&metadata, "frequency_hz,predicted_db,measured_db,kind", &pair_rows),
        ),
        FormatArg::Json => {
            let max_abs_delta = pairs
                .iter()
                .map(|p| p.delta_db().abs())
                .fold(None::<f64>, |acc, d| Some(acc.map_or(d, |a| a.max(d))));
            let result = json!({
                "metadata": metadata,
                "tones": snap_info.iter().map(|(requested, s)| json!({
                    "requested_hz": requested,
                    "snapped_hz": s.frequency,
                    "cycles": s.cycles,
                    "on_ambiguous_grid": s.on_ambiguous_grid,
                })).collect::<Vec<_>>(),
                "warnings": warnings,
                "residual_dbfs": residual_dbfs,
                "first_order_product": first_order_product,
                "pairs": pairs.iter().map(|p| json!({
                    "frequency_hz": p.frequency,
                    "predicted_db": p.predicted_db,
                    "measured_db": p.measured_db,
                    "delta_db": p.delta_db(),
                    "kind": p.kind.as_str(),
                })).collect::<Vec<_>>(),
                "max_abs_delta_db": max_abs_delta,
            });
            emit_json(args.output.as_deref(), &result)
        }
    }
}

// ---------------------------------------------------------------------------
// cdf
// ---------------------------------------------------------------------------

/// Closed-form spur-power CDF table over a dB range.
#[derive(Debug, Args)]
pub struct CdfArgs {
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long)]
    n: Option<usize>,
    /// Mismatch standard deviation (FS units | relative | seconds)
    #[arg(long)]
    sigma: Option<f64>,
    /// Calibration step; sigma = step/sqrt(12)
    #[arg(long)]
    step: Option<f64>,
    /// Range start, dB (dBFS offset / dBc gain-skew)
    #[arg(long, allow_negative_numbers = true)]
    from: Option<f64>,
    /// Range end, dB
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    points: Option<usize>,
    /// Input tone frequency in Hz (skew only)
    #[arg(long)]
    fsig: Option<f64>,
    #[command(flatten)]
    inclusion: InclusionFlags,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run_cdf(args: CdfArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.config.as_deref())?;
    let kind = match args.kind {
        Some(k) => k,
        None => KindArg::from_name(&require(file.string("kind")?, "kind")?)?,
    }
    .kind();
    let n = require(args.n.or(file.usize("n")?), "n")?;
    let sigma = match (args.sigma.or(file.f64("sigma")?), args.step.or(file.f64("step")?)) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation("give --sigma or --step, not both".into()))
        }
        (Some(sigma), None) => sigma,
        (None, Some(step)) => step / 12f64.sqrt(),
        (None, None) => return Err(CliError::Validation("missing --sigma (or --step)".into())),
    };
    let from = args.from.or(file.f64("from")?).unwrap_or(-100.0);
    let to = args.to.or(file.f64("to")?).unwrap_or(-40.0);
    let points = args.points.or(file.usize("points")?).unwrap_or(121);
    if to.is_nan() || from.is_nan() || to <= from || points < 2 {
        return Err(CliError::Validation(
            "need --from < --to and at least two points".into(),
        ));
    }
    let fsig = args.fsig.or(file.f64("fsig")?);
    if kind == MismatchKind::Skew && fsig.is_none() {
        return Err(CliError::Validation("skew CDFs need --fsig".into()));
    }
    let (include_dc, include_nyquist) = args.inclusion.resolve(kind, &file)?;
    let inclusion = tiadc::statistics::SpurInclusion::default_for(kind, n)
        .with_dc(include_dc)
        .with_nyquist(include_nyquist);

    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let target_db = from + (to - from) * i as f64 / (points - 1) as f64;
        let p = db_to_linear(target_db);
        let (real, circ) = match kind {
            MismatchKind::Offset => (cdf_offset_real(p, sigma, n)?, cdf_offset_circ(p, sigma, n)?),
            MismatchKind::Gain => (cdf_gain_real(p, sigma, n)?, cdf_gain_circ(p, sigma, n)?),
            MismatchKind::Skew => {
                let f = fsig.unwrap();
                (cdf_skew_real(p, sigma, n, f)?, cdf_skew_circ(p, sigma, n, f)?)
            }
        };
        let combined = tiadc::statistics::combined_cdf(kind, p, sigma, n, &inclusion, fsig)?;
        rows.push(format!("{target_db},{real},{circ},{combined}"));
    }
    let metadata = json!({
        "tool": "tiadc", "version": VERSION, "command": "cdf",
        "kind": kind.as_str(), "n": n, "sigma": sigma, "fsig_hz": fsig,
        "include_dc": include_dc, "include_nyquist": include_nyquist,
    });
    emit(
        args.output.as_deref(),
        &csv_document(&metadata, "target_db,cdf_real,cdf_circ,cdf_combined", &rows),
    )
}

// ---------------------------------------------------------------------------
// ccdf-compare
// ---------------------------------------------------------------------------

/// Empirical uniform-mismatch bin-power CCDF against the Gaussian model.
#[derive(Debug, Args)]
pub struct CcdfArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Monte-Carlo trials (e.g. 1e7)
    #[arg(long)]
    trials: Option<String>,
    /// Tail probability at which to report the gap
    #[arg(long)]
    level: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Tabulate one circ bin instead of pooling all of them
    #[arg(long)]
    bin: Option<usize>,
    /// Write the CCDF table (threshold_db, ccdf_gaussian, ccdf_uniform) here
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run_ccdf_compare(args: CcdfArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.config.as_deref())?;
    let n = require(args.n.or(file.usize("n")?), "n")?;
    let trials = match args.trials {
        Some(text) => parse_count(&text)?,
        None => file.u64("trials")?.unwrap_or(10_000_000),
    };
    let level = args.level.or(file.f64("level")?).unwrap_or(1e-4);
    let seed = args.seed.or(file.u64("seed")?).unwrap_or(1);
    let selector = match args.bin.or(file.usize("bin")?) {
        Some(k) => BinSelector::Single(k),
        None => BinSelector::PooledCirc,
    };
    if (trials as f64) * level < 1000.0 {
        eprintln!(
            "warning: {trials} trials give fewer than 1000 expected tail \
             exceedances at level {level:e}; the gap estimate will be noisy"
        );
    }

    let gap_db = gaussian_gap_db(n, level, trials, seed)?;
    let t_gauss = (1.0 / level).ln();

    if args.output.is_some() {
        let dist = DistributionSpec::Uniform { step: 1.0 };
        let table = empirical_ccdf(&dist, n, selector, trials, seed)?;
        let metadata = json!({
            "tool": "tiadc", "version": VERSION, "command": "ccdf-compare",
            "n": n, "trials": trials, "seed": seed, "rng": RNG_ALGORITHM,
            "distribution": "uniform", "normalization": "unit bin variance",
        });
        let rows: Vec<String> = table
            .thresholds
            .iter()
            .zip(&table.probabilities)
            .map(|(&t, &p)| format!("{:.6},{:e},{}", 10.0 * t.log10(), (-t).exp(), p))
            .collect();
        emit(
            args.output.as_deref(),
            &csv_document(&metadata, "threshold_db,ccdf_gaussian,ccdf_uniform", &rows),
        )?;
    }

    let result = json!({
        "command": "ccdf-compare",
        "n": n, "trials": trials, "level": level, "seed": seed,
        "rng": RNG_ALGORITHM,
        "gap_db": gap_db,
        "t_gaussian": t_gauss,
        "t_uniform": t_gauss / 10f64.powf(gap_db / 10.0),
        "gaussian_is_worst_case": gap_db > 0.0,
    });
    println!("{}", serde_json::to_string_pretty(&result).unwrap());
    Ok(())
}

// ---------------------------------------------------------------------------
// yield
// ---------------------------------------------------------------------------

/// Invert a (target level, yield) pair into a calibration step size.
#[derive(Debug, Args)]
pub struct YieldArgs {
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    bits: Option<u32>,
    /// Target level in dB: dBFS for offset, dBc for gain/skew
    #[arg(long, allow_negative_numbers = true)]
    target: Option<f64>,
    /// Required production yield in (0, 1)
    #[arg(long = "yield")]
    yield_target: Option<f64>,
    /// Input tone frequency in Hz (skew only)
    #[arg(long)]
    fsig: Option<f64>,
    #[command(flatten)]
    inclusion: InclusionFlags,
    /// Also report the result with the Nyquist term flipped
    #[arg(long)]
    verbose: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn yield_result_json(
    result: &tiadc::calibration::StepSizeResult,
    config: &AdcConfig,
) -> serde_json::Value {
    let query = &result.query;
    let mut value = json!({
        "kind": query.kind.as_str(),
        "n": config.interleave_factor,
        "target_db": query.target_power_db,
        "yield": query.yield_target,
        "include_dc": query.include_dc && query.kind == MismatchKind::Offset,
        "include_nyquist": query.include_nyquist && config.interleave_factor.is_multiple_of(2),
        "sigma": result.sigma,
        "step": result.step,
    });
    let obj = value.as_object_mut().unwrap();
    match query.kind {
        MismatchKind::Offset => {
            obj.insert("unit".into(), json!("full-scale"));
            obj.insert("bits".into(), json!(config.resolution_bits));
            obj.insert("step_lsb".into(), json!(result.step_in_lsb));
        }
        MismatchKind::Gain => {
            obj.insert("unit".into(), json!("relative"));
            obj.insert("step_percent".into(), json!(result.step * 100.0));
        }
        MismatchKind::Skew => {
            obj.insert("unit".into(), json!("seconds"));
            obj.insert("fsig_hz".into(), json!(query.signal_frequency));
            obj.insert("step_femtoseconds".into(), json!(result.step * 1e15));
        }
    }
    value
}

pub fn run_yield(args: YieldArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.config.as_deref())?;
    let kind = match args.kind {
        Some(k) => k,
        None => KindArg::from_name(&require(file.string("kind")?, "kind")?)?,
    }
    .kind();
    let n = require(args.n.or(file.usize("n")?), "n")?;
    let bits = args.bits.or(file.usize("bits")?.map(|b| b as u32)).unwrap_or(12);
    let target = require(args.target.or(file.f64("target")?), "target")?;
    let yield_target = require(args.yield_target.or(file.f64("yield")?), "yield")?;
    let fsig = args.fsig.or(file.f64("fsig")?);
    let (include_dc, include_nyquist) = args.inclusion.resolve(kind, &file)?;

    // The sample rate never enters the inversion; any valid value works.
    let adc = AdcConfig::new(n, 1e9, bits)?;
    let query = YieldQuery {
        kind,
        target_power_db: target,
        yield_target,
        include_dc,
        include_nyquist,
        signal_frequency: fsig,
    };
    let result = invert_yield(&query, &adc)?;
    let mut value = yield_result_json(&result, &adc);
    if args.verbose {
        let alternate_query = YieldQuery {
            include_nyquist: !include_nyquist,
            ..query
        };
        if let Ok(alternate) = invert_yield(&alternate_query, &adc) {
            value.as_object_mut().unwrap().insert(
                "alternate_nyquist_variant".into(),
                yield_result_json(&alternate, &adc),
            );
        }
    }
    emit_json(args.output.as_deref(), &value)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

/// Calibration step size versus target level.
#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    bits: Option<u32>,
    /// Lowest (tightest) target in dB
    #[arg(long, allow_negative_numbers = true)]
    from: Option<f64>,
    /// Highest target in dB
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long = "yield")]
    yield_target: Option<f64>,
    #[arg(long)]
    fsig: Option<f64>,
    #[command(flatten)]
    inclusion: InclusionFlags,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.config.as_deref())?;
    let kind = match args.kind {
        Some(k) => k,
        None => KindArg::from_name(&require(file.string("kind")?, "kind")?)?,
    }
    .kind();
    let n = require(args.n.or(file.usize("n")?), "n")?;
    let bits = args.bits.or(file.usize("bits")?.map(|b| b as u32)).unwrap_or(12);
    let from = require(args.from.or(file.f64("from")?), "from")?;
    let to = require(args.to.or(file.f64("to")?), "to")?;
    let points = args.points.or(file.usize("points")?).unwrap_or(21);
    let yield_target = require(args.yield_target.or(file.f64("yield")?), "yield")?;
    let fsig = args.fsig.or(file.f64("fsig")?);
    if to.is_nan() || from.is_nan() || to <= from || points < 2 {
        return Err(CliError::Validation(
            "need --from < --to and at least two points".into(),
        ));
    }
    let (include_dc, include_nyquist) = args.inclusion.resolve(kind, &file)?;

    let adc = AdcConfig::new(n, 1e9, bits)?;
    let base = YieldQuery {
        kind,
        target_power_db: from,
        yield_target,
        include_dc,
        include_nyquist,
        signal_frequency: fsig,
    };
    let targets: Vec<f64> = (0..points)
        .map(|i| from + (to - from) * i as f64 / (points - 1) as f64)
        .collect();
    let curve = sweep_step_vs_target(&base, &adc, &targets)?;

    let unit = match kind {
        MismatchKind::Offset => "lsb",
        MismatchKind::Gain => "percent",
        MismatchKind::Skew => "femtoseconds",
    };
    let rows: Vec<String> = curve
        .iter()
        .map(|point| {
            let step = match kind {
                MismatchKind::Offset => point.result.step_in_lsb.unwrap(),
                MismatchKind::Gain => point.result.step * 100.0,
                MismatchKind::Skew => point.result.step * 1e15,
            };
            format!("{},{},{}", point.target_db, step, unit)
        })
        .collect();
    let metadata = json!({
        "tool": "tiadc", "version": VERSION, "command": "sweep",
        "kind": kind.as_str(), "n": n, "bits": bits, "yield": yield_target,
        "fsig_hz": fsig, "include_dc": include_dc, "include_nyquist": include_nyquist,
    });
    emit(
        args.output.as_deref(),
        &csv_document(&metadata, "target_db,step_size,unit", &rows),
    )
}
