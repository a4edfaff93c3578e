//! Empirical distribution engine for mismatch-DFT statistics.
//!
//! Draws mismatch sequences (Gaussian or uniform), forms DFT-bin power
//! statistics, and tabulates CCDFs. Gaussian draws converge to the closed
//! forms in [`crate::statistics`]; uniform draws quantify how tight the
//! Gaussian worst-case approximation is for calibrated devices.
//!
//! Trials are split into fixed-size chunks, one ChaCha12 stream per chunk,
//! and merged by summing per-chunk counts, so results are reproducible for
//! a given seed regardless of thread count.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::TAU;

use crate::dft::DftPlan;
use crate::error::{Error, Result};
use crate::statistics::SpurInclusion;
use crate::types::{DistributionSpec, MismatchKind};

/// Identity of the random source, recorded in output metadata.
pub const RNG_ALGORITHM: &str = "chacha12, one stream per 8192-trial chunk";

const TRIALS_PER_CHUNK: u64 = 8192;

/// Log-spaced threshold grid: 400 points over four decades.
const GRID_POINTS: usize = 400;
const GRID_LO_LOG10: f64 = -2.0;
const GRID_HI_LOG10: f64 = 2.0;

/// Tabulated complementary CDF P(power > threshold).
#[derive(Debug, Clone, PartialEq)]
pub struct CcdfTable {
    /// Ascending linear power thresholds.
    pub thresholds: Vec<f64>,
    /// Exceedance probabilities, nonincreasing.
    pub probabilities: Vec<f64>,
    /// Number of tabulated samples.
    pub trials: u64,
    pub seed: u64,
    /// Sample mean of the tabulated quantity (1.0 for a correctly
    /// normalized bin-power CCDF).
    pub mean: f64,
}

impl CcdfTable {
    /// Inverse CCDF at probability `q`, log-interpolated between grid
    /// points. None when `q` falls outside the tabulated range.
    pub fn threshold_at(&self, q: f64) -> Option<f64> {
        if !(q > 0.0 && q < 1.0) {
            return None;
        }
        let probs = &self.probabilities;
        let idx = probs.partition_point(|&p| p > q);
        if idx == 0 || idx >= probs.len() {
            return None;
        }
        let (p_hi, p_lo) = (probs[idx - 1], probs[idx]);
        let (t_lo, t_hi) = (self.thresholds[idx - 1], self.thresholds[idx]);
        if p_lo <= 0.0 || p_hi <= p_lo {
            return Some(t_lo);
        }
        let w = (p_hi.ln() - q.ln()) / (p_hi.ln() - p_lo.ln());
        Some(t_lo * (t_hi / t_lo).powf(w))
    }

    /// CCDF at `t` from the tabulation (step interpolation, conservative).
    pub fn probability_above(&self, t: f64) -> f64 {
        let idx = self.thresholds.partition_point(|&th| th < t);
        if idx == 0 {
            self.probabilities[0]
        } else {
            self.probabilities[idx - 1]
        }
    }
}

/// One length-`n` mismatch draw, reproducible per seed.
pub fn sample_mismatch(dist: &DistributionSpec, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = vec![0.0; n];
    fill_mismatch(dist, &mut rng, &mut out);
    out
}

fn fill_mismatch(dist: &DistributionSpec, rng: &mut ChaCha12Rng, out: &mut [f64]) {
    match dist {
        DistributionSpec::Gaussian { sigma } => {
            for v in out.iter_mut() {
                *v = sigma * rng.sample::<f64, _>(StandardNormal);
            }
        }
        DistributionSpec::Uniform { step } => {
            for v in out.iter_mut() {
                *v = step * (rng.gen::<f64>() - 0.5);
            }
        }
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // Stream 0 is reserved for single-shot draws via sample_mismatch.
    rng.set_stream(chunk + 1);
    rng
}

fn chunk_ranges(trials: u64) -> Vec<(u64, u64)> {
    let chunks = trials.div_ceil(TRIALS_PER_CHUNK);
    (0..chunks)
        .map(|c| {
            let start = c * TRIALS_PER_CHUNK;
            (c, (trials - start).min(TRIALS_PER_CHUNK))
        })
        .collect()
}

fn threshold_grid(scale: f64) -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|i| {
            let frac = i as f64 / (GRID_POINTS - 1) as f64;
            scale * 10f64.powf(GRID_LO_LOG10 + frac * (GRID_HI_LOG10 - GRID_LO_LOG10))
        })
        .collect()
}

/// Histogram of exceedance positions plus a running sum for the mean.
struct TailCounts {
    /// slot[i] = number of values v with thresholds[i-1] <= v < thresholds[i]
    /// (slot 0: below all thresholds, slot len: above all).
    slots: Vec<u64>,
    sum: f64,
    samples: u64,
}

impl TailCounts {
    fn new(len: usize) -> Self {
        Self {
            slots: vec![0; len + 1],
            sum: 0.0,
            samples: 0,
        }
    }

    fn record(&mut self, thresholds: &[f64], value: f64) {
        let pos = thresholds.partition_point(|&th| th < value);
        self.slots[pos] += 1;
        self.sum += value;
        self.samples += 1;
    }

    fn merge(mut self, other: TailCounts) -> TailCounts {
        for (a, b) in self.slots.iter_mut().zip(&other.slots) {
            *a += b;
        }
        self.sum += other.sum;
        self.samples += other.samples;
        self
    }

    fn into_table(self, thresholds: Vec<f64>, trials: u64, seed: u64) -> CcdfTable {
        let mut exceed = vec![0u64; thresholds.len()];
        let mut running = 0u64;
        for i in (0..thresholds.len()).rev() {
            running += self.slots[i + 1];
            exceed[i] = running;
        }
        let total = self.samples as f64;
        CcdfTable {
            probabilities: exceed.iter().map(|&c| c as f64 / total).collect(),
            thresholds,
            trials,
            seed,
            mean: self.sum / total,
        }
    }
}

/// Which DFT bins feed a CCDF tabulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinSelector {
    /// One circularly-symmetric bin index.
    Single(usize),
    /// Pool every circularly-symmetric bin (DC and Nyquist excluded).
    PooledCirc,
}

impl BinSelector {
    fn circ_indices(&self, n: usize) -> Result<Vec<usize>> {
        match *self {
            BinSelector::Single(k) => {
                if k == 0 || k >= n || (n.is_multiple_of(2) && k == n / 2) {
                    return Err(Error::InvalidInput(format!(
                        "bin {k} is not a circularly-symmetric bin of a length-{n} DFT"
                    )));
                }
                Ok(vec![k])
            }
            BinSelector::PooledCirc => {
                Ok((1..n.div_ceil(2)).collect())
            }
        }
    }
}

/// Empirical CCDF of normalized DFT-bin powers |x_dft[k]|^2 / (sigma^2/N).
///
/// The normalization makes the bin-power mean exactly 1, so Gaussian input
/// converges to the unit exponential e^(-t).
pub fn empirical_ccdf(
    dist: &DistributionSpec,
    n: usize,
    selector: BinSelector,
    trials: u64,
    seed: u64,
) -> Result<CcdfTable> {
    dist.validate()?;
    if trials < 10_000 {
        return Err(Error::InvalidInput(format!(
            "need at least 1e4 trials for a meaningful tail, got {trials}"
        )));
    }
    let bins = selector.circ_indices(n)?;
    let thresholds = threshold_grid(1.0);
    let sigma = dist.sigma();
    let bin_variance = sigma * sigma / n as f64;

    // Collect per-chunk counts in chunk order and merge sequentially; a
    // rayon reduce would sum the f64 running means in a work-stealing-
    // dependent order and break bit-for-bit reproducibility.
    let locals: Vec<TailCounts> = chunk_ranges(trials)
        .into_par_iter()
        .map(|(chunk, count)| {
            let mut rng = chunk_rng(seed, chunk);
            let mut plan = DftPlan::new(n);
            let mut seq = vec![0.0; n];
            let mut spectrum: Vec<Complex64> = Vec::with_capacity(n);
            let mut local = TailCounts::new(thresholds.len());
            for _ in 0..count {
                fill_mismatch(dist, &mut rng, &mut seq);
                plan.dft_real_into(&seq, &mut spectrum);
                for &k in &bins {
                    local.record(&thresholds, spectrum[k].norm_sqr() / bin_variance);
                }
            }
            local
        })
        .collect();
    let counts = locals
        .into_iter()
        .fold(TailCounts::new(thresholds.len()), TailCounts::merge);
    Ok(counts.into_table(thresholds, trials, seed))
}

/// Worst-case margin of the Gaussian model over uniform mismatch:
/// 10*log10(t_gauss(q) / t_unif(q)) at exceedance probability `q`, where
/// t_gauss is the exact unit-exponential quantile ln(1/q) and t_unif is the
/// empirical quantile of normalized uniform-mismatch bin powers (pooled
/// circ bins). Positive means Gaussian is the worst case.
pub fn gaussian_gap_db(n: usize, prob_level: f64, trials: u64, seed: u64) -> Result<f64> {
    if !(prob_level > 0.0 && prob_level < 1.0) {
        return Err(Error::InvalidInput(format!(
            "probability level must be in (0, 1), got {prob_level}"
        )));
    }
    if (trials as f64) * prob_level < 100.0 {
        return Err(Error::InvalidInput(format!(
            "{trials} trials give fewer than 100 expected exceedances at q={prob_level}"
        )));
    }
    let bins = BinSelector::PooledCirc.circ_indices(n)?;
    let dist = DistributionSpec::Uniform { step: 1.0 };
    let sigma = dist.sigma();
    let bin_variance = sigma * sigma / n as f64;
    // Keep only tail values; the cut sits two orders of magnitude in
    // probability below the requested level, so the order statistic we
    // need is never discarded.
    let pre_cut = (1.0 / (200.0 * prob_level)).ln().max(0.0);

    let mut tail: Vec<f64> = chunk_ranges(trials)
        .into_par_iter()
        .map(|(chunk, count)| {
            let mut rng = chunk_rng(seed, chunk);
            let mut plan = DftPlan::new(n);
            let mut seq = vec![0.0; n];
            let mut spectrum: Vec<Complex64> = Vec::with_capacity(n);
            let mut kept = Vec::new();
            for _ in 0..count {
                fill_mismatch(&dist, &mut rng, &mut seq);
                plan.dft_real_into(&seq, &mut spectrum);
                for &k in &bins {
                    let t = spectrum[k].norm_sqr() / bin_variance;
                    if t > pre_cut {
                        kept.push(t);
                    }
                }
            }
            kept
        })
        .collect::<Vec<Vec<f64>>>()
        .into_iter()
        .flatten()
        .collect();

    let samples = trials * bins.len() as u64;
    let k = ((samples as f64 * prob_level) as usize).max(1);
    if tail.len() < k {
        return Err(Error::NonConvergence(format!(
            "tail pre-filter kept {} values but the {k}-th largest is needed",
            tail.len()
        )));
    }
    let idx = tail.len() - k;
    tail.select_nth_unstable_by(idx, |a, b| a.partial_cmp(b).unwrap());
    let t_unif = tail[idx];
    let t_gauss = (1.0 / prob_level).ln();
    Ok(10.0 * (t_gauss / t_unif).log10())
}

/// Included spur powers of one drawn device, maximum taken per draw.
fn max_spur_power(
    spectrum: &[Complex64],
    kind: MismatchKind,
    inclusion: &SpurInclusion,
    n: usize,
    skew_scale: f64,
) -> f64 {
    let mut max = 0.0f64;
    if kind == MismatchKind::Offset && inclusion.include_dc {
        max = max.max(2.0 * spectrum[0].norm_sqr());
    }
    if n.is_multiple_of(2) && inclusion.include_nyquist {
        let nyq = spectrum[n / 2].norm_sqr();
        max = max.max(match kind {
            MismatchKind::Offset => 2.0 * nyq,
            MismatchKind::Gain => nyq,
            MismatchKind::Skew => skew_scale * nyq,
        });
    }
    for value in &spectrum[1..=inclusion.n_circ] {
        let p = value.norm_sqr();
        max = max.max(match kind {
            MismatchKind::Offset => 4.0 * p,
            MismatchKind::Gain => p,
            MismatchKind::Skew => skew_scale * p,
        });
    }
    max
}

fn skew_scale_for(kind: MismatchKind, f_sig: Option<f64>) -> Result<f64> {
    if kind != MismatchKind::Skew {
        return Ok(1.0);
    }
    match f_sig {
        Some(f) if f > 0.0 => Ok((TAU * f).powi(2)),
        _ => Err(Error::InvalidInput(
            "skew statistics require a positive signal frequency".into(),
        )),
    }
}

/// Raw per-device maxima of the included spur powers, in draw order.
/// This is the sample set behind [`empirical_max_spur_cdf`].
pub fn max_spur_samples(
    kind: MismatchKind,
    dist: &DistributionSpec,
    n: usize,
    inclusion: &SpurInclusion,
    f_sig: Option<f64>,
    trials: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    dist.validate()?;
    if inclusion.n_circ > SpurInclusion::structural_circ(n) {
        return Err(Error::InvalidInput(format!(
            "{} circ contributors requested but N={n} has only {}",
            inclusion.n_circ,
            SpurInclusion::structural_circ(n)
        )));
    }
    let skew_scale = skew_scale_for(kind, f_sig)?;
    let out: Vec<Vec<f64>> = chunk_ranges(trials)
        .into_par_iter()
        .map(|(chunk, count)| {
            let mut rng = chunk_rng(seed, chunk);
            let mut plan = DftPlan::new(n);
            let mut seq = vec![0.0; n];
            let mut spectrum: Vec<Complex64> = Vec::with_capacity(n);
            let mut maxima = Vec::with_capacity(count as usize);
            for _ in 0..count {
                fill_mismatch(dist, &mut rng, &mut seq);
                plan.dft_real_into(&seq, &mut spectrum);
                maxima.push(max_spur_power(&spectrum, kind, inclusion, n, skew_scale));
            }
            maxima
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// Empirical distribution of the strongest included spur power per device.
/// For Gaussian mismatch this converges to [`crate::statistics::combined_cdf`]
/// (the table stores the complementary probabilities).
pub fn empirical_max_spur_cdf(
    kind: MismatchKind,
    dist: &DistributionSpec,
    n: usize,
    inclusion: &SpurInclusion,
    f_sig: Option<f64>,
    trials: u64,
    seed: u64,
) -> Result<CcdfTable> {
    let samples = max_spur_samples(kind, dist, n, inclusion, f_sig, trials, seed)?;
    let sigma = dist.sigma();
    let skew_scale = skew_scale_for(kind, f_sig)?;
    // Grid centered on the mean circ-bin spur power of the kind.
    let kind_scale = match kind {
        MismatchKind::Offset => 4.0,
        MismatchKind::Gain => 1.0,
        MismatchKind::Skew => skew_scale,
    };
    let thresholds = threshold_grid(kind_scale * sigma * sigma / n as f64);
    let mut counts = TailCounts::new(thresholds.len());
    for &v in &samples {
        counts.record(&thresholds, v);
    }
    Ok(counts.into_table(thresholds, trials, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statistics::{combined_cdf, ks_statistic};

    #[test]
    fn sample_variances_match_their_distributions() {
        let draws = 62_500; // 1e6 pooled entries at N=16
        let n = 16;
        for (dist, var) in [
            (DistributionSpec::Uniform { step: 0.02 }, 0.02f64.powi(2) / 12.0),
            (DistributionSpec::Gaussian { sigma: 0.01 }, 0.01f64.powi(2)),
        ] {
            let mut sum_sq = 0.0;
            for t in 0..draws {
                let seq = sample_mismatch(&dist, n, 1000 + t);
                sum_sq += seq.iter().map(|v| v * v).sum::<f64>();
            }
            let sample_var = sum_sq / (draws * n as u64) as f64;
            assert!(
                (sample_var / var - 1.0).abs() < 0.01,
                "variance off by {:.3}%",
                100.0 * (sample_var / var - 1.0)
            );
        }
    }

    #[test]
    fn same_seed_same_sequence() {
        let dist = DistributionSpec::Gaussian { sigma: 1.0 };
        assert_eq!(sample_mismatch(&dist, 16, 42), sample_mismatch(&dist, 16, 42));
        assert_ne!(sample_mismatch(&dist, 16, 42), sample_mismatch(&dist, 16, 43));
    }

    #[test]
    fn tables_are_deterministic() {
        let dist = DistributionSpec::Uniform { step: 1.0 };
        let a = empirical_ccdf(&dist, 8, BinSelector::PooledCirc, 20_000, 7).unwrap();
        let b = empirical_ccdf(&dist, 8, BinSelector::PooledCirc, 20_000, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tables_do_not_depend_on_thread_count() {
        let dist = DistributionSpec::Gaussian { sigma: 0.5 };
        let ambient = empirical_ccdf(&dist, 8, BinSelector::PooledCirc, 30_000, 19).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| empirical_ccdf(&dist, 8, BinSelector::PooledCirc, 30_000, 19).unwrap());
        assert_eq!(ambient, single);
        let gap_ambient = gaussian_gap_db(8, 1e-2, 50_000, 19).unwrap();
        let gap_single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| gaussian_gap_db(8, 1e-2, 50_000, 19).unwrap());
        assert_eq!(gap_ambient, gap_single);
    }

    #[test]
    fn gaussian_ccdf_matches_unit_exponential() {
        let dist = DistributionSpec::Gaussian { sigma: 3.0 };
        let trials = 100_000;
        let table = empirical_ccdf(&dist, 16, BinSelector::Single(3), trials, 11).unwrap();
        assert!((table.mean - 1.0).abs() < 0.01, "mean {}", table.mean);
        for (t, p_hat) in table.thresholds.iter().zip(&table.probabilities) {
            let p = (-t).exp();
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            assert!(
                (p_hat - p).abs() <= 3.0 * se + 1e-12,
                "t={t}: empirical {p_hat} vs {p} (se {se})"
            );
        }
        // Exponential tail identity at t = ln(1e4).
        let t = (1e4f64).ln();
        let p_hat = table.probability_above(t);
        let se = (1e-4f64 / trials as f64).sqrt();
        assert!((p_hat - 1e-4).abs() < 3.0 * se + 2e-5);
    }

    #[test]
    fn hermitian_pairing_in_sampled_dfts() {
        let dist = DistributionSpec::Uniform { step: 1.0 };
        let mut plan = DftPlan::new(12);
        let mut spectrum = Vec::new();
        for seed in 0..200 {
            let seq = sample_mismatch(&dist, 12, seed);
            plan.dft_real_into(&seq, &mut spectrum);
            for k in 1..12 {
                let a = spectrum[k].norm();
                let b = spectrum[12 - k].norm();
                assert!((a - b).abs() <= 1e-13 * (1.0 + a), "k={k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn selector_validation() {
        let dist = DistributionSpec::Gaussian { sigma: 1.0 };
        assert!(empirical_ccdf(&dist, 16, BinSelector::Single(0), 10_000, 1).is_err());
        assert!(empirical_ccdf(&dist, 16, BinSelector::Single(8), 10_000, 1).is_err());
        assert!(empirical_ccdf(&dist, 16, BinSelector::Single(16), 10_000, 1).is_err());
        assert!(empirical_ccdf(&dist, 16, BinSelector::Single(3), 5_000, 1).is_err());
        assert!(empirical_ccdf(&dist, 16, BinSelector::Single(3), 10_000, 1).is_ok());
    }

    #[test]
    fn gap_is_positive_and_shrinks_with_n() {
        let gap16 = gaussian_gap_db(16, 1e-2, 200_000, 5).unwrap();
        let gap32 = gaussian_gap_db(32, 1e-2, 200_000, 5).unwrap();
        assert!(gap16 > 0.0, "gap16 {gap16}");
        assert!(gap32 > 0.0, "gap32 {gap32}");
        assert!(gap32 < gap16, "gap should shrink with N: {gap16} -> {gap32}");
    }

    #[test]
    fn gap_grows_toward_the_tail() {
        // N = 8: the bounded-support deficit grows with depth into the tail.
        let shallow = gaussian_gap_db(8, 1e-2, 1_000_000, 9).unwrap();
        let deep = gaussian_gap_db(8, 1e-4, 1_000_000, 9).unwrap();
        assert!(shallow > 0.0 && deep > shallow, "{shallow} vs {deep}");
    }

    #[test]
    fn gap_requires_enough_trials() {
        assert!(gaussian_gap_db(16, 1e-4, 100_000, 1).is_err());
    }

    #[test]
    fn max_spur_cdf_matches_closed_form() {
        let n = 16;
        let sigma = 1e-3;
        let dist = DistributionSpec::Gaussian { sigma };
        let incl = SpurInclusion::default_for(MismatchKind::Offset, n)
            .with_dc(false)
            .with_nyquist(false);
        let mut samples =
            max_spur_samples(MismatchKind::Offset, &dist, n, &incl, None, 100_000, 21).unwrap();
        let d = ks_statistic(&mut samples, |p| {
            combined_cdf(MismatchKind::Offset, p, sigma, n, &incl, None).unwrap()
        });
        assert!(d < 0.006, "KS distance {d}");
    }

    #[test]
    fn degenerate_distribution_collapses() {
        let dist = DistributionSpec::Gaussian { sigma: 1e-15 };
        let incl = SpurInclusion::default_for(MismatchKind::Offset, 16);
        let samples =
            max_spur_samples(MismatchKind::Offset, &dist, 16, &incl, None, 10_000, 3).unwrap();
        for &v in &samples {
            assert!(v < 1e-29, "max spur {v} above -290 dB");
        }
    }

    #[test]
    fn uniform_max_spur_cdf_dominates_gaussian_in_tail() {
        let n = 16;
        let sigma = 1e-3;
        let step = sigma * 12f64.sqrt();
        let incl = SpurInclusion::default_for(MismatchKind::Offset, n)
            .with_dc(false)
            .with_nyquist(false);
        let trials = 200_000u64;
        let samples = max_spur_samples(
            MismatchKind::Offset,
            &DistributionSpec::Uniform { step },
            n,
            &incl,
            None,
            trials,
            17,
        )
        .unwrap();
        // At every deep-tail quantile of the Gaussian model, the uniform
        // population has at least as much mass below.
        for target_cdf in [0.9, 0.99, 0.999] {
            let mut lo = 1e-12;
            let mut hi = 1.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let c = combined_cdf(MismatchKind::Offset, mid, sigma, n, &incl, None).unwrap();
                if c < target_cdf {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let p_quantile = 0.5 * (lo + hi);
            let empirical =
                samples.iter().filter(|&&v| v <= p_quantile).count() as f64 / trials as f64;
            let se = (target_cdf * (1.0 - target_cdf) / trials as f64).sqrt();
            assert!(
                empirical >= target_cdf - 3.0 * se,
                "uniform CDF {empirical} below Gaussian {target_cdf}"
            );
        }
    }

    #[test]
    fn max_spur_table_brackets_the_closed_form_median() {
        let n = 16;
        let sigma = 1e-3;
        let incl = SpurInclusion::default_for(MismatchKind::Offset, n)
            .with_dc(false)
            .with_nyquist(false);
        let table = empirical_max_spur_cdf(
            MismatchKind::Offset,
            &DistributionSpec::Gaussian { sigma },
            n,
            &incl,
            None,
            50_000,
            23,
        )
        .unwrap();
        assert!(table
            .probabilities
            .windows(2)
            .all(|w| w[1] <= w[0]));
        assert!(table.probabilities[0] > 0.999);
        // CCDF-inverse at 0.5 sits at the median of F_circ^7.
        let med = table.threshold_at(0.5).unwrap();
        let cdf = combined_cdf(MismatchKind::Offset, med, sigma, n, &incl, None).unwrap();
        assert!((cdf - 0.5).abs() < 0.02, "median CDF {cdf}");
    }

    #[test]
    fn skew_statistics_require_frequency() {
        let dist = DistributionSpec::Gaussian { sigma: 1e-14 };
        let incl = SpurInclusion::default_for(MismatchKind::Skew, 16);
        assert!(
            max_spur_samples(MismatchKind::Skew, &dist, 16, &incl, None, 10_000, 1).is_err()
        );
        assert!(
            max_spur_samples(MismatchKind::Skew, &dist, 16, &incl, Some(12e9), 10_000, 1).is_ok()
        );
    }

    #[test]
    fn table_inversion_round_trips() {
        let dist = DistributionSpec::Gaussian { sigma: 1.0 };
        let table = empirical_ccdf(&dist, 16, BinSelector::PooledCirc, 100_000, 13).unwrap();
        let t = table.threshold_at(1e-2).unwrap();
        // Unit exponential: t(q) = ln(1/q) = 4.605.
        assert!((t - 4.605).abs() < 0.2, "t(1e-2) = {t}");
    }
}
