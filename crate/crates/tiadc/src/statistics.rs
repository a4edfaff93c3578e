//! Distribution of spur and replica powers under i.i.d. Gaussian mismatch.
//!
//! For a length-N i.i.d. zero-mean Gaussian sequence of variance sigma^2,
//! the DFT entries are independent with variance sigma^2/N: real Gaussian at
//! DC and (even N) Nyquist, circularly-symmetric complex Gaussian elsewhere,
//! with bins above N/2 being conjugate mirrors. Spur powers therefore follow
//! chi-squared (real bins) or exponential (circ bins) laws, and the CDF of
//! the strongest spur is the product of the per-bin CDFs.
//!
//! All powers `p` are linear ratios: full-scale-relative for offset spurs,
//! replica-to-carrier for gain and skew.

use statrs::function::erf::erf;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::types::MismatchKind;

/// Distribution family of one DFT bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinKind {
    RealGaussian,
    CircularlySymmetric,
}

/// Distribution of one DFT bin of an i.i.d. Gaussian mismatch sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinDistribution {
    pub kind: BinKind,
    /// Bin variance sigma^2 / N.
    pub variance: f64,
    /// For bins above N/2: the lower bin this one mirrors.
    pub conjugate_mirror_of: Option<usize>,
}

/// Classify bin `k` of the DFT of a length-`n` Gaussian mismatch sequence.
pub fn bin_distribution(n: usize, sigma: f64, k: usize) -> Result<BinDistribution> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need N >= 2, got {n}")));
    }
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidInput(format!("sigma must be positive, got {sigma}")));
    }
    if k >= n {
        return Err(Error::InvalidInput(format!("bin {k} out of range for N={n}")));
    }
    let variance = sigma * sigma / n as f64;
    let nyquist = if n.is_multiple_of(2) { Some(n / 2) } else { None };
    let (kind, mirror) = if k == 0 || Some(k) == nyquist {
        (BinKind::RealGaussian, None)
    } else if 2 * k < n {
        (BinKind::CircularlySymmetric, None)
    } else {
        (BinKind::CircularlySymmetric, Some(n - k))
    };
    Ok(BinDistribution {
        kind,
        variance,
        conjugate_mirror_of: mirror,
    })
}

fn check_power(p: f64) -> Result<()> {
    if p.is_nan() || p < 0.0 {
        return Err(Error::InvalidInput(format!("power must be >= 0, got {p}")));
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::InvalidInput(format!(
            "sigma must be positive and finite, got {sigma}"
        )));
    }
    Ok(())
}

/// CDF of a DC/Nyquist offset spur power (chi-squared, single-sided dBFS).
pub fn cdf_offset_real(p: f64, sigma: f64, n: usize) -> Result<f64> {
    check_power(p)?;
    check_sigma(sigma)?;
    Ok(erf((n as f64 * p / (4.0 * sigma * sigma)).sqrt()))
}

/// CDF of an interior offset spur power (exponential, single-sided dBFS).
pub fn cdf_offset_circ(p: f64, sigma: f64, n: usize) -> Result<f64> {
    check_power(p)?;
    check_sigma(sigma)?;
    Ok(-(-(n as f64) * p / (4.0 * sigma * sigma)).exp_m1())
}

/// CDF of the Nyquist-bin gain replica power (dBc).
pub fn cdf_gain_real(p: f64, sigma: f64, n: usize) -> Result<f64> {
    check_power(p)?;
    check_sigma(sigma)?;
    Ok(erf((n as f64 * p / (2.0 * sigma * sigma)).sqrt()))
}

/// CDF of an interior gain replica power (dBc).
pub fn cdf_gain_circ(p: f64, sigma: f64, n: usize) -> Result<f64> {
    check_power(p)?;
    check_sigma(sigma)?;
    Ok(-(-(n as f64) * p / (sigma * sigma)).exp_m1())
}

fn check_fsig(f_sig: f64) -> Result<f64> {
    if f_sig <= 0.0 || !f_sig.is_finite() {
        return Err(Error::InvalidInput(format!(
            "signal frequency must be positive, got {f_sig}"
        )));
    }
    Ok(f_sig)
}

/// CDF of the Nyquist-bin skew replica power at tone frequency `f_sig`:
/// the gain law with sigma replaced by 2*pi*f_sig*sigma_s.
pub fn cdf_skew_real(p: f64, sigma_s: f64, n: usize, f_sig: f64) -> Result<f64> {
    cdf_gain_real(p, TAU * check_fsig(f_sig)? * sigma_s, n)
}

/// CDF of an interior skew replica power at tone frequency `f_sig`.
pub fn cdf_skew_circ(p: f64, sigma_s: f64, n: usize, f_sig: f64) -> Result<f64> {
    cdf_gain_circ(p, TAU * check_fsig(f_sig)? * sigma_s, n)
}

/// Which spur-power contributors enter a combined (max-spur) CDF.
///
/// The DC term exists only for offsets (the average gain error scales the
/// carrier instead, and an average skew is a harmless global delay). The
/// Nyquist term exists only for even N. The include flags select among the
/// terms that exist; flags for nonexistent terms are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpurInclusion {
    pub include_dc: bool,
    pub include_nyquist: bool,
    /// Number of independent circularly-symmetric contributors; at most
    /// N/2 - 1 (even N) or (N-1)/2 (odd N).
    pub n_circ: usize,
}

impl SpurInclusion {
    /// All structurally present contributors for the kind.
    pub fn default_for(kind: MismatchKind, n: usize) -> Self {
        Self {
            include_dc: kind == MismatchKind::Offset,
            include_nyquist: true,
            n_circ: Self::structural_circ(n),
        }
    }

    /// Independent circ-bin count: N/2 - 1 (even) or (N-1)/2 (odd).
    pub fn structural_circ(n: usize) -> usize {
        if n.is_multiple_of(2) {
            n / 2 - 1
        } else {
            (n - 1) / 2
        }
    }

    pub fn with_dc(mut self, include: bool) -> Self {
        self.include_dc = include;
        self
    }

    pub fn with_nyquist(mut self, include: bool) -> Self {
        self.include_nyquist = include;
        self
    }

    /// Real-Gaussian term count for a given kind and parity.
    pub fn real_terms(&self, kind: MismatchKind, n: usize) -> usize {
        let dc = (kind == MismatchKind::Offset && self.include_dc) as usize;
        let nyquist = (n.is_multiple_of(2) && self.include_nyquist) as usize;
        dc + nyquist
    }
}

/// CDF of the strongest included spur power: the product of the per-bin
/// CDFs, since the contributing bins are mutually independent.
pub fn combined_cdf(
    kind: MismatchKind,
    p: f64,
    sigma: f64,
    n: usize,
    inclusion: &SpurInclusion,
    f_sig: Option<f64>,
) -> Result<f64> {
    if inclusion.n_circ > SpurInclusion::structural_circ(n) {
        return Err(Error::InvalidInput(format!(
            "{} circ contributors requested but N={n} has only {}",
            inclusion.n_circ,
            SpurInclusion::structural_circ(n)
        )));
    }
    let (real, circ) = match kind {
        MismatchKind::Offset => (cdf_offset_real(p, sigma, n)?, cdf_offset_circ(p, sigma, n)?),
        MismatchKind::Gain => (cdf_gain_real(p, sigma, n)?, cdf_gain_circ(p, sigma, n)?),
        MismatchKind::Skew => {
            let f = f_sig.ok_or_else(|| {
                Error::InvalidInput("skew CDF requires a signal frequency".into())
            })?;
            (
                cdf_skew_real(p, sigma, n, f)?,
                cdf_skew_circ(p, sigma, n, f)?,
            )
        }
    };
    let n_real = inclusion.real_terms(kind, n);
    if n_real == 0 && inclusion.n_circ == 0 {
        return Err(Error::InvalidInput(
            "no spur contributors included; the combined CDF is empty".into(),
        ));
    }
    Ok(real.powi(n_real as i32) * circ.powi(inclusion.n_circ as i32))
}

/// Two-sided Kolmogorov-Smirnov statistic between a sample set and a CDF.
/// Sorts `samples` in place.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!samples.is_empty());
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::erf::erf_inv;

    #[test]
    fn bin_classification_matches_parity() {
        let b = bin_distribution(16, 1.0, 0).unwrap();
        assert_eq!(b.kind, BinKind::RealGaussian);
        assert!((b.variance - 1.0 / 16.0).abs() < 1e-18);
        assert_eq!(b.conjugate_mirror_of, None);

        let b = bin_distribution(16, 1.0, 8).unwrap();
        assert_eq!(b.kind, BinKind::RealGaussian);

        let b = bin_distribution(16, 1.0, 3).unwrap();
        assert_eq!(b.kind, BinKind::CircularlySymmetric);
        assert_eq!(b.conjugate_mirror_of, None);

        let b = bin_distribution(16, 1.0, 13).unwrap();
        assert_eq!(b.kind, BinKind::CircularlySymmetric);
        assert_eq!(b.conjugate_mirror_of, Some(3));

        // Odd N has no Nyquist bin.
        let b = bin_distribution(15, 1.0, 7).unwrap();
        assert_eq!(b.kind, BinKind::CircularlySymmetric);
        assert_eq!(b.conjugate_mirror_of, None);
        let b = bin_distribution(15, 1.0, 8).unwrap();
        assert_eq!(b.conjugate_mirror_of, Some(7));

        assert!(bin_distribution(16, 1.0, 16).is_err());
        assert!(bin_distribution(16, 0.0, 3).is_err());
    }

    #[test]
    fn cdfs_are_zero_at_zero_power() {
        assert_eq!(cdf_offset_real(0.0, 1e-4, 16).unwrap(), 0.0);
        assert_eq!(cdf_offset_circ(0.0, 1e-4, 16).unwrap(), 0.0);
        assert_eq!(cdf_gain_real(0.0, 1e-3, 16).unwrap(), 0.0);
        assert_eq!(cdf_gain_circ(0.0, 1e-3, 16).unwrap(), 0.0);
        assert_eq!(cdf_skew_real(0.0, 1e-14, 16, 12e9).unwrap(), 0.0);
        assert_eq!(cdf_skew_circ(0.0, 1e-14, 16, 12e9).unwrap(), 0.0);
        assert!(cdf_offset_real(-1e-9, 1e-4, 16).is_err());
        assert!(cdf_skew_circ(1e-8, 1e-14, 16, -1.0).is_err());
    }

    #[test]
    fn offset_cdf_frozen_values() {
        // N=16, sigma = 7.82e-5, p = 1e-8 (-80 dBFS); exponent 6.541035...
        let real = cdf_offset_real(1e-8, 7.82e-5, 16).unwrap();
        assert!((real - 0.9997018642506364).abs() < 1e-12, "real {real}");
        let circ = cdf_offset_circ(1e-8, 7.82e-5, 16).unwrap();
        assert!((circ - 0.998557006038997).abs() < 1e-12, "circ {circ}");
    }

    #[test]
    fn gain_and_skew_cdf_frozen_values() {
        let g = cdf_gain_circ(10f64.powf(-6.5), 8.79e-4, 16).unwrap();
        assert!((g - 0.9985677462713352).abs() < 1e-12, "gain circ {g}");
        let s = cdf_skew_circ(10f64.powf(-6.5), 1.17e-14, 16, 12e9).unwrap();
        assert!((s - 0.998499094346391).abs() < 1e-12, "skew circ {s}");
    }

    #[test]
    fn exponential_median_identities() {
        let sigma = 3.7e-4;
        let n = 16;
        let p_med = 4.0 * sigma * sigma * 2f64.ln() / n as f64;
        let f = cdf_offset_circ(p_med, sigma, n).unwrap();
        assert!((f - 0.5).abs() < 1e-14);
        let p_med_gain = sigma * sigma * 2f64.ln() / n as f64;
        let f = cdf_gain_circ(p_med_gain, sigma, n).unwrap();
        assert!((f - 0.5).abs() < 1e-14);
    }

    #[test]
    fn chi_squared_median_identity() {
        let sigma = 7.82e-5;
        let n = 16;
        let p50 = 4.0 * sigma * sigma * erf_inv(0.5).powi(2) / n as f64;
        let f = cdf_offset_real(p50, sigma, n).unwrap();
        assert!((f - 0.5).abs() < 1e-9);
    }

    #[test]
    fn skew_is_gain_with_substituted_sigma() {
        let (p, sigma_s, n, f) = (1e-7, 1.3e-14, 16, 9e9);
        let direct = cdf_skew_circ(p, sigma_s, n, f).unwrap();
        let via_gain = cdf_gain_circ(p, TAU * f * sigma_s, n).unwrap();
        assert_eq!(direct, via_gain);
        let direct = cdf_skew_real(p, sigma_s, n, f).unwrap();
        let via_gain = cdf_gain_real(p, TAU * f * sigma_s, n).unwrap();
        assert_eq!(direct, via_gain);
    }

    #[test]
    fn doubling_n_halves_single_bin_medians() {
        let sigma = 2.5e-4;
        for n in [4usize, 8, 16, 32] {
            let med_n = 4.0 * sigma * sigma * 2f64.ln() / n as f64;
            let med_2n = 4.0 * sigma * sigma * 2f64.ln() / (2 * n) as f64;
            assert!((med_n / med_2n - 2.0).abs() < 1e-12);
            assert!((cdf_offset_circ(med_2n, sigma, 2 * n).unwrap() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn combined_structure_even_and_odd() {
        let sigma = 7.82e-5;
        let p = 1e-8;
        // Offset, N=16, DC and Nyquist excluded: F_circ^7.
        let incl = SpurInclusion::default_for(MismatchKind::Offset, 16)
            .with_dc(false)
            .with_nyquist(false);
        let combined = combined_cdf(MismatchKind::Offset, p, sigma, 16, &incl, None).unwrap();
        let circ = cdf_offset_circ(p, sigma, 16).unwrap();
        assert!((combined - circ.powi(7)).abs() < 1e-15);
        assert!((combined - 0.9899426641249326).abs() < 1e-12);

        // Full offset structure: F_real^2 * F_circ^7.
        let incl = SpurInclusion::default_for(MismatchKind::Offset, 16);
        let combined = combined_cdf(MismatchKind::Offset, p, sigma, 16, &incl, None).unwrap();
        let real = cdf_offset_real(p, sigma, 16).unwrap();
        assert!((combined - real.powi(2) * circ.powi(7)).abs() < 1e-15);

        // Gain, even N: F_real^1 * F_circ^(N/2-1).
        let incl = SpurInclusion::default_for(MismatchKind::Gain, 16);
        let combined = combined_cdf(MismatchKind::Gain, 1e-7, 1e-3, 16, &incl, None).unwrap();
        let real = cdf_gain_real(1e-7, 1e-3, 16).unwrap();
        let circ = cdf_gain_circ(1e-7, 1e-3, 16).unwrap();
        assert!((combined - real * circ.powi(7)).abs() < 1e-15);

        // Odd N: offset keeps only the DC real term, gain has none.
        let incl = SpurInclusion::default_for(MismatchKind::Offset, 15);
        assert_eq!(incl.n_circ, 7);
        assert_eq!(incl.real_terms(MismatchKind::Offset, 15), 1);
        let incl = SpurInclusion::default_for(MismatchKind::Gain, 15);
        assert_eq!(incl.real_terms(MismatchKind::Gain, 15), 0);

        // Skew without a signal frequency is an error.
        let incl = SpurInclusion::default_for(MismatchKind::Skew, 16);
        assert!(combined_cdf(MismatchKind::Skew, 1e-7, 1e-14, 16, &incl, None).is_err());
    }

    #[test]
    fn combined_limits_and_bound() {
        let incl = SpurInclusion::default_for(MismatchKind::Offset, 16);
        assert_eq!(
            combined_cdf(MismatchKind::Offset, 0.0, 1e-4, 16, &incl, None).unwrap(),
            0.0
        );
        let big = combined_cdf(MismatchKind::Offset, 1e6, 1e-4, 16, &incl, None).unwrap();
        assert!((big - 1.0).abs() < 1e-15);
        // Product of probabilities never exceeds any factor.
        for &p in &[1e-9, 1e-8, 1e-7] {
            let c = combined_cdf(MismatchKind::Offset, p, 1e-4, 16, &incl, None).unwrap();
            assert!(c <= cdf_offset_real(p, 1e-4, 16).unwrap() + 1e-16);
            assert!(c <= cdf_offset_circ(p, 1e-4, 16).unwrap() + 1e-16);
        }
    }

    #[test]
    fn cdfs_monotone_on_log_grid() {
        let sigma = 1e-4;
        let mut prev = [0.0f64; 4];
        for i in 0..200 {
            let p = 10f64.powf(-12.0 + i as f64 * 0.05);
            let vals = [
                cdf_offset_real(p, sigma, 16).unwrap(),
                cdf_offset_circ(p, sigma, 16).unwrap(),
                cdf_gain_real(p, sigma, 16).unwrap(),
                cdf_gain_circ(p, sigma, 16).unwrap(),
            ];
            for (v, pv) in vals.iter().zip(&prev) {
                assert!(*v >= *pv, "non-monotone at p={p}");
                assert!((0.0..1.0 + 1e-15).contains(v));
            }
            prev = vals;
        }
    }

    #[test]
    fn ks_statistic_of_exact_grid_is_small() {
        // Samples placed at the quantile midpoints of U(0,1) give D = 1/(2n).
        let n = 1000;
        let mut samples: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&mut samples, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
    }
}
