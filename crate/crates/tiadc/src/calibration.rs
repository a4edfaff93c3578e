//! Yield-driven calibration step sizing.
//!
//! Given a spur/replica power target and a production yield, find the
//! largest mismatch sigma whose combined max-spur CDF still meets the
//! yield, then report the calibration step Delta = sigma * sqrt(12) (a
//! calibrated device's residual mismatch is uniform over one step, with
//! variance Delta^2/12).
//!
//! The combined CDF is strictly decreasing in sigma at fixed target, so the
//! inversion is a guarded bisection, seeded by the closed-form solution of
//! the circ-only (or real-only) structure.

use statrs::function::erf::erf_inv;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::statistics::{combined_cdf, SpurInclusion};
use crate::types::{db_to_linear, AdcConfig, MismatchKind, YieldQuery};

/// Result of a yield inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSizeResult {
    /// Largest admissible mismatch standard deviation (full-scale units for
    /// offset, relative for gain, seconds for skew).
    pub sigma: f64,
    /// Calibration step Delta = sigma * sqrt(12), same units.
    pub step: f64,
    /// Step in LSB units (offset only).
    pub step_in_lsb: Option<f64>,
    /// The question this answers.
    pub query: YieldQuery,
}

/// Contribution structure a query resolves to.
fn inclusion_for(query: &YieldQuery, config: &AdcConfig) -> SpurInclusion {
    SpurInclusion::default_for(query.kind, config.interleave_factor)
        .with_dc(query.include_dc)
        .with_nyquist(query.include_nyquist)
}

/// Per-kind constants c such that the circ CDF is 1 - exp(-N p / (c sigma^2))
/// and the real CDF is erf(sqrt(N p / (c_real sigma^2))).
fn kind_constants(kind: MismatchKind, f_sig: Option<f64>) -> (f64, f64) {
    match kind {
        MismatchKind::Offset => (4.0, 4.0),
        MismatchKind::Gain => (1.0, 2.0),
        MismatchKind::Skew => {
            let f = f_sig.expect("validated earlier");
            ((TAU * f).powi(2), 2.0 * (TAU * f).powi(2))
        }
    }
}

/// Closed-form sigma for a pure circ^m or real^r structure; the bisection
/// bracket is seeded from this.
fn closed_form_seed(
    query: &YieldQuery,
    config: &AdcConfig,
    inclusion: &SpurInclusion,
    p0: f64,
) -> f64 {
    let n = config.interleave_factor as f64;
    let (c_circ, c_real) = kind_constants(query.kind, query.signal_frequency);
    let y = query.yield_target;
    if inclusion.n_circ > 0 {
        let per_bin = y.powf(1.0 / inclusion.n_circ as f64);
        let l = (1.0 / (1.0 - per_bin)).ln();
        (n * p0 / (c_circ * l)).sqrt()
    } else {
        let n_real = inclusion.real_terms(query.kind, config.interleave_factor).max(1);
        let target = erf_inv(y.powf(1.0 / n_real as f64));
        (n * p0 / (c_real * target * target)).sqrt()
    }
}

/// Solve combined_cdf(p0; sigma) = yield for sigma.
///
/// Returns the sigma on the passing side: the combined CDF at the result is
/// within [yield, yield + 1e-9].
pub fn invert_yield(query: &YieldQuery, config: &AdcConfig) -> Result<StepSizeResult> {
    query.validate()?;
    let inclusion = inclusion_for(query, config);
    let n = config.interleave_factor;
    if inclusion.real_terms(query.kind, n) == 0 && inclusion.n_circ == 0 {
        return Err(Error::InvalidInput(
            "query excludes every spur contributor".into(),
        ));
    }
    let p0 = db_to_linear(query.target_power_db);
    let y = query.yield_target;
    let cdf_at = |sigma: f64| -> Result<f64> {
        combined_cdf(query.kind, p0, sigma, n, &inclusion, query.signal_frequency)
    };

    let seed = closed_form_seed(query, config, &inclusion, p0);
    let mut lo = seed / 4.0;
    let mut hi = seed * 4.0;
    let mut expansions = 0;
    while cdf_at(lo)? < y {
        lo /= 4.0;
        expansions += 1;
        if expansions > 200 || lo < f64::MIN_POSITIVE {
            return Err(Error::NonConvergence(format!(
                "no sigma satisfies the yield near the closed-form seed {seed:e}"
            )));
        }
    }
    expansions = 0;
    while cdf_at(hi)? > y {
        hi *= 4.0;
        expansions += 1;
        if expansions > 200 || !hi.is_finite() {
            return Err(Error::NonConvergence(
                "yield is met for arbitrarily coarse steps; target is degenerate".into(),
            ));
        }
    }
    // lo passes (CDF >= y), hi fails. Bisect well past the 1e-9 contract.
    for _ in 0..200 {
        if (hi - lo) <= 1e-13 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if cdf_at(mid)? >= y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let sigma = lo;
    let step = sigma * 12f64.sqrt();
    Ok(StepSizeResult {
        sigma,
        step,
        step_in_lsb: (query.kind == MismatchKind::Offset).then(|| step / config.lsb()),
        query: *query,
    })
}

/// One point of a step-size-versus-target curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub target_db: f64,
    pub result: StepSizeResult,
}

/// Invert the yield across a range of targets (ascending dB).
pub fn sweep_step_vs_target(
    base: &YieldQuery,
    config: &AdcConfig,
    targets_db: &[f64],
) -> Result<Vec<SweepPoint>> {
    if targets_db.is_empty() {
        return Err(Error::InvalidInput("empty target range".into()));
    }
    if targets_db.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("targets must be strictly ascending".into()));
    }
    targets_db
        .iter()
        .map(|&target_db| {
            let query = YieldQuery {
                target_power_db: target_db,
                ..*base
            };
            Ok(SweepPoint {
                target_db,
                result: invert_yield(&query, config)?,
            })
        })
        .collect()
}
