//! Spur and replica analysis for time-interleaved ADCs.
//!
//! An N-way interleaved ADC runs N sub-converters round-robin at f_s/N.
//! Offset, gain, and timing-skew mismatches among the sub-ADCs show up in
//! the output spectrum as spurs on the k*f_s/N grid and as replicas of the
//! input around that grid, with amplitudes given by the DFT of the
//! per-sub-ADC mismatch sequence. This crate provides:
//!
//! - [`analytic`]: closed-form spur/replica prediction for a concrete
//!   device (offsets in dBFS, gain/skew replicas in dBc per tone);
//! - [`simulator`]: an exact time-domain capture-and-measure oracle,
//!   including exact-delay skew, for validating the predictions;
//! - [`statistics`]: per-bin and combined max-spur power CDFs under
//!   i.i.d. Gaussian mismatch;
//! - [`montecarlo`]: seeded empirical CCDFs, including the uniform-vs-
//!   Gaussian comparison that justifies the Gaussian worst-case model for
//!   calibrated devices;
//! - [`calibration`]: inversion of a (target level, yield) pair into the
//!   coarsest admissible calibration step size.
//!
//! Conventions: full-scale range [-1, 1]; 0 dBFS is the power of a
//! full-scale sine; spectra are single-sided; the forward DFT carries the
//! 1/N normalization so squared magnitudes are average powers.

pub mod analytic;
pub mod calibration;
pub mod dft;
pub mod error;
pub mod montecarlo;
pub mod simulator;
pub mod statistics;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    db, db_to_linear, AdcConfig, DistributionSpec, MismatchKind, MismatchSet, PowerReference,
    Spectrum, SpurKind, SpurPrediction, ToneSpec, YieldQuery,
};
