use thiserror::Error;

/// Errors produced by analysis, simulation, and inversion routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A configuration or input value violates its domain constraints.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A mismatch sequence does not match the interleave factor.
    #[error("mismatch length {got} != N={expected}")]
    LengthMismatch { expected: usize, got: usize },

    /// A tone lies outside the first Nyquist zone.
    #[error("tone at {frequency} Hz outside first Nyquist zone (0, {nyquist} Hz)")]
    ToneOutOfBand { frequency: f64, nyquist: f64 },

    /// A predicted frequency does not land on the capture's bin grid.
    #[error("frequency {frequency} Hz is not on the {bin_width} Hz bin grid (incoherent setup)")]
    OffGrid { frequency: f64, bin_width: f64 },

    /// An iterative solver failed to bracket or converge on a root.
    #[error("non-convergence: {0}")]
    NonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
