use thiserror::Error;

/// Errors shared across the whole crate.
///
/// Witness outcomes are deliberately NOT errors: an indeterminate squeezing
/// report (denominator ≤ 0) is encoded in [`crate::witness::SqueezingReport`]
/// so that parameter sweeps can record it as an empty cell and keep going.
/// The closed-form scalar routines, which have no report struct to carry the
/// outcome, surface the same condition as [`Error::IndeterminateWitness`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("capacity exceeded: n = {n} emitters, cap is {cap} for a {kind} state")]
    CapacityExceeded {
        n: usize,
        cap: usize,
        kind: &'static str,
    },

    #[error("impossible detection: the requested photon record has (numerically) zero weight")]
    ImpossibleDetection,

    #[error("indeterminate witness: nonpositive denominator")]
    IndeterminateWitness,

    #[error("unsupported order {0}: distinct-index sums are implemented for orders 1..=4")]
    UnsupportedOrder(usize),

    #[error("no squeezing possible: the detection threshold exceeds n - 1")]
    NoSqueezingPossible,

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_)
            | Error::InvalidGeometry(_)
            | Error::InvalidParameter(_)
            | Error::UnsupportedOrder(_) => 2,
            Error::CapacityExceeded { .. } => 3,
            Error::ImpossibleDetection => 4,
            _ => 1,
        }
    }
}
