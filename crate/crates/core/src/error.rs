use thiserror::Error;

/// Errors produced by the lattice, interpolation, and verification layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Two values live over different numbers of blown-up points.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An exact integer computation would have wrapped around.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// A divisor literal (or similar textual input) is malformed.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A caller-supplied parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Random point sampling failed to produce a valid configuration.
    #[error("sampling failed: {0}")]
    Sampling(String),

    /// An internal invariant was violated; indicates a bug or a degenerate
    /// random sample that survived all retries.
    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn checked_add(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

pub(crate) fn checked_sub(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow(what))
}

pub(crate) fn checked_mul(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}
