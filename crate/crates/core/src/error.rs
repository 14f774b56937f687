use alloc::string::String;

use crate::moduli::GammaKey;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A rational literal could not be parsed.
    #[error("cannot parse rational {0:?}")]
    Parse(String),

    /// Two series (or a series and a request) disagree on truncation order.
    #[error("series order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    /// `Σ i·n_i` is not divisible by `N`, so no admissible cover exists.
    #[error("stacky type is not admissible (rank r1 = {0} is not a nonnegative integer)")]
    Inadmissible(String),

    /// No initial values were supplied for this theory and stacky type.
    #[error("missing initial values for {0}")]
    MissingGamma(GammaKey),

    /// A non-stacky surface integral was requested without its one-point value.
    #[error("missing one-point initial value for genus {0}")]
    MissingInitial(u32),

    /// A surface block has weight `2i/N - 1/2 = 0`.
    #[error("degenerate surface weight: block {block} has 2i/N - 1/2 = 0 (N = {modulus})")]
    DegenerateWeight { block: u32, modulus: u32 },

    /// The coefficient system has no unique solution.
    #[error("singular coefficient system: {0}")]
    Singular(String),

    /// Two initial-value tables disagree on the same key.
    #[error("conflicting initial values for {0}")]
    GammaConflict(GammaKey),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
