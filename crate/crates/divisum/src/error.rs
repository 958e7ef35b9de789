//! Error type shared by all modules.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the numeric kernels.
///
/// Saturation (a series that hit its term budget before meeting the
/// requested tail bound) is deliberately *not* an error: evaluations return
/// a flagged partial result instead, so callers can still inspect the value
/// and the unmet bound.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (e.g. a nome outside (0, 1), a nonpositive series argument).
    Domain(String),
    /// A table or buffer could not be allocated at the requested size.
    Capacity(String),
    /// Evaluation at or across a pole (zeta/hurwitz at s = 1, gamma at 0).
    Pole(String),
    /// An input failed a declared cross-consistency contract
    /// (e.g. divisor-sum coefficients not matching the supplied series).
    InputContract(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Capacity(msg) => write!(f, "capacity error: {msg}"),
            Error::Pole(msg) => write!(f, "pole error: {msg}"),
            Error::InputContract(msg) => write!(f, "input contract violation: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
