use thiserror::Error;

/// Errors raised by the exact and brute-force routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `N_{d,ℓ}` is odd, so no point of `U_{n,ℓ}` can be a zero and the
    /// closed forms do not apply.
    #[error("N_{{{d},{ell}}} = C({d}+{ell}, {d}) is odd")]
    OddN { d: u64, ell: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// Exact evaluation would exceed the configured term budget.
    #[error("exact evaluation needs about {needed} term operations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    /// Enumeration would exceed the configured class cap.
    #[error("enumeration of {needed} classes exceeds cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("search over {needed} variables exceeds bound {bound}")]
    BoundExceeded { needed: usize, bound: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The two powers of two in the large-d selection rule coincide.
    #[error("digit clash at d = {d}: 2^{v2} and 2^{exponent} coincide")]
    DigitClash { d: u64, v2: u32, exponent: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
