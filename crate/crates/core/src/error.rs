use thiserror::Error;

use crate::exact::Nat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multinomial parts sum to {sum}, expected {n}")]
    PartsSumMismatch { n: usize, sum: usize },

    #[error("cannot partition an empty item list")]
    EmptyInput,

    #[error("exp is only defined here for series with zero constant term")]
    NonZeroConstantTerm,

    #[error("substitution requires an inner series with zero constant term")]
    NonZeroInnerConstant,

    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    /// `n!` times a series coefficient was not an integer. Always a bug.
    #[error("coefficient of x^{n} times {n}! is {value}, not an integer")]
    NonIntegral { n: usize, value: String },

    #[error("enumeration of {predicted} elements exceeds the budget of {budget}")]
    BudgetExceeded { predicted: Nat, budget: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed nested partition: {0}")]
    Malformed(String),
}
