//! Error type shared by the ring, series, and builder layers.

use thiserror::Error;

/// Everything that can go wrong while constructing or combining exact series.
///
/// Builders surface these as `BUILDER_ERROR` verification outcomes; the CLI
/// maps them to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Arithmetic attempted between elements of different coefficient rings.
    #[error("ring mismatch: {0}")]
    RingMismatch(&'static str),

    /// Inversion of an element that is not a unit in its ring.
    #[error("not a unit: {0}")]
    NotAUnit(String),

    /// Two series with different grading weights were combined.
    #[error("weight mismatch between series operands")]
    WeightMismatch,

    /// A coefficient was requested at or beyond the truncation order.
    #[error("coefficient at q^{index} requested but series is only known below weighted order {order}")]
    OutOfOrder { index: i64, order: i64 },

    /// A series or polynomial was evaluated at zero where a negative
    /// parameter power would require division by zero.
    #[error("zero substituted into parameter power {0}")]
    ZeroToNegativePower(i32),

    /// An infinite product whose factors do not gain weight cannot be
    /// truncated consistently.
    #[error("infinite product factor {0} has non-positive weight")]
    NonTerminatingProduct(String),

    /// The minimum weight of successive summands stopped increasing, so the
    /// sum does not converge as a formal series.
    #[error("summand minimum weight stalled for {0} consecutive terms; series specification diverges")]
    DivergentSpec(usize),

    /// An exponent polynomial produced a non-integer value.
    #[error("exponent {0} is not an integer")]
    NonIntegerExponent(String),

    /// A specification referenced parameters that the build context cannot
    /// supply (for example a parameter pochhammer in a univariate build).
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// An identity id not present in the registry.
    #[error("unknown identity id `{id}`; nearest matches: {nearest:?}")]
    UnknownId { id: String, nearest: Vec<String> },
}

pub type Result<T> = std::result::Result<T, Error>;
