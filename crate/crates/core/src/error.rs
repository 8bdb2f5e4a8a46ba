use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has a nonzero constant term and cannot be divided by t")]
    NonzeroConstantTerm,

    #[error("division by zero")]
    ZeroDivisor,

    #[error("moment table of functional v{functional} exhausted: order {order} requested, {available} available")]
    MomentTableExhausted {
        functional: usize,
        order: usize,
        available: usize,
    },

    #[error("functional index {index} out of range 1..={r}")]
    FunctionalIndexOutOfRange { index: usize, r: usize },

    /// `n` is the size of the vanishing leading principal minor of `M^[shift]`.
    #[error("leading principal minor of size {n} of the moment matrix M^[{shift}] vanishes")]
    SingularLeadingMinor { shift: usize, n: usize },

    #[error("no bidiagonal factorisation: alpha_{index} = 0")]
    NoBidiagonalFactorisation { index: usize },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("series g_{series} is known to order {order}, coefficient {needed} requested")]
    InsufficientOrder {
        series: usize,
        needed: usize,
        order: i64,
    },

    #[error("alpha_{index} requested but only {available} coefficients are available")]
    AlphaIndexOutOfRange { index: usize, available: usize },

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("parse error: {0}")]
    Parse(String),
}
