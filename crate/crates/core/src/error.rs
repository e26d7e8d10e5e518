use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {0} out of range (supported: {1})")]
    Dimension(usize, &'static str),

    #[error("invalid exponent: {0}")]
    Exponent(String),

    #[error("cannot parse rational {0:?}")]
    Rational(String),

    #[error("invalid assignment: {0}")]
    Assignment(String),

    #[error("invalid field: {0}")]
    Field(String),

    #[error("grid too small: axis {axis} has {count} points, need at least {needed}")]
    GridTooSmall { axis: usize, count: usize, needed: usize },

    #[error(
        "scale {scale} on axis {axis} has step {step:.3e} below grid spacing {spacing:.3e}; \
         lower the upper scale to at most {max_scale} or refine the grid"
    )]
    Resolution {
        axis: usize,
        scale: i32,
        step: f64,
        spacing: f64,
        max_scale: i32,
    },

    #[error("invalid scale range: {0}")]
    ScaleRange(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no counterexample in this region: {0}")]
    NoCounterexample(String),

    #[error("unknown gallery function {0:?}")]
    UnknownFunction(String),

    #[error("transform size N={0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("memory budget exceeded: {points} samples requested, budget is {budget}; try N <= {suggested}")]
    MemoryBudget {
        points: usize,
        budget: usize,
        suggested: usize,
    },

    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
