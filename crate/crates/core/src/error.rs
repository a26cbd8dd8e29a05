use thiserror::Error;

/// Errors raised by the algebra, quadrature and experiment layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("non-integer coefficient at position {pos}")]
    NonIntegerCoefficient { pos: usize },

    #[error("polynomial has degree 0")]
    DegreeZero,

    #[error("root finder did not converge after {iterations} iterations (residual 2^{log2_residual:.1})")]
    NonConvergence {
        iterations: usize,
        log2_residual: f64,
    },

    #[error("exponent must exceed 1 (got {0})")]
    InvalidExponent(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: value {value:e}, error estimate {error:e} after {subdivisions} subdivisions")]
    QuadratureNonConvergence {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("depth {depth} exceeds the cap of {cap}")]
    DepthCap { depth: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
