use thiserror::Error;

/// Errors raised by the library. Semantic outcomes (UNSAT, reduction
/// failure, timeouts) are not errors and are reported through return values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    InvalidVertex { vertex: usize, vertex_count: usize },

    #[error("loop at vertex {0} is not allowed in this graph")]
    LoopNotAllowed(usize),

    #[error("cannot contract adjacent vertices {0} and {1}")]
    AdjacentContraction(usize, usize),

    #[error("cannot contract a vertex with itself ({0})")]
    SelfContraction(usize),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("literal refers to variable {var} but the formula has {variable_count} variables")]
    MalformedLiteral { var: usize, variable_count: usize },

    #[error("oracle refused: search space of {space} assignments exceeds cap {cap}")]
    OracleCapExceeded { space: u128, cap: u128 },

    #[error("generation failed: {0}")]
    GenerationFailed(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
