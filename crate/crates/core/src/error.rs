use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group order {0}")]
    InvalidOrder(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} {size} exceeds the limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("cannot draw {requested} distinct elements from a set of {available}")]
    InfeasibleSample { requested: usize, available: usize },

    #[error("shape mismatch: expected {expected}, got {actual}")]
    Shape { expected: String, actual: String },

    #[error("conjugating matrix is not unitary (max residual {0:e})")]
    NonUnitaryConjugator(f64),

    #[error("group axiom violated: {0}")]
    GroupAxiom(String),

    #[error("enumeration budget exceeded: C({n}, {s}) = {count} supports > budget {budget}")]
    EnumerationBudget {
        n: usize,
        s: usize,
        count: u128,
        budget: u128,
    },

    #[error("column {0} has zero norm")]
    DegenerateColumn(usize),

    #[error("measurement operator is zero")]
    DegenerateOperator,

    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(expected: impl ToString, actual: impl ToString) -> Self {
        Error::Shape {
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}
