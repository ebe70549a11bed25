use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{column}: expected {}, found {found}", expected.join(" | "))]
    Syntax { line: usize, column: usize, expected: Vec<String>, found: String },
    #[error("{line}:{column}: reserved word `{word}` cannot be used as an atom")]
    ReservedAtom { line: usize, column: usize, word: String },
    #[error("invalid atom name `{0}`")]
    InvalidAtom(String),
    #[error("atom `{0}` is not in the valuation alphabet")]
    AlphabetViolation(String),
    #[error("valuation depth {available} exhausted (needed {needed})")]
    DepthExhausted { needed: usize, available: usize },
    #[error("budget of {limit} exceeded while {what}")]
    BudgetExceeded { limit: u64, what: String },
    #[error("valuation file line {line}: {message}")]
    ValuationFormat { line: usize, message: String },
    #[error("spec file line {line}: {message}")]
    SpecFormat { line: usize, message: String },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("unsupported connective `{0}`")]
    UnsupportedConnective(String),
    #[error("variety {0} is not supported by this operation")]
    UnsupportedVariety(String),
    #[error("sequence lengths differ: {0}")]
    LengthMismatch(String),
    #[error("atom `{0}` occurs in both substitution sets")]
    OverlappingSets(String),
    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
