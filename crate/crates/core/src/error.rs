use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Location-tagged syntax error. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An operation needed coefficient index `needed` of a series that only
    /// knows `available` coefficients.
    #[error("insufficient truncation: coefficient index {needed} is required but only {available} coefficients are known")]
    InsufficientTruncation { needed: usize, available: usize },
    #[error("denominator vanishes at the origin of `{var}`")]
    DenominatorSingularAtOrigin { var: String },
    #[error("NotRationalWithinWindow r_max={r_max}: no recurrence of order <= {r_max} fits the {order} known coefficients")]
    NotRationalWithinWindow { r_max: usize, order: usize },
    #[error("NotPolynomialWithinWindow: coefficient {last} of {order} is nonzero, no degree bound can be certified", last = .order - 1)]
    NotPolynomialWithinWindow { order: usize },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("division is not exact")]
    InexactDivision,
    #[error("exceptional-set generator is the zero polynomial")]
    ZeroGenerator,
    #[error("denominator polynomial of quotient {index} is zero")]
    ZeroDenominatorPolynomial { index: usize },
    #[error("duplicate sample point {0}")]
    DuplicateSamplePoint(String),
    #[error("samples are inconsistent with parameter degree bound {bound} at point {point}")]
    InconsistentSamples { bound: usize, point: String },
    #[error("need at least {needed} distinct samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("series has no coefficients")]
    EmptySeries,
    #[error("variable `{0}` is not allowed here")]
    UnexpectedVariable(String),
    #[error("no value given for variable `{0}`")]
    UnboundVariable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// Mathematical findings (as opposed to operational failures).
    pub fn is_finding(&self) -> bool {
        matches!(self, Error::NotRationalWithinWindow { .. } | Error::NotPolynomialWithinWindow { .. })
    }
}
