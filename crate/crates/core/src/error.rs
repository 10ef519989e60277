use thiserror::Error;

/// Errors raised by the symbolic engine.
///
/// Failed checks (an action law that does not hold, a morphism that mixes
/// weights) are reported through verdict values, not through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot mix cyclotomic orders {0} and {1}")]
    MixedCyclotomicOrders(u32, u32),
    #[error("cyclotomic order must be positive")]
    ZeroCyclotomicOrder,
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable `{0}` is unbound")]
    UnboundVariable(String),
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("negative exponent on non-parameter variable `{0}`")]
    LaurentNotAllowed(String),
    #[error("negative power of `{0}` requires a monomial image")]
    NonMonomialLaurent(String),
    #[error("expression is not polynomial: {0}")]
    NotPolynomial(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("jet order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("jet with zero linear coefficient is not invertible")]
    NotInvertible,
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid action family: {0}")]
    InvalidAction(String),
    #[error("input is not an action: {0}")]
    NotAnAction(String),
    #[error("action does not descend to level {level}: component of `{coordinate}` involves dropped coordinates")]
    DoesNotDescend { level: u32, coordinate: String },
    #[error("vector field is not of weight {expected}")]
    WrongWeight { expected: i64 },
    #[error("linear part is not a sum of complementary projectors: {0}")]
    ProjectorFailure(String),
    #[error("coordinate change could not be inverted: {0}")]
    InversionFailed(String),
    #[error("not in normal form at `{coordinate}`: {detail}")]
    NotNormalForm { coordinate: String, detail: String },
    #[error("singular block: {0}")]
    SingularBlock(String),
    #[error("complex homogeneity structure is not nice at level {level}")]
    NotNice { level: u32 },
    #[error("complex homogenization incomplete at `{coordinate}`: residual {residual}")]
    ComplexHomogenizationFailed { coordinate: String, residual: String },
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
