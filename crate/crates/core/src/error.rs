use thiserror::Error;

use crate::quiver::ValidationReport;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("cannot read scalar `{0}`")]
    BadScalar(String),
    #[error("scalar {0} must be nonzero")]
    ZeroScalar(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow label `{0}`")]
    DuplicateArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("quiver has no vertices")]
    Empty,
    #[error("quiver is not gentle: {0}")]
    NotGentle(ValidationReport),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DslError {
    #[error("{line}:{column}: parse error: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {message}")]
    Semantic {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StringError {
    #[error("not a string: {0}")]
    NotAString(String),
    #[error("not a band: {0}")]
    NotABand(String),
    #[error("cannot read string literal `{text}`: {reason}")]
    Syntax { text: String, reason: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("condition (o) fails at the vertex, so the family is not known to be finite; {witness} revisits a vertex (pass a length cap)")]
    InfiniteFamily { witness: String },
    #[error("string {0} does not start at the anchor vertex")]
    NotAnchored(String),
    #[error("strings starting at the vertex are not determined by their endpoint")]
    PreconditionIStar,
    #[error("the vertex has two incoming or two outgoing arrows, or its arrows are not related")]
    PreconditionIIa,
    #[error("walk search exceeded {0} states")]
    SearchCap(usize),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("representations live over different quivers")]
    MixedQuivers,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a morphism: square at arrow `{0}` does not commute")]
    NotAMorphism(String),
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum JordanError {
    #[error("endomorphism is not nilpotent at vertex `{0}`")]
    NotNilpotent(String),
    #[error("search space of size {size} exceeds the exhaustive budget {budget}")]
    BudgetExceeded { size: String, budget: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("module is not in the expected class: {0}")]
    NotInClass(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    String(#[from] StringError),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("both theorems hold at the vertex; there is nothing to witness")]
    NoFailure,
    #[error("witness search failed: {0}")]
    InternalSearchFailure(String),
    #[error("witness verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RecoverError {
    #[error("no module in the class has this generic Jordan form: {0}")]
    NoSolution(String),
    #[error("several modules share this generic Jordan form: {0}")]
    AmbiguityBug(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    String(#[from] StringError),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("cannot read module expression at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("cannot read Jordan data `{text}`: {reason}")]
    Syntax { text: String, reason: String },
    #[error("unknown vertex `{0}` in Jordan data")]
    UnknownVertex(String),
}
