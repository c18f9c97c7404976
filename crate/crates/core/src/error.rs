use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degeneracy word {0:?} is not strictly decreasing")]
    NotNormalForm(Vec<usize>),
    #[error("dimension {0} exceeds the supported maximum")]
    DimensionTooLarge(usize),
    #[error("operator index {index} out of range for a {dim}-simplex")]
    OperatorOutOfRange { index: usize, dim: usize },
    #[error("simplex {0} does not belong to this simplicial set")]
    UnknownSimplex(String),
    #[error("malformed simplicial set: {0}")]
    Malformed(String),
    #[error("boundary of a 0-simplex is empty")]
    EmptyBoundary,
    #[error("cofibration leg is not injective on generators: {0}")]
    NonInjectiveCofibration(String),
    #[error("empty relator in presentation")]
    EmptyRelator,
    #[error("unknown letter `{0}` in relator")]
    UnknownLetter(String),
    #[error("cannot suspend the empty simplicial set")]
    EmptySuspension,
    #[error("maps do not share a target")]
    MismatchedTargets,
    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("target is not a standard simplex")]
    NotASimplex,
    #[error("subset is not closed under faces: {0}")]
    NotClosed(String),
    #[error("monoid table is invalid: {0}")]
    InvalidMonoid(String),
    #[error("simplicial category is invalid: {0}")]
    InvalidCategory(String),
    #[error("diagram is invalid: {0}")]
    InvalidDiagram(String),
    #[error("colimit mismatch: {0}")]
    ColimitMismatch(String),
    #[error("word syntax error at {pos}: {msg}")]
    WordSyntax { pos: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
