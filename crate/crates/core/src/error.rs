use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("invalid name `{0}` (expected [a-z][A-Za-z0-9_]*)")]
    InvalidName(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("edge {sub} -> {sup} has degree {degree}, expected a value in (0, 1]")]
    DegreeOutOfRange {
        sub: String,
        sup: String,
        degree: String,
    },
    #[error("cycle detected: {}", .0.join(" -> "))]
    CycleDetected(Vec<String>),
    #[error("not a lattice: {s} and {t} have incomparable maximal lower bounds {}", .maximal.join(", "))]
    NotALattice {
        s: String,
        t: String,
        maximal: Vec<String>,
    },
    #[error("edge {sub} -> {sup} is not crisp")]
    NotCrisp { sub: String, sup: String },
    #[error("similarity between {a} and {b} is not symmetric or not reflexive")]
    InvalidSimilarity { a: String, b: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown sort `{name}` at byte {pos}")]
    UnknownSort { name: String, pos: usize },
    #[error("unknown feature `{name}` at byte {pos}")]
    UnknownFeature { name: String, pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("term is not normal: {0}")]
    NotNormal(String),
    #[error("clause is not solved: {0}")]
    NotSolved(String),
    #[error("clause is not rooted: {0}")]
    NotRooted(String),
    #[error("graph is malformed: {0}")]
    MalformedGraph(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
}

/// Errors from the line-oriented ontology and interpretation formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
