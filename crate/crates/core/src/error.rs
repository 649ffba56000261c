use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("{what} exceeds the size guard ({got} > {limit})")]
    SizeGuard {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("invalid embedding scheme: {0}")]
    InvalidScheme(String),
    #[error("faces not cycles: face {0} repeats a vertex")]
    FacesNotCycles(usize),
    #[error("isolated vertex {0}")]
    IsolatedVertex(usize),
    #[error("no vertex-internal matching: vertex {0} has odd degree")]
    OddDegree(usize),
    #[error("not a perfect matching: {0}")]
    NotMatching(String),
    #[error("zero-pattern violation at ({0}, {1})")]
    ZeroPattern(usize, usize),
    #[error("Pfaffian of odd order {0}")]
    OddOrder(usize),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("singular pivot block (|Pf| = {0:e})")]
    SingularPivot(f64),
    #[error("contracted edge set contains a cycle")]
    ContractsCycle,
    #[error("invalid minor transform: {0}")]
    InvalidTransform(String),
    #[error("basis not sparse: three site-equation forms meet at vertex {0}")]
    NotSparse(usize),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("graph is not 4-regular")]
    NotFourRegular,
    #[error("edge equations inconsistent at edge {edge}: {a} vs {b}")]
    InconsistentEdge { edge: usize, a: f64, b: f64 },
    #[error("basis not independent: sign system has no solution")]
    BasisDependent,
    #[error("not in even subalgebra")]
    NotInEvenSubalgebra,
    #[error("not planar; use nonplanar route")]
    NotPlanar,
    #[error("scheme not orientable-derived; use complex sum")]
    NotOrientableDerived,
    #[error("scheme/matrix invalid: {0}")]
    SchemeInvalid(String),
    #[error("nonpositive weight {value} on edge {edge}")]
    NonPositiveWeight { edge: usize, value: f64 },
    #[error("degenerate reduction (|Pf| = {0:e})")]
    DegenerateReduction(f64),
    #[error("this method needs an embedding scheme")]
    MissingScheme,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
