use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exhaustive mode requested but the algebra has no enumerator")]
    ExhaustiveUnavailable,
    #[error("invalid adjacency at cell [{row}][{col}]: {reason}")]
    InvalidAdjacency { row: usize, col: usize, reason: String },
    #[error("atom count {0} out of range 0..=5")]
    AtomCountOutOfRange(usize),
    #[error("cluster candidate is empty")]
    EmptyCandidate,
    #[error("element {0} is not an atom")]
    NotAnAtom(String),
    #[error("brute-force enumeration needs at most {limit} atoms, got {atoms}")]
    TooLargeForBrute { atoms: usize, limit: usize },
    #[error("the top element is bounded, so there is no cluster at infinity")]
    BoundedTop,
    #[error("malformed interval: {0}")]
    MalformedInterval(String),
    #[error("operands belong to different models")]
    ModelMismatch,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("result leaves the model carrier: {0}")]
    CarrierEscape(String),
    #[error("not a topology: {law} fails for {left:?} and {right:?}")]
    NotATopology { law: &'static str, left: Vec<String>, right: Vec<String> },
    #[error("subset is not dense: its closure is {closure:?}")]
    NotDense { closure: Vec<String> },
    #[error("not a delta-ideal: {0}")]
    NotDeltaIdeal(String),
    #[error("point set is not open in the dual topology")]
    NotOpen,
    #[error("axiom family {0} is not supported for this morphism kind")]
    UnsupportedFamilyForModel(String),
    #[error("operation needs a finite carrier")]
    InfiniteCarrier,
    #[error("morphisms are not composable: target of the first differs from source of the second")]
    NotComposable,
    #[error("morphism fails precondition {0}")]
    AxiomPreconditionFailed(String),
    #[error("map is not continuous: preimage of open set {0:?} is not open")]
    NotContinuous(Vec<String>),
    #[error("no left adjoint: Galois property fails at a={a}, b={b}")]
    NoAdjoint { a: String, b: String },
    #[error("syntax error in literal {literal:?}: {reason}")]
    Literal { literal: String, reason: String },
    #[error("operation needs a finite structure")]
    NotFinite,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn literal_error(literal: &str, reason: impl Into<String>) -> Error {
    Error::Literal { literal: literal.to_string(), reason: reason.into() }
}
