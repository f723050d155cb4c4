use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("invalid Coxeter matrix: {0}")]
    InvalidCoxeter(String),
    #[error("unknown group type `{0}`")]
    UnknownType(String),
    #[error("group exceeds cap of {cap} elements (infinite or too large)")]
    GroupExceedsCap { cap: usize },
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid diagram automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: String, right: String },
    #[error("p-canonical table missing for conversion to/from {0}")]
    TableMissing(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("element {element} is not in D_{side}({r},{t})")]
    NotInStringDomain { element: String, side: &'static str, r: usize, t: usize },
    #[error("star operations need 3 <= m < infinity, got m({r},{t}) = {m}")]
    UnsupportedPair { r: usize, t: usize, m: String },
    #[error("p = {p} is below the bound required for m = {m} (need p > {bound})")]
    PrimeBelowBound { p: u32, m: u32, bound: u32 },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("tableau shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
