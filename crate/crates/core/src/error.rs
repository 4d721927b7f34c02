use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("{0} is not defined for the zero element")]
    ZeroElement(&'static str),
    #[error("ad is not nilpotent on this element")]
    NotNilpotent,
    #[error("element is not homogeneous of an admissible degree: {0}")]
    Inhomogeneous(String),
    #[error("incompatible module/order: {0}")]
    Incompatible(String),
    #[error("expected a 1-dimensional solution space, found dimension {0}")]
    NullspaceDim(usize),
    #[error("element is not in the subspace: {0}")]
    NotInSubspace(String),
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("malformed input: {0}")]
    Format(String),
    #[error("division by an identically zero expression")]
    DivisionByZero,
    #[error("jet order {0} exceeds the declared bound")]
    OrderOverflow(usize),
    #[error("not a symmetry: {0}")]
    NotSymmetry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
