use thiserror::Error;

use crate::rootdata::Family;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rank {rank} for family {family}: {reason}")]
    InvalidRank {
        family: Family,
        rank: usize,
        reason: &'static str,
    },
    #[error("operation not defined for family {0}")]
    UnsupportedFamily(Family),
    #[error("polynomials are over different variable tables")]
    VarTableMismatch,
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` already present in the table")]
    DuplicateVariable(String),
    #[error("variable `{0}` is not allowed here")]
    ForbiddenVariable(String),
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("quotient is not zero-dimensional (no pure power of `{0}` among leading terms)")]
    NotZeroDimensional(String),
    #[error("empty generator list")]
    EmptyIdeal,
    #[error("polynomial is not weighted-homogeneous")]
    NotHomogeneous,
    #[error("linear system is infeasible: {0}")]
    Infeasible(String),
    #[error("operators have ranks {0} and {1}")]
    RankMismatch(usize, usize),
    #[error("cutoff {cutoff} is too small for an operator shifting degree by {shift}")]
    CutoffTooSmall { cutoff: u32, shift: u32 },
    #[error("non-finite state at step {0}")]
    NonFinite(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
