use thiserror::Error;

use crate::algebra::FamilyTag;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{family} needs n >= {min}, got n = {n}")]
    InvalidDimension { family: FamilyTag, n: usize, min: usize },

    #[error("algebra is not nilpotent; dims so far {dims:?}")]
    NotNilpotent { dims: Vec<usize> },

    #[error("invalid automorphism parameters: {0}")]
    InvalidParams(String),

    /// 1-based position of the first entry that no parameter choice reproduces.
    #[error("matrix is not in the {family} automorphism family: entry ({row}, {col}) is {found}, expected {expected}")]
    NotInFamily {
        family: FamilyTag,
        row: usize,
        col: usize,
        found: String,
        expected: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
