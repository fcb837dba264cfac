use thiserror::Error;

use crate::rootsys::Basis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root system type {family}{rank}")]
    InvalidType { family: String, rank: usize },

    #[error("realization `{realization}` does not apply to {family}{rank}")]
    InvalidRealization {
        realization: String,
        family: String,
        rank: usize,
    },

    #[error("simple roots do not form a finite crystallographic system: {0}")]
    NotCrystallographic(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis {0:?} is not available in this context")]
    BasisUnavailable(Basis),

    #[error("weight {weight} is not dominant")]
    NotDominant { weight: String },

    #[error("weight {weight} is not integral")]
    NotIntegral { weight: String },

    #[error("invalid Vogan diagram: {0}")]
    InvalidDiagram(String),

    #[error("matrix is not an involution")]
    NotInvolution,

    #[error("invalid simple-root index {index} (rank {rank})")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown group preset `{0}`")]
    UnknownPreset(String),

    #[error("no pencil direction configured for this group")]
    NoPencilDirection,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid parabolic: {0}")]
    InvalidParabolic(String),
}
