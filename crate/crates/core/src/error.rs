use thiserror::Error;

use crate::formula::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),
    #[error("{what} index {index} out of range 1..={len}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("partition {blocks:?} does not cover {n} qubits")]
    PartitionMismatch { blocks: Vec<usize>, n: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("dense representation refused for {n} qubits (limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("occurrence (level {level}, position {position}) does not belong to this tree")]
    StaleOccurrence { level: usize, position: usize },
    #[error("formula `{formula}` is not a subformula of context `{context}`")]
    NotSubformula { formula: String, context: String },
    #[error("atoms {0:?} are shared between the context and the appended formula")]
    SharedAtoms(Vec<u32>),
    #[error("formula `{0}` uses a non-Boolean connective")]
    NonBoolean(String),
    #[error("no meaning supplied for atom q{0}")]
    MissingAtomMeaning(u32),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("invalid model spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
