use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at {point}: the reduced denominator vanishes there")]
    Pole { point: String },

    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("side {n} exceeds the enumeration ceiling {ceiling}; use the count formula instead")]
    EnumerationCeiling { n: usize, ceiling: usize },

    #[error("side {n} exceeds the supported ceiling {ceiling} for {what}")]
    SideCeiling {
        what: &'static str,
        n: usize,
        ceiling: usize,
    },

    #[error("term budget exceeded: {what} needs about {estimate} terms, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        estimate: u128,
        budget: u64,
    },

    #[error("entry ({row}, {col}) is not invertible but appears with a negative exponent for ASM {asm}")]
    SingularEntry { asm: String, row: usize, col: usize },

    #[error("matrix has odd side {0}; the Pfaffian needs an even side")]
    OddSide(usize),

    #[error("matrix is not antisymmetric at ({row}, {col})")]
    NotAntisymmetric { row: usize, col: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("weight {weight} exceeds the degree ceiling {ceiling}")]
    DegreeCeiling { weight: usize, ceiling: usize },

    #[error("invalid hypermatrix: {0}")]
    InvalidHyperMatrix(String),

    #[error("entry function failed at index {index:?}: {message}")]
    EntryFunction { index: Vec<usize>, message: String },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid alternating sign matrix: {0}")]
    InvalidAsm(String),

    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("cache I/O failure on {path}: {message}")]
    Cache { path: String, message: String },
}
