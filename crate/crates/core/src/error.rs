use thiserror::Error;

/// Errors shared across the construction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("design file: {0}")]
    DesignFile(String),

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("development produces a block with repeated elements: base block {base_index} under shift {shift}")]
    RepeatedElements { base_index: usize, shift: usize },

    #[error("design is not super-simple: blocks {0} and {1} share more than two elements")]
    NotSuperSimple(usize, usize),

    #[error("trade collections have mismatched sizes or block lengths")]
    MismatchedTrade,

    #[error("design has no trades")]
    NoTrades,

    #[error("matrix is not trade-based: rows {row_a} and {row_b} share positive entries in columns {col_a} and {col_b}")]
    NotTradeBased {
        row_a: usize,
        row_b: usize,
        col_a: usize,
        col_b: usize,
    },

    #[error("column weight target {target} unreachable for column {col} with {ones} ones and entry cap {cap}")]
    WeightTarget {
        col: usize,
        ones: usize,
        target: u32,
        cap: u32,
    },

    #[error("base matrix entry {value} at ({row}, {col}) exceeds cap {cap}; entries of 3 or more force 6-cycles")]
    EntryCap {
        row: usize,
        col: usize,
        value: u32,
        cap: u32,
    },

    #[error("exponent search exhausted after exploring {explored} nodes")]
    SearchExhausted { explored: u64 },

    #[error(
        "{rows} rows are not divisible into slices of {m}; valid row counts per slice: {valid:?}"
    )]
    NonDivisiblePartition {
        rows: usize,
        m: usize,
        valid: Vec<usize>,
    },

    #[error("no 4-cycle-free schedule found within {attempts} attempts (best attempt placed {best_placed} rows)")]
    ScheduleSearch { attempts: u64, best_placed: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("alist parse error at line {line}: {msg}")]
    Alist { line: usize, msg: String },

    #[error("matrix text parse error at line {line}: {msg}")]
    MatrixText { line: usize, msg: String },

    #[error("non-finite LLR at position {0}")]
    NonFiniteLlr(usize),

    #[error("matrix has an all-zero column ({0}); not usable as a parity-check matrix")]
    ZeroColumn(usize),

    #[error("label {0:?} not found")]
    UnknownLabel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
