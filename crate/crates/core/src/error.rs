//! Error type shared by all core modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({src}, {dst}) references a node outside 0..{num_nodes}")]
    EdgeOutOfRange {
        src: usize,
        dst: usize,
        num_nodes: usize,
    },

    #[error("node index {index} out of range for graph with {num_nodes} nodes")]
    NodeOutOfRange { index: usize, num_nodes: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:e})")]
    NonSymmetric { max_asymmetry: f64 },

    #[error(
        "spectrum cap exceeded: {num_rows} rows > dense cap {cap}; \
         rerun with --allow-large to compute a full dense spectrum anyway"
    )]
    SpectrumCapExceeded { num_rows: usize, cap: usize },

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("graph must have at least 2 nodes for centrality (got {num_nodes})")]
    TooFewNodes { num_nodes: usize },

    #[error("budget {budget} out of range 1..={num_nodes}")]
    BudgetOutOfRange { budget: usize, num_nodes: usize },

    #[error("validation size {requested} exceeds the {available} non-train nodes")]
    ValidationTooLarge { requested: usize, available: usize },

    #[error("mask selects no nodes")]
    EmptyMask,

    #[error("dropout probability {0} outside [0, 1)")]
    InvalidDropout(f64),

    #[error("invalid probability for {name}: {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("{context} must be at least 1")]
    ZeroDimension { context: &'static str },

    #[error("non-finite gradient in {layer} at ({row}, {col}): {value}")]
    NonFiniteGradient {
        layer: &'static str,
        row: usize,
        col: usize,
        value: f64,
    },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("{file}:{line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },

    #[error("dataset mismatch for {field}: expected {expected}, found {actual}")]
    MetaMismatch {
        field: String,
        expected: usize,
        actual: usize,
    },

    #[error("missing dataset file {0}")]
    MissingFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
