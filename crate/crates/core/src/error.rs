use thiserror::Error;

/// Errors raised while building, simulating or checking pose circuits.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid spec: {0}")]
    InvalidSpec(String),

    #[error("grid has no nonzero cell")]
    EmptyGrid,

    #[error("cell (z={z}, y={y}, x={x}) lies outside the {side_z}x{side_y}x{side_x} lattice")]
    CellOutOfRange {
        z: u32,
        y: u32,
        x: u32,
        side_z: u64,
        side_y: u64,
        side_x: u64,
    },

    #[error("duplicate cell (z={z}, y={y}, x={x})")]
    DuplicateCell { z: u32, y: u32, x: u32 },

    #[error("invalid register layout: {0}")]
    InvalidLayout(String),

    #[error("register widths differ ({0} vs {1})")]
    WidthMismatch(usize, usize),

    #[error("increment offset 2^{p} does not fit a {width}-qubit register")]
    IncrementOutOfRange { p: usize, width: usize },

    #[error("qubit {qubit} out of range for a {num_qubits}-qubit system")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("malformed gate: {0}")]
    InvalidGate(String),

    #[error("{requested} qubits exceeds the limit of {limit}")]
    TooManyQubits { requested: usize, limit: usize },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("atom {index} ({element}) falls outside the grid at cell {cell:?}")]
    AtomOutsideGrid {
        index: usize,
        element: String,
        cell: [i64; 3],
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
