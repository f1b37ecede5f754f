use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected} qubits, got {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("width must be between 1 and {max}, got {width}")]
    InvalidWidth { width: usize, max: usize },

    #[error("value {bits:#b} does not fit in {width} bits")]
    BitsOutOfRange { bits: u32, width: usize },

    #[error("qubit index {qubit} out of range for {width} qubits")]
    QubitOutOfRange { qubit: usize, width: usize },

    #[error("two-qubit gate acts twice on qubit {0}")]
    RepeatedQubit(usize),

    #[error("non-finite angle {0}")]
    NonFiniteAngle(f64),

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("expected {expected} entries, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("gate {0} has no classical label action")]
    NotClassical(String),

    #[error("hadamard at position {0} leaves wire labels undefined")]
    HadamardInTrace(usize),

    #[error("template is not programmable: {0}")]
    NotProgrammable(String),

    #[error("{what} limited to {cap} qubits, got {width}")]
    OverCap { what: &'static str, cap: usize, width: usize },

    #[error("boolean function is neither constant nor balanced")]
    NeitherConstantNorBalanced,

    #[error("marked set must be non-empty and proper, got {marked} of {total}")]
    InvalidMarkedSet { marked: usize, total: usize },

    #[error("negative epsilon {0}")]
    NegativeEpsilon(f64),

    #[error("search budget must be positive")]
    EmptyBudget,

    #[error("search budget exhausted after {nodes} nodes; no template with fewer than {lower_bound} blocks exists")]
    BudgetExhausted { nodes: u64, lower_bound: usize },

    #[error("{0}")]
    Incompatible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
