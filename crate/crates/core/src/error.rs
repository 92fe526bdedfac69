use alloc::string::String;

/// Errors raised while building, measuring or simulating circuits.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid operands for {gate}: {reason}")]
    Operand { gate: &'static str, reason: String },

    #[error("metric requires a decomposed circuit, found macro gate `{0}`")]
    MacroInMetric(&'static str),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("amplitudes not normalized: squared norm {0}")]
    Normalization(f64),

    #[error("negative amplitude {value} at index {index}")]
    NegativeAmplitude { index: usize, value: f64 },

    #[error("insufficient workspace: need {needed} qubits, have {available}")]
    Capacity { needed: usize, available: usize },

    #[error("infeasible spec: {0}")]
    Infeasible(String),

    #[error("value outside domain: {0}")]
    Domain(String),

    #[error("complement qubits are entangled with the subset (residual {0:e})")]
    NotAProduct(f64),

    #[error("refusing to materialize {qubits} qubits (limit {limit})")]
    TooLarge { qubits: usize, limit: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
