use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: {requested} qubits requested, limit is {limit}")]
    Capacity { requested: usize, limit: usize },

    #[error(
        "nondeterministic measurement: most likely outcome has probability {max_probability:.3e}"
    )]
    NondeterministicMeasurement { max_probability: f64 },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("construction error: {what} deviates from unitary by {deviation:.3e}")]
    Construction { what: &'static str, deviation: f64 },

    #[error("syndrome table generation failed: {0}")]
    TableGeneration(String),

    #[error("code property violated: {0}")]
    CodeProperty(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("recovery failure: recovery block purity {purity:.12} below threshold")]
    RecoveryFailure { purity: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("milestone `{stage}` failed: {detail}")]
    Milestone { stage: &'static str, detail: String },
}
