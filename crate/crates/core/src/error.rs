use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("mesh: {0}")]
    Mesh(String),

    #[error("element {element} is degenerate or inverted (volume {volume:e})")]
    DegenerateElement { element: usize, volume: f64 },

    #[error("inadmissible state: J = {jacobian:e} (must be positive)")]
    Inadmissible { jacobian: f64 },

    #[error("singular tangent: {0}")]
    SingularTangent(String),

    #[error("step failure at load factor {load_factor}: {reason}")]
    StepFailure { load_factor: f64, reason: String },

    #[error("{case} at refinement {refinement}: {source}")]
    Refinement {
        case: String,
        refinement: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown benchmark case `{0}`")]
    UnknownCase(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
