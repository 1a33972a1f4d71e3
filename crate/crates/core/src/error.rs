use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single rejected row from a delimited input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDiagnostic {
    /// 1-based line number in the source, header included.
    pub line: u64,
    pub message: String,
}

impl std::fmt::Display for RowDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("missing column `{0}` in header")]
    MissingColumn(String),

    #[error("{0}")]
    Row(RowDiagnostic),

    #[error("invalid ATC code `{0}`")]
    InvalidAtc(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("self-loop on `{0}`")]
    SelfLoop(String),

    #[error("duplicate edge `{0}`-`{1}` (weights must be pre-aggregated)")]
    DuplicateEdge(String, String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node `{0}` is not covered by the partition")]
    UncoveredNode(String),

    #[error("edge weight {0} is not a non-negative integer")]
    NonIntegralWeight(f64),

    #[error("undefined for this input: {0}")]
    Undefined(String),

    #[error("unsupported for directed networks: {0}")]
    DirectedUnsupported(&'static str),

    #[error("eigenvector centrality did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("division by zero weight on `{0}`-`{1}`")]
    ZeroWeight(String, String),

    #[error("edge `{0}`-`{1}` does not cross the bipartition")]
    SameSide(String, String),

    #[error("pajek parse error on line {line}: {message}")]
    Pajek { line: usize, message: String },
}
