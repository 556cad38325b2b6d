use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's domain.
    #[error("{0}")]
    Domain(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    /// A search that should succeed did not; carries diagnostics.
    #[error("internal error: {0}")]
    Internal(String),
    #[error("state budget exceeded: {explored} states explored, budget {budget}")]
    Budget { explored: usize, budget: usize },
    #[error("step limit of {0} exceeded without a verdict")]
    StepLimit(usize),
    #[error("unknown corpus entry `{0}`")]
    UnknownCorpus(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
