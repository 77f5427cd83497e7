use thiserror::Error;

use crate::plot::PlotError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tentlab_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for invalid input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Usage(_) | CliError::Plot(_) => 2,
            _ => 1,
        }
    }
}
