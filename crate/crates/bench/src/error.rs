#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Estimator(#[from] iqae::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unexpected csv layout: {0}")]
    Schema(String),
}
