use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude must lie in [0, 1], got {0}")]
    InvalidAmplitude(f64),

    #[error("angle must lie in [0, pi/2], got {0}")]
    InvalidAngle(f64),

    #[error("number of shots must be positive")]
    ZeroShots,

    #[error("ancilla count m = {0} outside supported range {1}..={2}")]
    AncillaCount(u32, u32, u32),

    #[error("tally has {ones} ones out of {shots} shots")]
    InvalidTally { shots: u64, ones: u64 },

    #[error("{name} must lie in (0, 1), got {value}")]
    OpenUnitInterval { name: &'static str, value: f64 },

    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("log-likelihood is not finite at the estimate {0}")]
    NonFiniteLikelihood(f64),

    #[error("iteration limit {limit} exceeded after {rounds} rounds (k = {k})")]
    IterationLimit { limit: usize, rounds: usize, k: u64 },
}
