use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("nu = {nu} lies outside the dual domain [0, {upper}]")]
    NuOutOfDomain { nu: f64, upper: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("infeasible moment vector: {0}")]
    InfeasibleMoments(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("empty sample list")]
    EmptySamples,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need at least 2 arms, got {0}")]
    TooFewArms(usize),

    #[error("reward {0} is outside [0, 1]")]
    RewardOutOfRange(f64),

    #[error("reward recorded for arm {got}, but arm {expected} was selected")]
    WrongArm { expected: usize, got: usize },

    #[error("horizon {horizon} is shorter than the number of arms {arms}")]
    HorizonTooShort { horizon: u64, arms: usize },

    #[error("traces do not share checkpoints")]
    MismatchedCheckpoints,
}
