use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unstable queue: arrival rate {arrival_rate} >= service rate {service_rate}")]
    UnstableQueue { arrival_rate: f64, service_rate: f64 },

    #[error("arrival at {arrival} precedes the previous arrival at {previous}")]
    OutOfOrderArrival { arrival: f64, previous: f64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("simulation aborted: {0}")]
    Aborted(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by bad input rather than a failed run.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::InvalidParameter(_) | Error::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
