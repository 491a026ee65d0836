use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid operating time {0} s (must be finite and > 0)")]
    InvalidTime(f64),

    #[error("time {t} s outside trajectory range [0, {t_op}] s")]
    OutOfRange { t: f64, t_op: f64 },

    #[error("slew projection x_T/D_T = {ratio} is outside [-1, 1]")]
    ProjectionOutOfRange { ratio: f64 },

    #[error("slew angle {theta_deg} deg is too close to 0 or 180 deg")]
    SlewSingularity { theta_deg: f64 },

    #[error("no feasible operating time up to {t_max} s")]
    Infeasible { t_max: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("metric domain error: {0}")]
    MetricDomain(String),

    #[error("statistics need at least 2 values, got {0}")]
    StatsDomain(usize),

    #[error("integration step {dt} s exceeds limit {max_dt} s for the fastest swing mode")]
    StepSize { dt: f64, max_dt: f64 },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
