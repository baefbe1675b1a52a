use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid sweep config: {0}")]
    InvalidConfig(String),

    #[error("matrix is not symmetric (max |a_ij - a_ji| = {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("network has no ties")]
    EmptyNetwork,

    #[error("network is incomplete: nodes {i} and {j} share no tie")]
    IncompleteNetwork { i: usize, j: usize },

    #[error("vector has no nonzero component")]
    ZeroVector,

    #[error("no finite-time blow-up: leading eigenvalue {lambda_max} is not positive")]
    NoBlowup { lambda_max: f64 },

    #[error("leading eigenvalue pair is numerically degenerate (relative gap {gap:e})")]
    DegenerateLeadingPair { gap: f64 },

    #[error("t = {t} is at or beyond the blow-up time t* = {t_star}")]
    BeyondBlowup { t: f64, t_star: f64 },

    #[error("resolvent ill-conditioned at t = {t} (cond {cond:e}, blow-up at t* = {t_star})")]
    IllConditioned { t: f64, cond: f64, t_star: f64 },

    #[error("integration overflow; last valid time t = {last_t}")]
    Overflow { last_t: f64 },

    #[error("transition boundary infeasible: discriminant {discriminant} < 0")]
    InfeasibleBoundary { discriminant: f64 },

    #[error("lambda = {lambda} lies inside the spectral band (|lambda| <= {gamma})")]
    InsideBand { lambda: f64, gamma: f64 },

    #[error("lambda = {lambda} is within {dist:e} of an eigenvalue")]
    NearPole { lambda: f64, dist: f64 },

    #[error("signal nu = {nu} below the detectability threshold {crit}; no root outside the band")]
    UndetectableSignal { nu: f64, crit: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code convention: 1 for configuration/input problems,
    /// 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_)
            | Error::InvalidConfig(_)
            | Error::Io(_)
            | Error::Parse(_)
            | Error::Json(_) => 1,
            _ => 2,
        }
    }
}
