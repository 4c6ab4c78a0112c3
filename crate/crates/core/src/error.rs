use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible: requested {requested} directions but at most {max} are available for gamma = {gamma} in R^{dim}")]
    Infeasible {
        requested: usize,
        max: usize,
        gamma: f64,
        dim: usize,
    },

    #[error("characteristic root solve failed at s = {s}, t = {t}: {reason}")]
    Convergence { s: f64, t: f64, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Evaluation requested at or beyond the breaking time of some wave.
    #[error("t = {t} is not before the breaking time {t_break} of wave {wave}")]
    TimeDomain { t: f64, t_break: f64, wave: usize },

    #[error("speed factor mismatch on wave {wave}: expected {expected}, found {found}")]
    Mismatch {
        wave: usize,
        expected: f64,
        found: f64,
    },

    #[error("orthogonality error: {0}")]
    Orthogonality(String),

    /// Points where the wave sum S is not positive.
    #[error("positivity violated at {count} point(s); first: {first:?}")]
    Positivity { count: usize, first: Vec<Vec<f64>> },

    /// Finite-volume cells with non-positive density.
    #[error("vacuum in {count} cell(s); first (i, j): {first:?}")]
    Vacuum {
        count: usize,
        first: Vec<(usize, usize)>,
    },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Positivity { .. } | Error::Vacuum { .. } => 3,
            Error::TimeDomain { .. } => 4,
            Error::Convergence { .. } | Error::Io(_) => 1,
            _ => 2,
        }
    }
}
