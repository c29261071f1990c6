use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{file}:{line}: malformed record: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },

    #[error("unknown player id {0}")]
    UnknownPlayer(String),

    #[error("pitcher {0} has ambidextrous throwing hand and no padj record; cannot resolve matchup")]
    UnresolvedPitcherHand(String),

    #[error("unknown park {0}")]
    UnknownPark(String),

    #[error("unknown season {0}")]
    UnknownSeason(i32),

    #[error("unknown matchup label {0}")]
    UnknownMatchup(String),

    #[error("fit did not converge in {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        /// Objective value at each outer iteration, for post-mortem.
        trajectory: Vec<f64>,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("park {park} has no observations for matchup {matchup}")]
    NoObservations { park: String, matchup: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 3 for data problems, 4 for
    /// convergence failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } => 4,
            _ => 3,
        }
    }
}
