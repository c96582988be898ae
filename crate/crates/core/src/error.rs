use thiserror::Error;

/// Which singular set a pair of bodies fell into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingularKind {
    Collision,
    Antipodal,
}

impl std::fmt::Display for SingularKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularKind::Collision => write!(f, "collision"),
            SingularKind::Antipodal => write!(f, "antipodal"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{kind} singularity between bodies {i} and {j}")]
    SingularPair {
        i: usize,
        j: usize,
        kind: SingularKind,
    },

    #[error("operation undefined at the point at infinity")]
    InfinitePoint,

    #[error("identity transformation fixes every point")]
    IdentityTransformation,

    #[error("degenerate matrix (determinant {0:e})")]
    DegenerateMatrix(f64),

    #[error("homographic loxodromic element needs a scaling function")]
    MissingScaling,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    /// Errors caused by malformed input rather than by the mathematics.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Json(_) | Error::Csv(_) | Error::Parse(_) | Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
