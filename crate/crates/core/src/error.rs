use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("point with norm {norm} lies outside the ball of radius {radius}")]
    OutsideBall { norm: f64, radius: f64 },

    #[error("point {0:?} is not a member of the parameter space")]
    NotInSpace(Vec<f64>),

    #[error(
        "space holds up to {size} grid points, above the enumeration cap of {cap}; \
         use the branch-and-bound oracle instead"
    )]
    SpaceTooLarge { size: f64, cap: u64 },

    #[error("oracle returned an uncertified solution; the privacy analysis assumes an exact minimizer")]
    InexactOracle,

    #[error("gamma = {gamma} exceeds 1: the dataset is too small (or epsilon too large) for the sample-average analysis")]
    GammaTooLarge { gamma: f64 },

    #[error("datasets are not neighbors: {0}")]
    NotNeighbors(String),

    #[error("cannot discretize mechanism output: {0}")]
    Discretization(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("row {row}: {message}")]
    BadRow { row: usize, message: String },

    #[error("class `{0}` has no rows")]
    EmptyClass(String),

    #[error("could not draw {wanted} points with margin {margin} within {attempts} attempts")]
    MarginUnattainable { wanted: usize, margin: f64, attempts: usize },

    #[error("MPS line {line}: {message}")]
    Mps { line: usize, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("run {run}: {source}")]
    Run { run: usize, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
