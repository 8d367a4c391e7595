use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix `{0}` is not positive definite")]
    NotPositiveDefinite(&'static str),

    #[error("forms are not J-invariant (defect {0:.3e})")]
    NotCompatible(f64),

    #[error("J does not square to -I (defect {0:.3e})")]
    NotAlmostComplex(f64),

    #[error("singular fiber: least paired eigenvalue is {0:.3e}")]
    SingularFiber(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("form data is not diagonal")]
    NotDiagonal,

    #[error("{what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("weight is not strictly positive at s = {0}; use a limit strategy")]
    NonPositiveWeight(f64),

    #[error("grid resolution {grid} too coarse, need at least {required}")]
    AliasingRisk { grid: usize, required: usize },

    #[error("quadrature does not settle under refinement (ratio {ratio:.4})")]
    QuadratureDivergence { ratio: f64 },

    #[error("extrapolation fit is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("mass matrix is not Hermitian positive definite")]
    MassNotSpd,

    #[error("iterative eigensolver did not converge in {0} iterations")]
    ConvergenceFailure(usize),

    #[error("no 100x spectral gap around kernel tolerance {0:.3e}")]
    AmbiguousKernel(f64),

    #[error("no stable clustering at gap tolerance {0:.3e}")]
    NoStableClustering(f64),

    #[error("tail bound {tail:.3e} at t = {t} exceeds the requested accuracy")]
    InsufficientDepth { t: f64, tail: f64 },

    #[error("operands live on different coordinate spaces ({0} vs {1})")]
    GeometryMismatch(usize, usize),

    #[error("requested depth {depth} exceeds the {available} computed eigenpairs")]
    DepthExceeded { depth: usize, available: usize },

    #[error("Re x = {0} lies on or left of the convergence abscissa")]
    AbscissaViolation(f64),

    #[error("large-time tail could not be certified (bound {0:.3e})")]
    TailUncertified(f64),

    #[error("malformed matrix container: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
