use thiserror::Error;

/// Errors raised by the algebra, state and inclusion layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {violation:.3e})")]
    NotHermitian { violation: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("function undefined at eigenvalue {eigenvalue:.6e}")]
    Domain { eigenvalue: f64 },

    #[error("argument must be strictly positive, got {0}")]
    NonPositive(f64),

    #[error("span is not closed under multiplication (worst product residual {residual:.3e})")]
    NotClosed { residual: f64 },

    #[error("span is not closed under adjoint (residual {residual:.3e})")]
    NotSelfAdjoint { residual: f64 },

    #[error("span does not contain the identity (residual {residual:.3e})")]
    NotUnital { residual: f64 },

    #[error("element lies outside the algebra (relative residual {residual:.3e})")]
    NotInAlgebra { residual: f64 },

    #[error("block structure recovery failed: {0}")]
    Decomposition(String),

    #[error("trace weights must be strictly positive")]
    NonFaithfulTrace,

    #[error("total mass {got} differs from the declared mass {expected}")]
    Mass { expected: f64, got: f64 },

    #[error("density is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("the two functionals live on different algebras")]
    AlgebraMismatch,

    #[error("operation requires a factor, got {blocks} blocks")]
    NotFactor { blocks: usize },

    #[error("the functional is not faithful")]
    NotFaithful,

    #[error("invalid conditional expectation: {0}")]
    InvalidExpectation(String),

    #[error("subspace does not contain the identity (residual {residual:.3e})")]
    IdentityNotInSubspace { residual: f64 },

    #[error("incompatible tower expectations at level {level} (residual {residual:.3e})")]
    IncompatibleTower { level: usize, residual: f64 },

    #[error("dual expectation check failed: {0}")]
    DualValidation(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("ensemble dimension must be at least 1")]
    EmptyEnsemble,

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
