use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("symbol is not symmetric in the trailing variables: {0}")]
    NotSymmetric(String),

    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not normal (residual {residual:e})")]
    NotNormal { residual: f64 },

    #[error("covariance is not Hermitian positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("Planck parameter must be positive, got {0}")]
    NonPositiveH(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degree {degree} exceeds the supported bound {bound}")]
    DegreeTooLarge { degree: u32, bound: u32 },

    #[error("enumeration of {size} configurations exceeds the resource guard")]
    ResourceGuard { size: u128 },

    #[error("kernel series did not converge within {terms} terms")]
    NoConvergence { terms: usize },

    #[error("truncation cutoff {cutoff} is below the required {required}")]
    TruncationInadequate { cutoff: usize, required: usize },

    #[error("non-finite value in Monte Carlo evaluation at sample {sample}")]
    NonFinite { sample: usize },

    #[error("unsupported symbol: {0}")]
    UnsupportedSymbol(String),

    #[error("Hermitian eigenvalue {0:e} is not positive")]
    NotPositive(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
