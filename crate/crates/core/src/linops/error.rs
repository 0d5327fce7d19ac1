use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum LinopsError {
    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {allowed:e}")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("operator is not nilpotent: residual {residual:e} exceeds {allowed:e}")]
    NotNilpotent { residual: f64, allowed: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subspaces carry different metrics")]
    MetricMismatch,

    #[error("subspaces are not complementary: stacked basis has σ_min/σ_max = {singular_ratio:e}")]
    NotComplementary { singular_ratio: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,
}
