use alloc::string::String;

/// Failure modes shared by every analysis in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("eigenvalue {eigenvalue} lies within tolerance of interval endpoint {endpoint}")]
    EigenvalueOnBoundary { eigenvalue: f64, endpoint: f64 },
    #[error("numerical computation failed: {0}")]
    ComputationFailed(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid tolerances: {0}")]
    InvalidTolerance(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("hypothesis violated: F vanishes at x = {at}")]
    HypothesisViolated { at: f64 },
    #[error("graph is not connected")]
    GraphDisconnected,
    #[error("subspaces are not linearly independent (epsilon {epsilon:e})")]
    NotIndependent { epsilon: f64 },
    #[error("sum of subspaces is not the whole space (dim {dim} of {ambient})")]
    SumNotFull { dim: usize, ambient: usize },
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("spectral gap {gap:e} is below the decision threshold")]
    GapTooSmall { gap: f64 },
    #[error("image of A is not contained in image of B (residual {residual:e})")]
    RangeNotIncluded { residual: f64 },
    #[error("operator norm {norm} is not below 2")]
    NormTooLarge { norm: f64 },
    #[error("enumeration needs {needed} matrix products, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("operator is not invertible (smallest eigenvalue {min_eig:e})")]
    NotInvertible { min_eig: f64 },
    #[error("diagonal coefficient alpha[{index}][{index}] is not a positive real")]
    DiagonalNotPositive { index: usize },
    #[error("image of operator {index} leaves its subspace (residual {residual:e})")]
    RangeConditionViolated { index: usize, residual: f64 },
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "non_square",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::EigenvalueOnBoundary { .. } => "eigenvalue_on_boundary",
            Error::ComputationFailed(_) => "computation_failed",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidTolerance(_) => "invalid_tolerance",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::HypothesisViolated { .. } => "hypothesis_violated",
            Error::GraphDisconnected => "graph_disconnected",
            Error::NotIndependent { .. } => "not_independent",
            Error::SumNotFull { .. } => "sum_not_full",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::GapTooSmall { .. } => "gap_too_small",
            Error::RangeNotIncluded { .. } => "range_not_included",
            Error::NormTooLarge { .. } => "norm_too_large",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NotInvertible { .. } => "not_invertible",
            Error::DiagonalNotPositive { .. } => "diagonal_not_positive",
            Error::RangeConditionViolated { .. } => "range_condition_violated",
            Error::UnknownFamily(_) => "unknown_family",
        }
    }
}
