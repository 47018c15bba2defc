use thiserror::Error;

/// Errors raised by the operator routines.
///
/// `NoSolution` and `RangeCriterion` are returned by constructors that need a
/// solvable problem; the predicates (`solvable`, `criterion`) report the same
/// dichotomy as plain values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (defect {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("not a fundamental symmetry: {0}")]
    NotInvolution(String),

    #[error("operator is not J-selfadjoint (defect {defect:.3e})")]
    NotJSelfadjoint { defect: f64 },

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("range criterion fails (residual {residual:.3e})")]
    RangeCriterion { residual: f64 },

    #[error("no solution exists: index criterion {lhs} != {rhs}")]
    NoSolution { lhs: usize, rhs: usize },

    #[error("numerical diagnostic: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err(what: impl Into<String>) -> Error {
    Error::Dimension(what.into())
}
