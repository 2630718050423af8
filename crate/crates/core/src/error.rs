use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum LieError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: String, found: String },

    #[error("non-finite entry produced by {0}")]
    NonFinite(&'static str),

    #[error("matrix is not Hermitian (asymmetry {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("spectrum meets the branch cut of the principal logarithm")]
    Branch,

    #[error("construction error: {0}")]
    Construction(String),

    #[error("basis is not closed under the bracket: worst pair ({i}, {j}) has residual {residual:.3e}")]
    Closure { i: usize, j: usize, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("element escapes the algebra (residual {residual:.3e})")]
    Membership { residual: f64 },

    #[error("no generic element found: centralizer bracket norm {bracket_norm:.3e}")]
    Genericity { bracket_norm: f64 },

    #[error("weight space of dimension {found} (expected {expected}) at weight {weight:?}")]
    Multiplicity {
        expected: usize,
        found: usize,
        weight: Vec<f64>,
    },

    #[error("element is not regular: roots {vanishing:?} vanish on it")]
    Regularity { vanishing: Vec<usize> },

    #[error("simple root extraction failed: {0}")]
    SimpleRoots(String),

    #[error("non-crystallographic entry {value:.6} at ({i}, {j})")]
    NonCrystallographic { i: usize, j: usize, value: f64 },

    #[error("Weyl group generation failed: {0}")]
    Generation(String),

    #[error("degenerate plane (area {area:.3e})")]
    DegeneratePlane { area: f64 },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("metric is not Einstein: deviation {deviation:.3e}")]
    EinsteinFailure { deviation: f64 },

    #[error("canonical form extraction failed: {0}")]
    CanonicalForm(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = LieError> = std::result::Result<T, E>;

impl LieError {
    pub(crate) fn dim(expected: impl ToString, found: impl ToString) -> Self {
        LieError::Dimension {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
