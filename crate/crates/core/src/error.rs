use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Failures reported by the analysis routines.
///
/// Variants split into validation problems (bad input shapes or parameters)
/// and numerical failures (overflow, non-convergence); [`Error::is_numerical`]
/// tells them apart.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value at k = {index}")]
    Overflow { index: usize },

    #[error("equation is not Schur stable (spectral radius {spectral_radius})")]
    Unstable { spectral_radius: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("roots are not closed under conjugation")]
    NotConjugateClosed,

    #[error("roots {first} and {second} are closer than {min_gap}")]
    NearCoincidentRoots { first: f64, second: f64, min_gap: f64 },

    #[error("bound violated at k = {k}: {detail}")]
    BoundViolated { k: usize, detail: String },
}

impl Error {
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Overflow { .. } | Error::NoConvergence { .. } | Error::BoundViolated { .. }
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
