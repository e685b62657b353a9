use thiserror::Error;

pub type Result<T, E = LtsError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LtsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The retained rows do not have full column rank. Indices are 0-based.
    #[error("rank-deficient subset {subset:?}: least squares fit is not unique")]
    SingularFit { subset: Vec<usize> },

    /// Least squares on a matrix without full column rank, before a subset is known.
    #[error("matrix does not have full column rank")]
    RankDeficient,

    #[error("degenerate tie: {count} subsets in relation exceed the cap of {cap}")]
    DegenerateTie { count: u128, cap: u128 },

    #[error("exhaustive enumeration needs C(n, h) = {count} subsets, above the cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("no border candidate found: {hint}")]
    NoCandidate { hint: String },

    #[error("every h-subset is rank-deficient")]
    NoRegularSubset,
}

impl LtsError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        LtsError::InvalidInput(msg.into())
    }
}
