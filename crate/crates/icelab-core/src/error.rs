//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("singular spectral parameters: |1 - t*u| = {value:.3e} is below 1e-14")]
    SingularParameter { value: f64 },

    #[error("gauge factor must be nonzero")]
    ZeroGaugeFactor,

    #[error(
        "parameters too close: min pairwise gap {gap:.3e} < {min_gap:.3e}; \
         perturb the inputs or use a confluent form"
    )]
    CoincidentParameters { gap: f64, min_gap: f64 },

    #[error("enumeration domain too large: {cells} vertices exceeds the {max} limit")]
    SizeLimit { cells: usize, max: usize },

    #[error("series diverges: max |x_i y_j| = {value:.6} >= 1")]
    Divergence { value: f64 },

    #[error("contour certificate failed: {0}")]
    ContourCertificate(String),

    #[error("quadrature did not converge: doubling resolution still changed the value by {delta:.3e}")]
    NonConvergence { delta: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("site probability {value:.6} outside (0,1) at site ({i},{j})")]
    ProbabilityRange { value: f64, i: usize, j: usize },

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("argument {value} outside supported range [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },

    #[error("eigensolver exceeded its iteration cap")]
    EigenNonConvergence,

    #[error("not enough effective samples: got {got}, need {need}")]
    InsufficientSamples { got: usize, need: usize },
}
