use thiserror::Error;

/// Errors raised by the approximation, synthesis and simulation stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature needs at least {required} points for half order {half_order}, got {got}")]
    TooFewQuadraturePoints {
        half_order: usize,
        required: usize,
        got: usize,
    },

    #[error("operation not supported for {0}")]
    Unsupported(&'static str),

    #[error("Taylor coefficient sum diverges ({0}); use a smaller delta or the analytic extension")]
    DivergentSum(f64),

    #[error(
        "no even q <= {q_max} reaches eps = {eps:e} (best q = {best_q}, error = {best_error:e})"
    )]
    SearchCeiling {
        q_max: usize,
        eps: f64,
        best_q: usize,
        best_error: f64,
    },

    #[error("verification failed: measured error {measured:e} exceeds {tolerance:e}")]
    VerificationFailed { measured: f64, tolerance: f64 },

    #[error("filter parameter search failed: {0}")]
    FilterSearch(String),

    #[error("root finding did not converge after {iterations} iterations (max residual {max_residual:e})")]
    RootsNotConverged {
        iterations: usize,
        max_residual: f64,
    },

    #[error("root {root} has no partner 1/r* within {tolerance:e} (closest distance {distance:e})")]
    RootPairing {
        root: num_complex::Complex64,
        distance: f64,
        tolerance: f64,
    },

    #[error("series exceeds unit modulus on [-pi, pi]: max |g| = {0}")]
    NotNormalized(f64),

    #[error("pulse synthesis residual {residual:e} at step {step}")]
    PeelResidual { step: usize, residual: f64 },

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("operator norm {0} exceeds 1; supply an eigenvalue interval remap")]
    NormTooLarge(f64),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalizedState(f64),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True for numerical failures (search ceilings, non-convergence) as
    /// opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Stage { source, .. } => source.is_numerical(),
            Error::SearchCeiling { .. }
            | Error::VerificationFailed { .. }
            | Error::FilterSearch(_)
            | Error::RootsNotConverged { .. }
            | Error::RootPairing { .. }
            | Error::PeelResidual { .. }
            | Error::DivergentSum(_) => true,
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
