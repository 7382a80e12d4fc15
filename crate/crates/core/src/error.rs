use thiserror::Error;

/// Every failure the library can report.
///
/// Validation errors (`GammaOutOfRange`, `MuTooSmall`, `InvalidParameter`)
/// name the offending key so the command line can surface them verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma = {gamma} must lie in (0, s) = (0, {s})")]
    GammaOutOfRange { gamma: f64, s: f64 },

    #[error("mu = {mu} must exceed 3/2")]
    MuTooSmall { mu: f64 },

    #[error("{key}: {reason}")]
    InvalidParameter { key: &'static str, reason: String },

    #[error("spectral tail overflow at cutoff N = {cutoff} (t = {t:.6e}, tail fraction {fraction:.3e}); rerun with N >= {required}")]
    TailOverflow {
        cutoff: usize,
        required: usize,
        t: f64,
        fraction: f64,
    },

    #[error("step at t = {t:.6e} grew the L2 norm by a factor {growth:.3e}")]
    StepUnstable { t: f64, growth: f64 },

    #[error("remainder quadrature under-resolved: halving the step changed the integral by {relative_change:.1}%")]
    QuadratureUnderResolved { relative_change: f64 },

    #[error("bootstrap polynomial has no real roots (discriminant {discriminant:.6e})")]
    NoRealRoots { discriminant: f64 },

    #[error("target norm {target} not reached before k1 exceeded the cap {cap}")]
    TargetUnreachable { target: f64, cap: usize },

    #[error("oracle mismatch: sup L2 distance {distance:.3e} exceeds {tolerance:.1e}")]
    OracleMismatch { distance: f64, tolerance: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Variant name, used in command-line diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::GammaOutOfRange { .. } => "GammaOutOfRange",
            Error::MuTooSmall { .. } => "MuTooSmall",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::TailOverflow { .. } => "TailOverflow",
            Error::StepUnstable { .. } => "StepUnstable",
            Error::QuadratureUnderResolved { .. } => "QuadratureUnderResolved",
            Error::NoRealRoots { .. } => "NoRealRoots",
            Error::TargetUnreachable { .. } => "TargetUnreachable",
            Error::OracleMismatch { .. } => "OracleMismatch",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }

    /// True for errors caused by a bad configuration rather than a failed run.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::GammaOutOfRange { .. } | Error::MuTooSmall { .. } | Error::InvalidParameter { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
