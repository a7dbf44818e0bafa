use thiserror::Error;

/// Errors produced by the geometric and numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("parametrization is near-singular: speed {speed:e} at sample {index} (floor {floor:e})")]
    Regularity { index: usize, speed: f64, floor: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("boundary edges disagree at corner {corner} by {gap:e}")]
    CornerMismatch { corner: &'static str, gap: f64 },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("solver did not converge: residual {residual:e} after {iterations} iterations")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("flow stopped at t = {time}: {reason}")]
    SingularityStop { time: f64, reason: String },

    #[error("quaternion norm {norm} deviates from 1")]
    Norm { norm: f64 },

    #[error("lifted path drifted {drift:e} from the base path")]
    ProjectionDrift { drift: f64 },

    #[error("vertical profile is not periodic: gap {gap:e}")]
    Periodicity { gap: f64 },

    #[error("path-ordered reconstructions disagree by {gap:e}; field is not flat")]
    Flatness { gap: f64 },

    #[error("configuration error: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}
