use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid bath parameters: {0}")]
    InvalidBath(String),

    #[error(
        "grid too small for `{label}`: boundary |W| = {boundary:.3e} on the {edge} edge \
         exceeds 1e-12 of the peak {peak:.3e}"
    )]
    GridTooSmall {
        label: String,
        edge: &'static str,
        boundary: f64,
        peak: f64,
    },

    #[error("numeric blow-up at t = {t}: field contains NaN or Inf")]
    NumericBlowup { t: f64 },

    #[error("invalid evolution config: {0}")]
    Config(String),

    #[error("malformed grid file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
