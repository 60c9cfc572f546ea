use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("cyclic bindings involving `{0}`")]
    CyclicBindings(String),

    #[error("unknown symmetry case `{0}`")]
    UnknownCase(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("point ({t}, {v}, {w}) is outside the chart domain: {reason}")]
    OutOfDomain { t: f64, v: f64, w: f64, reason: String },

    #[error("transversal field is tangent (relative determinant {0:e})")]
    NotTransversal(f64),

    #[error("candidate normal is not equiaffine: transversal component {0:e} of its derivative")]
    NotEquiaffine(f64),

    #[error("frame construction failed: {0}")]
    DegenerateFrame(String),

    #[error("curve synthesis aborted at t = {t}: {reason}")]
    Synthesis { t: f64, reason: String },

    #[error("curve parameter {t} outside sampled range [{start}, {end}]")]
    CurveRange { t: f64, start: f64, end: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
