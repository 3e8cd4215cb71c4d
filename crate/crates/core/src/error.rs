use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point outside domain: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("matrix not positive semidefinite: min eigenvalue {min} against max {max}")]
    NotPsd { min: f64, max: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
