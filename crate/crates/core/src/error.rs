use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("evaluation point {point:?} lies outside the open domain")]
    PointOutsideDomain { point: Vec<f64> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "eigenfunction series requested at t = {t:.6e}, below its validity window t >= {min_t:.6e} \
         (0.05 · min side²); the truncated expansion loses positivity there"
    )]
    BelowValidityWindow { t: f64, min_t: f64 },

    #[error("numerical failure: {0}")]
    Numerics(String),
}

pub type Result<T> = std::result::Result<T, Error>;
