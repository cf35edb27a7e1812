use thiserror::Error;

/// Errors raised by the estimators, the simulator and the series container.
#[derive(Debug, Error)]
pub enum LrdError {
    #[error("time series must contain at least one value")]
    EmptySeries,

    #[error("non-finite value {value} at index {index}")]
    NonFiniteValue { index: usize, value: f64 },

    #[error("series too short: need at least {required} values, got {actual}")]
    SeriesTooShort { required: usize, actual: usize },

    #[error("degenerate regression design: {0}")]
    DegenerateDesign(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("circulant embedding failed: eigenvalue {eigenvalue} below tolerance")]
    EmbeddingFailure { eigenvalue: f64 },

    #[error("exp({argument}) overflows at index {index}")]
    OverflowValue { index: usize, argument: f64 },

    #[error("block length {n2} exceeds series length {n}")]
    WindowExceedsSeries { n2: usize, n: usize },

    #[error("invalid window [{n1}, {n2}]: {reason}")]
    InvalidWindow {
        n1: usize,
        n2: usize,
        reason: &'static str,
    },

    #[error("block variance S_l^2 is zero at block length {length}")]
    DegenerateBlockVariance { length: usize },

    #[error("theta = {0} outside (-2, 0)")]
    OutOfRangeTheta(f64),

    #[error("periodogram ordinate at Fourier index {index} is zero")]
    ZeroPeriodogramOrdinate { index: usize },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = LrdError> = std::result::Result<T, E>;
