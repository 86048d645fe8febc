use thiserror::Error;

/// Errors produced anywhere in the zero-block detection pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZmdError {
    #[error("non-integral variable degree: M*d_M = {product} is not divisible by L = {l}")]
    NonIntegralDegree { product: usize, l: usize },
    #[error("infeasible graph: {0}")]
    InfeasibleGraph(String),
    #[error("unrealizable degree distribution: {0}")]
    UnrealizableDistribution(String),
    #[error("invalid probability {name} = {value}")]
    InvalidProbability { name: &'static str, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),
    #[error("indeterminate ratio: {0}")]
    IndeterminateRatio(String),
    #[error("unreachable target P_WZD {target}: minimum achievable is {floor}")]
    UnreachableTarget { target: f64, floor: f64 },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for ZmdError {
    fn from(e: std::io::Error) -> Self {
        ZmdError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ZmdError>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ZmdError::InvalidProbability { name, value })
    }
}
