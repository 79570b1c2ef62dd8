use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {what} must be positive, got {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("no finite supremum of {what} on [{t_lo}, inf)")]
    NoFiniteSup { what: &'static str, t_lo: f64 },

    #[error("step size underflow at t = {t} (y = {y}, h = {h})")]
    StepUnderflow { t: f64, y: f64, h: f64 },

    #[error("vacuum: tau = {tau} in cell {cell} at t = {t}")]
    Vacuum { cell: usize, t: f64, tau: f64 },

    #[error("CFL number {cfl} exceeds the admissible limit {limit}")]
    Cfl { cfl: f64, limit: f64 },

    #[error("characteristic left the domain at t = {t}, x = {x}")]
    LeftDomain { t: f64, x: f64 },

    #[error("point ({x}, {t}) lies outside the computed space-time slab")]
    OutsideSlab { x: f64, t: f64 },

    #[error("insufficient samples: need at least {need}, got {got}")]
    InsufficientSamples { need: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
