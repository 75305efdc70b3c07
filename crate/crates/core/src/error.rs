use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operation is undefined on the empty set")]
    EmptySet,
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("vertices do not describe a convex polygon")]
    NotConvex,
    #[error("radius must be finite and non-negative, got {0}")]
    BadRadius(f64),
    #[error("area must be positive, got {0}")]
    NonpositiveArea(f64),
    #[error("area {area} exceeds the area {domain} of the domain")]
    AreaExceedsDomain { area: f64, domain: f64 },
    #[error("value {value} outside the admissible range [{lo}, {hi}]")]
    OutOfRegime { value: f64, lo: f64, hi: f64 },
    #[error("time {t} outside the trace range [0, {end}]")]
    OutOfRange { t: f64, end: f64 },
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("budget is not critical: {0}")]
    NotCritical(String),
    #[error("domain is degenerate: {0}")]
    DegenerateDomain(String),
    #[error("malformed geometry: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
