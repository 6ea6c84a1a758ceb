use thiserror::Error;

/// Everything that can go wrong while building or checking a structure.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("domain error in {op}: `{expr}` evaluates to {value}")]
    Domain { op: &'static str, expr: String, value: f64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("chart mismatch: {0}")]
    ChartMismatch(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("jet order {requested} exceeds the supported maximum {max}")]
    OrderTooHigh { requested: usize, max: usize },

    #[error("singular frame (|det| = {det:e})")]
    SingularFrame { det: f64 },

    #[error("singular metric (|det| = {det:e})")]
    SingularMetric { det: f64 },

    #[error("non-symmetric metric: component ({0}, {1}) differs from ({1}, {0})")]
    NonSymmetricMetric(usize, usize),

    #[error("degenerate Legendre transform: |G_pp| = {0:e}")]
    DegenerateLegendre(f64),

    #[error("sampling exhausted: {accepted} of {draws} draws satisfied the guards")]
    SamplingExhausted { accepted: usize, draws: usize },

    #[error("guard violated: {0}")]
    GuardViolation(String),

    #[error("heat equation violated: |beta_t + beta_yy| = {0:e}")]
    HeatResidual(f64),

    #[error("gauge violation: {0}")]
    GaugeViolation(String),

    #[error("psi-equation residual {0:e} exceeds tolerance")]
    PsiResidual(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
