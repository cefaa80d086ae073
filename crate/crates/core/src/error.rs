use num_complex::Complex64;
use thiserror::Error;

use crate::dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("{operation} needs jet order at least {needed}, got {order}")]
    OrderUnderflow {
        operation: &'static str,
        order: usize,
        needed: usize,
    },

    #[error("jet order {0} exceeds the supported maximum {max}", max = crate::jet::MAX_ORDER)]
    OrderTooHigh(usize),

    #[error("coordinate axis {0} out of range 0..=3")]
    AxisOutOfRange(usize),

    #[error("singular composition: {primitive} of a jet whose value is {value}")]
    SingularComposition {
        primitive: &'static str,
        value: Complex64,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("scenario: {0}")]
    Scenario(#[from] ScenarioError),

    #[error("point {point:?} lies outside the sample region")]
    OutsideRegion { point: [f64; 4] },

    #[error(
        "degenerate field: |iF1 + F2| = {value:.3e} at the anchor point \
         (threshold {threshold:.1e}); elimination of psi2 is undefined"
    )]
    DegenerateField { value: f64, threshold: f64 },

    #[error("phase undefined: field value {value} vanishes at the anchor point")]
    PhaseUndefined { value: Complex64 },

    #[error("expected a real jet, imaginary part reaches {max_imag:.3e} (relative)")]
    NonReal { max_imag: f64 },

    #[error("no field satisfying |iF1 + F2| >= {bound} found after {retries} attempts")]
    Infeasible { bound: f64, retries: usize },

    #[error("finite difference step {step:.3e} too small for derivative order {order}")]
    StepUnderflow { step: f64, order: usize },

    #[error("finite difference oracle supports derivative order <= 4, got {0}")]
    FdOrderTooHigh(usize),

    #[error("{0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("missing required field `{0}`")]
    MissingField(String),
    #[error("field `{field}`: {source}")]
    Expression {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("empty region on axis {axis}: min {min} > max {max}")]
    EmptyRegion { axis: char, min: f64, max: f64 },
    #[error("min_coefficient must be positive, got {0}")]
    NonPositiveMinCoefficient(f64),
    #[error("unknown scenario `{0}`")]
    Unknown(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}
