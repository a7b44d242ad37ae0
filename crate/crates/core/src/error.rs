use thiserror::Error;

/// Errors produced by the estimation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown transform `{0}`")]
    UnknownTransform(String),

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("malformed specification `{spec}`: {reason}")]
    MalformedSpec { spec: String, reason: String },

    #[error("value {value} lies outside the domain {domain}")]
    OutsideDomain { value: f64, domain: String },

    #[error("observation {index} with value {value} lies outside the domain {domain}")]
    ObservationOutsideDomain {
        index: usize,
        value: f64,
        domain: String,
    },

    #[error("value {value} lies outside the image {image}")]
    OutsideImage { value: f64, image: String },

    #[error("derivative undefined at {0}")]
    DerivativeUndefined(f64),

    #[error("expected an interval in the {expected} frame")]
    WrongFrame { expected: &'static str },

    #[error("sample is empty")]
    EmptySample,

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {needed} observations, got {got}")]
    InsufficientSample { needed: usize, got: usize },

    #[error("group `{0}` is empty")]
    EmptyGroup(String),

    #[error("no moment oracle for model {model} under transform {transform}")]
    OracleUnavailable { model: String, transform: String },

    #[error("quadrature did not converge: estimate {estimate}, error {error}")]
    QuadratureNonConvergence { estimate: f64, error: f64 },

    #[error("design matrix is rank deficient (singular value ratio {ratio:e})")]
    RankDeficient { ratio: f64 },

    #[error("fitted transformed value {raw} lies outside the image {image}")]
    FittedOutsideImage { raw: f64, image: String },

    #[error("target unachievable on grid; best achievable value {best} at parameter {parameter}")]
    TargetUnachievable { best: f64, parameter: f64 },

    #[error("degenerate data: {0}")]
    DegenerateData(&'static str),

    #[error("{method} did not converge after {iterations} iterations")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
    },
}

impl Error {
    /// True for failures of a numerical routine, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. }
                | Error::RankDeficient { .. }
                | Error::NoConvergence { .. }
                | Error::OracleUnavailable { .. }
                | Error::FittedOutsideImage { .. }
                | Error::TargetUnachievable { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
