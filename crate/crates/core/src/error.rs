use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable lists differ: [{left}] vs [{right}]")]
    VariableMismatch { left: String, right: String },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("Groebner basis exceeded {limit} elements")]
    BasisLimit { limit: usize },

    #[error("ideal is the unit ideal (no residue field)")]
    UnitIdeal,

    #[error("empty sequence")]
    EmptySequence,

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("localization violation: denominator {denominator} lies in the ideal ({ideal})")]
    LocalizationViolation { denominator: String, ideal: String },

    #[error("fraction coefficient {coefficient} is not an element of the local ring at ({ideal}); rewrite the denominator first")]
    FracCoefficient { coefficient: String, ideal: String },

    #[error("classes live over different denominators or points: {0}")]
    MismatchedSupport(String),

    #[error("unsupported case: {reason}")]
    Unsupported {
        reason: String,
        /// Rendered cofactor decomposition that led to the refusal, when one was computed.
        decomposition: Vec<String>,
    },

    #[error("boundaries land at different points: {0}")]
    DifferentPoints(String),

    #[error("invalid scene: {field}: {message}")]
    InvalidScene { field: String, message: String },

    #[error("brute-force and closed-form routes disagree: {0}")]
    OracleMismatch(String),
}

impl Error {
    pub(crate) fn unsupported(reason: impl Into<String>, decomposition: Vec<String>) -> Self {
        Error::Unsupported { reason: reason.into(), decomposition }
    }

    pub(crate) fn scene(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidScene { field: field.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
