use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("operation `{0}` needs a second operand")]
    MissingOperand(&'static str),

    #[error("element {0} is not in the carrier")]
    NotInCarrier(String),

    #[error("the carrier of {0} is infinite; use a sampled check")]
    InfiniteCarrier(String),

    #[error("{what} exceeds the configured cap ({actual} > {limit})")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("no RDP2 witness exists; the table is not a pseudo MV-algebra")]
    NoRdp2Witness,

    #[error("ideal is not normal")]
    NotNormal,

    #[error("not an ideal")]
    NotIdeal,

    #[error("quotient collapses 0 and 1")]
    DegenerateQuotient,

    #[error("not a state: {0}")]
    InvalidState(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid spec field `{field}`: {message}")]
    InvalidSpec { field: String, message: String },

    #[error("internal verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn spec(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidSpec {
            field: field.into(),
            message: message.into(),
        }
    }
}
