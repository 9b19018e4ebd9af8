use thiserror::Error;

/// Every failure the engine can report.
///
/// The variant name doubles as the machine-readable error class printed by
/// the command-line front end, see [`Error::class`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0}")]
    InvalidSchema(String),

    #[error("{0}")]
    InvalidState(String),

    #[error("states or updates belong to different schemas: {0}")]
    SchemaMismatch(String),

    #[error("update is not applicable: {0}")]
    NotApplicable(String),

    #[error("state space too large: {0}")]
    StateSpaceTooLarge(String),

    #[error("invalid view: {0}")]
    InvalidView(String),

    #[error("no constructive complement for {0}")]
    NoConstructiveComplement(String),

    #[error("invalid view update: {0}")]
    InvalidViewUpdate(String),

    #[error("not translatable: {0}")]
    NotTranslatable(String),

    #[error("null value required but domain `{0}` has none")]
    NullNotSupported(String),

    #[error("strategy does not apply: {0}")]
    InvalidStrategy(String),

    #[error("no key metadata declared for {0}")]
    MissingKeyMetadata(String),

    #[error("strategy is not a translator: {0}")]
    NotATranslator(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Resolution(String),
}

impl Error {
    /// Stable identifier of the error kind.
    pub fn class(&self) -> &'static str {
        match self {
            Error::InvalidSchema(_) => "InvalidSchema",
            Error::InvalidState(_) => "InvalidState",
            Error::SchemaMismatch(_) => "SchemaMismatch",
            Error::NotApplicable(_) => "NotApplicable",
            Error::StateSpaceTooLarge(_) => "StateSpaceTooLarge",
            Error::InvalidView(_) => "InvalidView",
            Error::NoConstructiveComplement(_) => "NoConstructiveComplement",
            Error::InvalidViewUpdate(_) => "InvalidViewUpdate",
            Error::NotTranslatable(_) => "NotTranslatable",
            Error::NullNotSupported(_) => "NullNotSupported",
            Error::InvalidStrategy(_) => "InvalidStrategy",
            Error::MissingKeyMetadata(_) => "MissingKeyMetadata",
            Error::NotATranslator(_) => "NotATranslator",
            Error::Parse { .. } => "ParseError",
            Error::Resolution(_) => "ResolutionError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
