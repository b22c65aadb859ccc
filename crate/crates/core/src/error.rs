use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// `kind()` gives a stable short tag used by the CLI and the C ABI.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("index out of range: {index} (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("field error: {0}")]
    Field(String),
    #[error("reducible modulus: {0}")]
    ReducibleModulus(String),
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("incomplete link: {0}")]
    IncompleteLink(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("link axiom failure: {0}")]
    LinkAxiom(String),
    #[error("inconsistent order: {0}")]
    InconsistentOrder(String),
    #[error("multiplicity: {0}")]
    Multiplicity(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("disconnected: {0}")]
    Disconnected(String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::IndexOutOfRange { .. } => "index",
            Error::Field(_) => "field",
            Error::ReducibleModulus(_) => "reducible-modulus",
            Error::SizeGuard(_) => "size",
            Error::IncompleteLink(_) => "incomplete-link",
            Error::Structure(_) => "structure",
            Error::LinkAxiom(_) => "link-axiom",
            Error::InconsistentOrder(_) => "inconsistent-order",
            Error::Multiplicity(_) => "multiplicity",
            Error::InvalidInput(_) => "invalid-input",
            Error::Parse { .. } => "parse",
            Error::Disconnected(_) => "disconnected",
            Error::Exhausted(_) => "exhausted",
            Error::Io(_) => "io",
        }
    }

    /// The message without the kind prefix.
    pub fn detail(&self) -> String {
        match self {
            Error::Dimension(m)
            | Error::Field(m)
            | Error::ReducibleModulus(m)
            | Error::SizeGuard(m)
            | Error::IncompleteLink(m)
            | Error::Structure(m)
            | Error::LinkAxiom(m)
            | Error::InconsistentOrder(m)
            | Error::Multiplicity(m)
            | Error::InvalidInput(m)
            | Error::Disconnected(m)
            | Error::Exhausted(m)
            | Error::Io(m) => m.clone(),
            Error::IndexOutOfRange { index, limit } => format!("{index} (limit {limit})"),
            Error::Parse { line, message } => format!("line {line}: {message}"),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
