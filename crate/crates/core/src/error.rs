use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty hierarchy document")]
    EmptyHierarchy,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate label `{label}`")]
    DuplicateLabel { line: usize, label: String },
    #[error("line {line}: second root `{label}`")]
    MultipleRoots { line: usize, label: String },
    #[error("cycle through `{label}`")]
    Cycle { label: String },
    #[error("unknown label `{label}` in hierarchy `{hierarchy}`")]
    UnknownLabel { hierarchy: String, label: String },
    #[error("hierarchy `{0}` is a DAG; use label_dag")]
    NotATree(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("record `{id}`: {msg}")]
    InvalidRecord { id: String, msg: String },
    #[error("{file}:{line}: {msg}")]
    Data { file: String, line: usize, msg: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("p must lie in (0, 100], got {0}")]
    InvalidPercent(f64),
    #[error("at least one user is required")]
    NoUsers,
    #[error("empty object set")]
    NoObjects,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed index dump, line {line}: {msg}")]
    IndexDump { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
