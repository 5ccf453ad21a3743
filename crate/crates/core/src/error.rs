use crate::algebra::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Tables or files that are structurally malformed.
    #[error("malformed input: {0}")]
    Input(String),

    #[error("semiring axioms violated: {0}")]
    Axioms(ValidationReport),

    #[error("{what} exceeds budget ({needed} > {limit})")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("variable `{0}` is not bound by the substitution")]
    Unbound(String),

    #[error("duplicate element name `{0}`")]
    DuplicateName(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("order relation contains a cycle through `{0}`")]
    Cycle(String),

    #[error("no join for ({0},{1})")]
    NoJoin(String, String),

    #[error("unknown catalog name `{0}`")]
    UnknownName(String),

    #[error("{0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn budget(what: &'static str, needed: u128, limit: u128) -> Self {
        Error::Budget {
            what,
            needed,
            limit,
        }
    }
}
