use std::io;

use thiserror::Error;

use crate::graph::GraphError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    /// Misuse of the round protocol: submitting to a closed round, reading
    /// answers early, opening two rounds at once.
    #[error("round contract violation: {0}")]
    Contract(String),
    #[error("invalid argument: {0}")]
    Precondition(String),
    #[error("refusing {what}: {count} cases to enumerate exceeds the limit of {limit}")]
    Infeasible {
        what: String,
        count: u128,
        limit: u128,
    },
    /// A structure that was supposed to be verified turned out not to be.
    #[error("algorithm contract violated: {0}")]
    AlgorithmContract(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Contract(_) | Error::AlgorithmContract(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
