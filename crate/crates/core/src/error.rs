use thiserror::Error;

use crate::config::ConfigError;
use crate::graph::format::FormatError;
use crate::graph::GraphError;
use crate::immanant::SignatureError;
use crate::indexdb::DatabaseError;
use crate::linedraw::DrawingError;
use crate::synth::SynthError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Drawing(#[from] DrawingError),
    #[error(transparent)]
    Database(#[from] DatabaseError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Size,
    Io,
    Invalid,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Format(_) | Error::Drawing(DrawingError::Parse { .. }) => ErrorKind::Parse,
            Error::Database(DatabaseError::Corrupt { .. } | DatabaseError::Version(_)) => ErrorKind::Parse,
            Error::Signature(SignatureError::TooLarge { .. }) => ErrorKind::Size,
            Error::Io(_) => ErrorKind::Io,
            _ => ErrorKind::Invalid,
        }
    }
}
