use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the pipeline crates.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Tensor shapes are incompatible with an operator's hyperparameters.
    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    /// `backward` was called on an operator that has no retained forward context.
    #[error("{op}: backward called without a preceding forward pass")]
    NoForwardContext { op: &'static str },

    /// A loss became NaN/Inf; training aborted with the last good checkpoint retained.
    #[error("non-finite {quantity} in epoch {epoch}: training aborted")]
    NonFiniteLoss { quantity: &'static str, epoch: usize },

    #[error("io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image error at {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("manifest error at {path} line {line}: {msg}")]
    Manifest {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("no images found in {path}")]
    EmptyDataset { path: PathBuf },

    #[error("checkpoint error at {path}: {msg}")]
    Checkpoint { path: PathBuf, msg: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
