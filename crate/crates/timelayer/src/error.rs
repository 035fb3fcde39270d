//! Error type for file formats and the CLI.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ToolError {
    #[error("{0}")]
    Core(#[from] timelayer_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: cannot decode image: {message}")]
    Decode { path: PathBuf, message: String },

    #[error("no frames match the pattern in {0}")]
    NoFrames(PathBuf),

    #[error("{path}: frame shape {actual:?} does not match {expected:?}")]
    FrameShape {
        path: PathBuf,
        expected: (usize, usize, usize),
        actual: (usize, usize, usize),
    },

    #[error("pgm supports only single-channel video (got {0} channels)")]
    PgmChannels(usize),

    #[error("ppm supports only 3-channel video (got {0} channels)")]
    PpmChannels(usize),

    #[error("bad magic bytes (expected \"NTA1\")")]
    BadMagic,

    #[error("archive manifest is not valid JSON: {0}")]
    ManifestParse(String),

    #[error("archive is truncated: need {needed} bytes, have {available}")]
    Truncated { needed: u64, available: u64 },

    #[error("tensor extents overlap: {0} and {1}")]
    OverlappingExtents(String, String),

    #[error("tensor offset {offset} of {name} is not 64-byte aligned")]
    MisalignedOffset { name: String, offset: u64 },

    #[error("unknown dtype {dtype:?} for tensor {name}")]
    UnknownDtype { name: String, dtype: String },

    #[error("labels file {path}: line {line}: {message}")]
    Labels { path: PathBuf, line: usize, message: String },

    #[error("{0}")]
    Usage(String),
}

impl ToolError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ToolError::Io { path: path.into(), source }
    }

    /// CLI exit code: 1 for usage errors, 2 for data and I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolError::Usage(_) => 1,
            _ => 2,
        }
    }
}
