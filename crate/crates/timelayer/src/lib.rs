//! File formats, parallel drivers, and the command-line interface for the
//! `timelayer-core` rearrangement toolkit.
//!
//! The core crate is pure computation; everything that touches the
//! filesystem or a thread pool lives here: image-sequence video
//! directories (PNG / binary PGM / binary PPM), the `NTA1` named-tensor
//! archive, label CSVs, mask export, and deterministic parallel versions
//! of the transform and featurization.

pub mod cli;
pub mod error;
pub mod io;
pub mod parallel;

pub use error::ToolError;
