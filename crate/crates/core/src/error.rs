//! Error type shared by all core modules.

use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Pixel buffer length does not match height x width x channels.
    BadDataLength { expected: usize, actual: usize },
    /// A pixel value is outside [0, 1] or not finite.
    ValueOutOfRange { index: usize },
    /// A video must contain at least one frame.
    EmptyVideo,
    /// Frames of one video (or an input frame) do not have the expected shape.
    FrameShapeMismatch,
    UnsupportedChannels { channels: usize },
    /// A width, height, or count that must be nonzero is zero.
    ZeroDimension,
    /// Configuration violates an invariant; the message names it.
    InvalidConfig(&'static str),
    CropOutOfBounds,
    /// Cell extraction requires the grid side to divide the frame dimensions.
    GridNotDivisible,
    WrongFrameCount { expected: usize, actual: usize },
    /// Frame dimensions are not divisible by the patch grid.
    PatchGridMismatch,
    /// Tensors must have identical shapes.
    ShapeMismatch,
    EmptyTensor,
    DuplicateName,
    EmptyName,
    /// Tensor payload length does not match shape x dtype size.
    PayloadSizeMismatch { expected: usize, actual: usize },
    /// Training requires at least two samples of each class.
    DegenerateLabels,
    FeatureLengthMismatch,
    EmptyDataset,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadDataLength { expected, actual } => {
                write!(f, "pixel buffer has {actual} values, expected {expected}")
            }
            Error::ValueOutOfRange { index } => {
                write!(f, "pixel value at index {index} is outside [0, 1]")
            }
            Error::EmptyVideo => write!(f, "video has no frames"),
            Error::FrameShapeMismatch => write!(f, "frame shape mismatch"),
            Error::UnsupportedChannels { channels } => {
                write!(f, "unsupported channel count {channels} (expected 1 or 3)")
            }
            Error::ZeroDimension => write!(f, "dimension must be at least 1"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::CropOutOfBounds => write!(f, "crop rectangle exceeds frame bounds"),
            Error::GridNotDivisible => {
                write!(f, "frame dimensions are not divisible by the grid side")
            }
            Error::WrongFrameCount { expected, actual } => {
                write!(f, "expected {expected} frames, got {actual}")
            }
            Error::PatchGridMismatch => {
                write!(f, "frame dimensions are not divisible by the patch grid")
            }
            Error::ShapeMismatch => write!(f, "tensor shapes differ"),
            Error::EmptyTensor => write!(f, "tensor has no elements"),
            Error::DuplicateName => write!(f, "archive already contains this name"),
            Error::EmptyName => write!(f, "tensor name must be nonempty"),
            Error::PayloadSizeMismatch { expected, actual } => {
                write!(f, "payload is {actual} bytes, expected {expected}")
            }
            Error::DegenerateLabels => {
                write!(f, "training set needs at least two samples per class")
            }
            Error::FeatureLengthMismatch => write!(f, "feature vectors differ in length"),
            Error::EmptyDataset => write!(f, "dataset is empty"),
        }
    }
}

impl core::error::Error for Error {}
