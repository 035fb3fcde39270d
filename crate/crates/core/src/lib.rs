//! Deterministic video-frame rearrangement and diagnostics.
//!
//! A video of `T` frames is resampled to `T* x N^2` frames and packed into
//! `T*` output frames, each an `N x N` grid of downscaled sub-frames. `N`
//! trades per-cell spatial resolution against the amount of temporal context
//! embedded in a single frame; `N = 1` reduces to conventional uniform frame
//! sampling. Two grid arrangements are provided: one plays a contiguous
//! temporal segment inside each grid cell across the output sequence, the
//! other packs consecutive frames of one block into the cells of a single
//! output frame.
//!
//! Alongside the transform itself the crate carries the measurement tools
//! used to study it: tube-mask generation, a synthetic motion dataset whose
//! direction label is provably invisible in any single first frame, a
//! from-scratch logistic-regression probe, and per-layer checkpoint cosine
//! similarity.
//!
//! Everything here is pure computation over in-memory buffers; the crate is
//! `no_std` (alloc required). File formats, parallel drivers, and the CLI
//! live in the companion `timelayer` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod archive;
pub mod diagnostics;
pub mod error;
pub mod frame;
pub mod masking;
pub mod probe;
pub mod rng;
pub mod synth;
pub mod transform;

pub use error::Error;
pub use frame::{resize_bilinear, to_grayscale, Frame, Video};
pub use transform::{
    adjust_length, apply_augment, build_index_map, extract_cells, time_transform, Arrangement,
    AugmentSpec, IndexMap, TimeConfig,
};
