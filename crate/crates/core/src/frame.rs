//! Pixel rasters, frame sequences, and the resampling primitives they share.
//!
//! Pixels are stored row-major as `f32` in `[0, 1]`; 8-bit storage is mapped
//! to reals by `v / 255` at the I/O boundary (in the companion crate) so the
//! multi-stage pipeline never re-quantizes. Interpolation arithmetic runs in
//! `f64` and is fully deterministic.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// One video frame: `height x width x channels` values in `[0, 1]`.
///
/// `channels` is 1 (grayscale/depth) or 3 (RGB).
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f32>,
}

impl Frame {
    /// Validates the buffer length and that every value is finite and in
    /// `[0, 1]`.
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f32>) -> Result<Self, Error> {
        if height == 0 || width == 0 {
            return Err(Error::ZeroDimension);
        }
        if channels != 1 && channels != 3 {
            return Err(Error::UnsupportedChannels { channels });
        }
        let expected = height * width * channels;
        if data.len() != expected {
            return Err(Error::BadDataLength { expected, actual: data.len() });
        }
        for (index, &v) in data.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::ValueOutOfRange { index });
            }
        }
        Ok(Self { height, width, channels, data })
    }

    /// Frame of a single constant value.
    pub fn filled(height: usize, width: usize, channels: usize, value: f32) -> Result<Self, Error> {
        Self::new(height, width, channels, vec![value; height * width * channels])
    }

    /// Internal constructor for values already known to satisfy the invariants.
    pub(crate) fn from_raw(height: usize, width: usize, channels: usize, data: Vec<f32>) -> Self {
        debug_assert_eq!(data.len(), height * width * channels);
        Self { height, width, channels, data }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, channel: usize) -> f32 {
        self.data[(row * self.width + col) * self.channels + channel]
    }

    #[inline]
    pub(crate) fn row(&self, row: usize) -> &[f32] {
        let stride = self.width * self.channels;
        &self.data[row * stride..(row + 1) * stride]
    }
}

/// An ordered sequence of identically shaped frames.
#[derive(Debug, Clone, PartialEq)]
pub struct Video {
    frames: Vec<Frame>,
}

impl Video {
    pub fn new(frames: Vec<Frame>) -> Result<Self, Error> {
        let first = frames.first().ok_or(Error::EmptyVideo)?;
        let shape = (first.height, first.width, first.channels);
        if frames.iter().any(|f| (f.height, f.width, f.channels) != shape) {
            return Err(Error::FrameShapeMismatch);
        }
        Ok(Self { frames })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn height(&self) -> usize {
        self.frames[0].height
    }

    pub fn width(&self) -> usize {
        self.frames[0].width
    }

    pub fn channels(&self) -> usize {
        self.frames[0].channels
    }
}

/// Precomputed source taps and weights for one output axis.
struct AxisMap {
    lo: Vec<usize>,
    hi: Vec<usize>,
    frac: Vec<f64>,
}

/// Sample-center convention: source = (dst + 0.5) * in/out - 0.5, clamped.
fn axis_map(in_len: usize, out_len: usize) -> AxisMap {
    let scale = in_len as f64 / out_len as f64;
    let mut lo = Vec::with_capacity(out_len);
    let mut hi = Vec::with_capacity(out_len);
    let mut frac = Vec::with_capacity(out_len);
    for d in 0..out_len {
        let src = ((d as f64 + 0.5) * scale - 0.5).clamp(0.0, (in_len - 1) as f64);
        let base = libm::floor(src) as usize;
        lo.push(base);
        hi.push((base + 1).min(in_len - 1));
        frac.push(src - base as f64);
    }
    AxisMap { lo, hi, frac }
}

/// Bilinear resample with edge clamping.
///
/// Identity dimensions return a bit-identical copy. Output values are clamped
/// to `[0, 1]`, which convex interpolation can exceed only by rounding error.
///
/// Evaluated separably: one horizontal pass into an f64 row buffer, then a
/// vertical lerp of whole rows. The arithmetic per output pixel is the same
/// four-tap expression either way; the split just turns the vertical pass
/// into contiguous slice operations.
pub fn resize_bilinear(frame: &Frame, out_h: usize, out_w: usize) -> Result<Frame, Error> {
    if out_h == 0 || out_w == 0 {
        return Err(Error::ZeroDimension);
    }
    if out_h == frame.height && out_w == frame.width {
        return Ok(frame.clone());
    }
    let ch = frame.channels;
    let ys = axis_map(frame.height, out_h);
    let xs = axis_map(frame.width, out_w);
    let stride = out_w * ch;
    let taps = || xs.lo.iter().zip(&xs.hi).zip(&xs.frac);

    let mut hbuf = alloc::vec![0.0f64; frame.height * stride];
    for (r, dst) in hbuf.chunks_exact_mut(stride).enumerate() {
        let src = frame.row(r);
        if ch == 1 {
            for (d, ((&x0, &x1), &fx)) in dst.iter_mut().zip(taps()) {
                *d = src[x0] as f64 * (1.0 - fx) + src[x1] as f64 * fx;
            }
        } else {
            for (d, ((&x0, &x1), &fx)) in dst.chunks_exact_mut(ch).zip(taps()) {
                for (c, v) in d.iter_mut().enumerate() {
                    *v = src[x0 * ch + c] as f64 * (1.0 - fx) + src[x1 * ch + c] as f64 * fx;
                }
            }
        }
    }

    let mut data = Vec::with_capacity(out_h * stride);
    for y in 0..out_h {
        let top = &hbuf[ys.lo[y] * stride..ys.lo[y] * stride + stride];
        let bot = &hbuf[ys.hi[y] * stride..ys.hi[y] * stride + stride];
        let fy = ys.frac[y];
        for (&t, &b) in top.iter().zip(bot) {
            data.push((t * (1.0 - fy) + b * fy).clamp(0.0, 1.0) as f32);
        }
    }
    Ok(Frame::from_raw(out_h, out_w, ch, data))
}

/// BT.601 luma conversion; single-channel input is returned unchanged.
pub fn to_grayscale(frame: &Frame) -> Result<Frame, Error> {
    match frame.channels {
        1 => Ok(frame.clone()),
        3 => {
            let mut data = Vec::with_capacity(frame.height * frame.width);
            for px in frame.data.chunks_exact(3) {
                let y = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
                data.push(y.clamp(0.0, 1.0) as f32);
            }
            Ok(Frame::from_raw(frame.height, frame.width, 1, data))
        }
        channels => Err(Error::UnsupportedChannels { channels }),
    }
}
