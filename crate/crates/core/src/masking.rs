//! Tube masks: one boolean spatial-patch grid replicated across every time
//! step, as used by masked-autoencoder video pretraining. Because the mask
//! does not move, it hides whichever motion scale lives *within* a frame's
//! sub-grid while the visible patches keep playing.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::frame::Video;
use crate::rng::SplitMix64;

/// Boolean mask over a `patch_rows x patch_cols` spatial grid, implicitly
/// replicated across `t_steps` time steps.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeMask {
    patch_rows: usize,
    patch_cols: usize,
    t_steps: usize,
    ratio: f64,
    masked: Vec<bool>,
}

impl TubeMask {
    pub fn patch_rows(&self) -> usize {
        self.patch_rows
    }

    pub fn patch_cols(&self) -> usize {
        self.patch_cols
    }

    pub fn t_steps(&self) -> usize {
        self.t_steps
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    #[inline]
    pub fn is_masked(&self, row: usize, col: usize) -> bool {
        self.masked[row * self.patch_cols + col]
    }

    pub fn masked_count(&self) -> usize {
        self.masked.iter().filter(|&&m| m).count()
    }

    /// Masked (row, col) pairs in row-major order.
    pub fn masked_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::with_capacity(self.masked_count());
        for r in 0..self.patch_rows {
            for c in 0..self.patch_cols {
                if self.is_masked(r, c) {
                    pairs.push((r, c));
                }
            }
        }
        pairs
    }
}

/// Masks exactly `round(ratio * rows * cols)` patches (round half up),
/// chosen by seeded sampling without replacement (partial Fisher-Yates over
/// the patch indices). Equal seeds give equal masks.
pub fn generate_tube_mask(
    patch_rows: usize,
    patch_cols: usize,
    t_steps: usize,
    ratio: f64,
    seed: u64,
) -> Result<TubeMask, Error> {
    if patch_rows == 0 || patch_cols == 0 || t_steps == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::InvalidConfig("mask ratio must be in [0, 1]"));
    }
    let total = patch_rows * patch_cols;
    let target = libm::floor(ratio * total as f64 + 0.5) as usize;
    let mut indices: Vec<usize> = (0..total).collect();
    let mut rng = SplitMix64::new(seed);
    let mut masked = vec![false; total];
    for i in 0..target {
        let j = i + rng.next_below((total - i) as u64) as usize;
        indices.swap(i, j);
        masked[indices[i]] = true;
    }
    Ok(TubeMask { patch_rows, patch_cols, t_steps, ratio, masked })
}

/// Replaces every pixel of every masked patch with `fill`, in all frames.
/// Frame dimensions must be divisible by the patch grid and the frame count
/// must equal `t_steps`.
pub fn apply_mask(video: &Video, mask: &TubeMask, fill: f32) -> Result<Video, Error> {
    if video.frame_count() != mask.t_steps {
        return Err(Error::WrongFrameCount {
            expected: mask.t_steps,
            actual: video.frame_count(),
        });
    }
    if video.height() % mask.patch_rows != 0 || video.width() % mask.patch_cols != 0 {
        return Err(Error::PatchGridMismatch);
    }
    if !(0.0..=1.0).contains(&fill) {
        return Err(Error::InvalidConfig("fill value must be in [0, 1]"));
    }
    let ph = video.height() / mask.patch_rows;
    let pw = video.width() / mask.patch_cols;
    let ch = video.channels();
    let width = video.width();
    let frames = video
        .frames()
        .iter()
        .map(|frame| {
            let mut out = frame.clone();
            let data = out.data_mut();
            for (pr, pc) in mask.masked_pairs() {
                for r in pr * ph..(pr + 1) * ph {
                    let start = (r * width + pc * pw) * ch;
                    data[start..start + pw * ch].fill(fill);
                }
            }
            out
        })
        .collect();
    Ok(Video::new(frames).expect("masking preserves shape"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;

    #[test]
    fn zero_and_full_ratio() {
        let none = generate_tube_mask(4, 4, 2, 0.0, 1).unwrap();
        assert_eq!(none.masked_count(), 0);
        let all = generate_tube_mask(4, 4, 2, 1.0, 1).unwrap();
        assert_eq!(all.masked_count(), 16);
    }

    #[test]
    fn half_ratio_on_2x2_masks_exactly_two() {
        for seed in 0..20 {
            let m = generate_tube_mask(2, 2, 3, 0.5, seed).unwrap();
            assert_eq!(m.masked_count(), 2);
        }
    }

    // 90% of 14x14 = 176.4 rounds half-up to 176.
    #[test]
    fn round_half_up_count() {
        let m = generate_tube_mask(14, 14, 16, 0.9, 0).unwrap();
        assert_eq!(m.masked_count(), 176);
    }

    #[test]
    fn seed_determinism_and_distinctness() {
        let a = generate_tube_mask(8, 8, 4, 0.5, 99).unwrap();
        let b = generate_tube_mask(8, 8, 4, 0.5, 99).unwrap();
        assert_eq!(a, b);
        let c = generate_tube_mask(8, 8, 4, 0.5, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn ratio_out_of_range_rejected() {
        assert!(generate_tube_mask(2, 2, 1, 1.5, 0).is_err());
        assert!(generate_tube_mask(2, 2, 1, -0.1, 0).is_err());
    }

    #[test]
    fn apply_zero_ratio_is_identity() {
        let v = Video::new(vec![Frame::filled(4, 4, 1, 0.7).unwrap(); 3]).unwrap();
        let m = generate_tube_mask(2, 2, 3, 0.0, 5).unwrap();
        assert_eq!(apply_mask(&v, &m, 0.0).unwrap(), v);
    }

    #[test]
    fn apply_full_ratio_fills_everything() {
        let v = Video::new(vec![Frame::filled(4, 4, 3, 0.7).unwrap(); 2]).unwrap();
        let m = generate_tube_mask(2, 2, 2, 1.0, 5).unwrap();
        let out = apply_mask(&v, &m, 0.0).unwrap();
        assert!(out.frames().iter().all(|f| f.data().iter().all(|&v| v == 0.0)));
    }

    // One masked patch of a 2x2 patching on 4x4 frames touches exactly
    // 4 pixels per frame; count by brute force against the input.
    #[test]
    fn single_patch_changes_four_pixels_per_frame() {
        let v = Video::new(vec![Frame::filled(4, 4, 1, 1.0).unwrap(); 3]).unwrap();
        let m = generate_tube_mask(2, 2, 3, 0.25, 11).unwrap();
        assert_eq!(m.masked_count(), 1);
        let out = apply_mask(&v, &m, 0.0).unwrap();
        for (orig, masked) in v.frames().iter().zip(out.frames()) {
            let changed = orig
                .data()
                .iter()
                .zip(masked.data())
                .filter(|(a, b)| a != b)
                .count();
            assert_eq!(changed, 4);
        }
    }

    #[test]
    fn tube_property_identical_across_time() {
        let v = Video::new(vec![Frame::filled(8, 8, 1, 1.0).unwrap(); 5]).unwrap();
        let m = generate_tube_mask(4, 4, 5, 0.5, 3).unwrap();
        let out = apply_mask(&v, &m, 0.0).unwrap();
        for f in &out.frames()[1..] {
            assert_eq!(f, &out.frames()[0]);
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let v = Video::new(vec![Frame::filled(5, 4, 1, 0.0).unwrap(); 2]).unwrap();
        let m = generate_tube_mask(2, 2, 2, 0.5, 0).unwrap();
        assert_eq!(apply_mask(&v, &m, 0.0), Err(Error::PatchGridMismatch));
        let m_wrong_t = generate_tube_mask(2, 2, 3, 0.5, 0).unwrap();
        let v_ok = Video::new(vec![Frame::filled(4, 4, 1, 0.0).unwrap(); 2]).unwrap();
        assert_eq!(
            apply_mask(&v_ok, &m_wrong_t, 0.0),
            Err(Error::WrongFrameCount { expected: 3, actual: 2 })
        );
    }
}
