//! Labeled synthetic motion videos: one bright square sliding horizontally
//! over a black background, labeled by direction.
//!
//! Samples come in mirror twins: the right-to-left twin of a left-to-right
//! sample is its exact horizontal reflection, frame by frame (the twin's
//! pixels are the flipped pixels, bit for bit). Start positions are drawn
//! from an interval that is symmetric about the frame center, so reflection
//! maps the interval onto itself and the distribution of the square's
//! first-frame position is identical for both classes. Together with a
//! pair-keeping train/test split this makes a first-frame probe chance
//! level by symmetry: the whole generating process is invariant under
//! "mirror everything and swap labels", so any classifier's expected
//! first-frame accuracy is exactly one half.
//!
//! (Position marginals at later frame indices necessarily separate the
//! classes: motion with nonzero drift has class-dependent mean position
//! away from the start. The construction pins the provable
//! indistinguishability at frame 0, which is exactly what a single-frame
//! probe reads.)

use alloc::vec::Vec;

use crate::error::Error;
use crate::frame::{Frame, Video};
use crate::rng::SplitMix64;
use crate::transform::flip_horizontal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::LeftToRight => "left_to_right",
            Direction::RightToLeft => "right_to_left",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "left_to_right" => Some(Direction::LeftToRight),
            "right_to_left" => Some(Direction::RightToLeft),
            _ => None,
        }
    }
}

/// Generation parameters of one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionParams {
    pub frame_size: usize,
    pub square_size: usize,
    /// Pixels per frame; fractional positions are rendered with edge
    /// coverage weighting.
    pub speed: f64,
    pub start_x: f64,
    pub start_y: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotionSample {
    pub video: Video,
    pub direction: Direction,
    pub params: MotionParams,
}

impl MotionSample {
    /// Horizontal square position at frame `t`.
    pub fn x_at(&self, t: usize) -> f64 {
        match self.direction {
            Direction::LeftToRight => self.params.start_x + t as f64 * self.params.speed,
            Direction::RightToLeft => self.params.start_x - t as f64 * self.params.speed,
        }
    }
}

/// Deterministic random-access generator; samples `2p` and `2p + 1` are the
/// left-to-right and mirrored right-to-left members of twin pair `p`.
pub struct DirectionDataset {
    n_samples: usize,
    frame_size: usize,
    t_frames: usize,
    square: usize,
    speed: f64,
    pair_seeds: Vec<u64>,
}

impl DirectionDataset {
    pub fn new(
        n_samples: usize,
        frame_size: usize,
        t_frames: usize,
        seed: u64,
    ) -> Result<Self, Error> {
        if n_samples == 0 {
            return Err(Error::EmptyDataset);
        }
        if frame_size < 16 {
            return Err(Error::InvalidConfig("frame size must be at least 16"));
        }
        if t_frames < 8 {
            return Err(Error::InvalidConfig("frame count must be at least 8"));
        }
        let square = frame_size / 8;
        // Travel covers 3/8 of the free horizontal span so that a start
        // position can move the full distance in either direction.
        let travel = (frame_size - square) as f64 * 3.0 / 8.0;
        let speed = travel / (t_frames - 1) as f64;
        let mut master = SplitMix64::new(seed);
        let pairs = n_samples / 2 + n_samples % 2;
        let pair_seeds = (0..pairs).map(|_| master.next_u64()).collect();
        Ok(Self { n_samples, frame_size, t_frames, square, speed, pair_seeds })
    }

    pub fn len(&self) -> usize {
        self.n_samples
    }

    pub fn is_empty(&self) -> bool {
        self.n_samples == 0
    }

    pub fn frame_size(&self) -> usize {
        self.frame_size
    }

    pub fn t_frames(&self) -> usize {
        self.t_frames
    }

    pub fn generate(&self, index: usize) -> MotionSample {
        assert!(index < self.n_samples, "sample index out of range");
        let pair_seed = self.pair_seeds[index / 2];
        let mut rng = SplitMix64::new(pair_seed);
        let max_x = (self.frame_size - self.square) as f64;
        let travel = self.speed * (self.t_frames - 1) as f64;
        let start_y = rng.next_below((self.frame_size - self.square + 1) as u64) as usize;
        // The start interval [travel, max_x - travel] maps onto itself under
        // reflection, so both classes draw first-frame positions from the
        // same distribution.
        let start_x = travel + rng.next_unit_f64() * (max_x - 2.0 * travel);
        let frames: Vec<Frame> = (0..self.t_frames)
            .map(|t| {
                render_square(
                    self.frame_size,
                    start_x + t as f64 * self.speed,
                    start_y as f64,
                    self.square,
                )
            })
            .collect();
        let (direction, start_x, frames) = if index % 2 == 0 {
            (Direction::LeftToRight, start_x, frames)
        } else {
            // The twin is the bit-exact horizontal reflection.
            (
                Direction::RightToLeft,
                max_x - start_x,
                frames.iter().map(flip_horizontal).collect(),
            )
        };
        MotionSample {
            video: Video::new(frames).expect("rendered frames share one shape"),
            direction,
            params: MotionParams {
                frame_size: self.frame_size,
                square_size: self.square,
                speed: self.speed,
                start_x,
                start_y,
                seed: pair_seed,
            },
        }
    }
}

/// Anti-aliased render: each pixel gets the fraction of it covered by the
/// square, so fractional positions are represented exactly.
fn render_square(frame_size: usize, x: f64, y: f64, square: usize) -> Frame {
    let mut data = alloc::vec![0.0f32; frame_size * frame_size];
    let x_end = x + square as f64;
    let y_end = y + square as f64;
    let row_lo = libm::floor(y) as usize;
    let row_hi = (libm::floor(y_end - 1e-9) as usize).min(frame_size - 1);
    let col_lo = libm::floor(x) as usize;
    let col_hi = (libm::floor(x_end - 1e-9) as usize).min(frame_size - 1);
    for r in row_lo..=row_hi {
        let cover_y = overlap(r as f64, y, y_end);
        for c in col_lo..=col_hi {
            let cover_x = overlap(c as f64, x, x_end);
            data[r * frame_size + c] = (cover_y * cover_x) as f32;
        }
    }
    Frame::from_raw(frame_size, frame_size, 1, data)
}

/// Length of the intersection of `[px, px + 1)` with `[lo, hi)`.
fn overlap(px: f64, lo: f64, hi: f64) -> f64 {
    (hi.min(px + 1.0) - lo.max(px)).clamp(0.0, 1.0)
}

/// Materializes the whole dataset. Labels are balanced to within one
/// sample (an odd count gets one extra left-to-right sample), and equal
/// seeds give bit-identical datasets.
pub fn generate_direction_dataset(
    n_samples: usize,
    frame_size: usize,
    t_frames: usize,
    seed: u64,
) -> Result<Vec<MotionSample>, Error> {
    let dataset = DirectionDataset::new(n_samples, frame_size, t_frames, seed)?;
    Ok((0..n_samples).map(|i| dataset.generate(i)).collect())
}

/// [`crate::diagnostics::SampleSource`] over streamed synthetic samples;
/// label `true` means left-to-right.
impl crate::diagnostics::SampleSource for DirectionDataset {
    fn len(&self) -> usize {
        self.n_samples
    }

    fn sample(&self, index: usize) -> Result<(Video, bool), Error> {
        let s = self.generate(index);
        Ok((s.video, s.direction == Direction::LeftToRight))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn centroid_x(frame: &Frame) -> f64 {
        let mut mass = 0.0;
        let mut moment = 0.0;
        for r in 0..frame.height() {
            for c in 0..frame.width() {
                let v = frame.get(r, c, 0) as f64;
                mass += v;
                moment += v * c as f64;
            }
        }
        moment / mass
    }

    #[test]
    fn labels_are_balanced() {
        let samples = generate_direction_dataset(10, 32, 8, 1).unwrap();
        let l2r = samples.iter().filter(|s| s.direction == Direction::LeftToRight).count();
        assert_eq!(l2r, 5);
        let odd = generate_direction_dataset(11, 32, 8, 1).unwrap();
        let l2r_odd = odd.iter().filter(|s| s.direction == Direction::LeftToRight).count();
        assert_eq!(l2r_odd, 6);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let a = generate_direction_dataset(6, 32, 8, 42).unwrap();
        let b = generate_direction_dataset(6, 32, 8, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn twins_are_bit_exact_horizontal_mirrors() {
        let samples = generate_direction_dataset(20, 64, 16, 3).unwrap();
        for pair in samples.chunks_exact(2) {
            assert_eq!(pair[0].direction, Direction::LeftToRight);
            assert_eq!(pair[1].direction, Direction::RightToLeft);
            for (a, b) in pair[0].video.frames().iter().zip(pair[1].video.frames()) {
                let w = a.width();
                for r in 0..a.height() {
                    for c in 0..w {
                        assert_eq!(a.get(r, c, 0), b.get(r, w - 1 - c, 0));
                    }
                }
            }
        }
    }

    #[test]
    fn twin_positions_reflect_about_the_frame_center() {
        let samples = generate_direction_dataset(8, 64, 16, 9).unwrap();
        for pair in samples.chunks_exact(2) {
            let max_x = (pair[0].params.frame_size - pair[0].params.square_size) as f64;
            for t in 0..16 {
                let a = pair[0].x_at(t);
                let b = pair[1].x_at(t);
                assert!((a + b - max_x).abs() < 1e-9, "t={t}: {a} + {b} != {max_x}");
            }
        }
    }

    // Both classes draw the first-frame position from the same interval: the
    // reflected start lies in [travel, max_x - travel] exactly like the
    // original.
    #[test]
    fn first_frame_start_interval_is_class_symmetric() {
        let samples = generate_direction_dataset(200, 64, 32, 11).unwrap();
        let travel = samples[0].params.speed * 31.0;
        let max_x = (64 - samples[0].params.square_size) as f64;
        for s in &samples {
            let x0 = s.x_at(0);
            assert!(x0 >= travel - 1e-9 && x0 <= max_x - travel + 1e-9);
        }
    }

    #[test]
    fn square_stays_inside_every_frame() {
        let samples = generate_direction_dataset(30, 32, 12, 7).unwrap();
        for s in &samples {
            for t in 0..12 {
                let x = s.x_at(t);
                assert!(x >= 0.0 && x + s.params.square_size as f64 <= 32.0);
            }
            // No pixel mass touches the frame border columns beyond bounds:
            // total mass stays exactly square^2.
            for f in s.video.frames() {
                let mass: f64 = f.data().iter().map(|&v| v as f64).sum();
                let expected = (s.params.square_size * s.params.square_size) as f64;
                assert!((mass - expected).abs() < 1e-3, "mass {mass} vs {expected}");
            }
        }
    }

    #[test]
    fn reversing_a_sample_yields_the_opposite_trajectory() {
        let samples = generate_direction_dataset(2, 64, 16, 5).unwrap();
        let sample = &samples[0];
        let mut frames = sample.video.frames().to_vec();
        frames.reverse();
        let reversed = Video::new(frames).unwrap();
        let mut prev = centroid_x(&reversed.frames()[0]);
        for f in &reversed.frames()[1..] {
            let cur = centroid_x(f);
            assert!(cur < prev, "reversed trajectory must move left");
            prev = cur;
        }
    }

    #[test]
    fn random_access_matches_sequential_generation() {
        let dataset = DirectionDataset::new(9, 32, 8, 123).unwrap();
        let all = generate_direction_dataset(9, 32, 8, 123).unwrap();
        for (i, expected) in all.iter().enumerate() {
            assert_eq!(&dataset.generate(i), expected);
        }
        // Out-of-order access is identical too.
        assert_eq!(dataset.generate(7), all[7]);
        assert_eq!(dataset.generate(0), all[0]);
    }

    #[test]
    fn preconditions_are_enforced() {
        assert!(DirectionDataset::new(4, 15, 8, 0).is_err());
        assert!(DirectionDataset::new(4, 16, 7, 0).is_err());
        assert!(DirectionDataset::new(0, 16, 8, 0).is_err());
    }
}
