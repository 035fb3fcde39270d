//! The grid rearrangement layer: length adjustment, the two block
//! arrangements, sequence-consistent augmentation, and the inverse cell
//! extraction used to round-trip them.
//!
//! All index arithmetic is expressed through [`IndexMap`], an explicit
//! permutation from (output frame, grid cell) to adjusted-input frame index.
//! Indices are 0-based throughout.

use alloc::vec::Vec;

use crate::error::Error;
use crate::frame::{resize_bilinear, Frame, Video};

/// Grid layout variant.
///
/// `Spatial`: grid cell `k` plays its own contiguous segment of `t_star`
/// frames across the output sequence, so one output frame shows `n^2`
/// moments spread across the whole clip.
///
/// `Temporal`: output frame `j` packs the `n^2` consecutive frames of block
/// `j` into the grid row-major, so one output frame shows a short burst.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arrangement {
    Spatial,
    Temporal,
}

impl Arrangement {
    pub fn as_str(self) -> &'static str {
        match self {
            Arrangement::Spatial => "spatial",
            Arrangement::Temporal => "temporal",
        }
    }
}

/// Crop rectangle in source pixels, applied after scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CropRect {
    pub top: usize,
    pub left: usize,
    pub height: usize,
    pub width: usize,
}

/// One geometric transform applied identically to every frame of a sequence.
///
/// Per-frame randomness would corrupt the temporal signal the rearrangement
/// exists to preserve, so a spec describes exactly one transform. The seed
/// is carried for callers that draw the fields randomly; nothing here reads
/// it. Application order: scale, crop, rotate, flip.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentSpec {
    pub horizontal_flip: bool,
    pub crop: Option<CropRect>,
    /// Quarter turns clockwise, 0..=3.
    pub rotation_quarter_turns: u8,
    /// Uniform pre-resize scale factor.
    pub scale: Option<f64>,
    pub seed: u64,
}

impl Default for AugmentSpec {
    fn default() -> Self {
        Self { horizontal_flip: false, crop: None, rotation_quarter_turns: 0, scale: None, seed: 0 }
    }
}

/// The transform contract: grid side `n`, output frame count `t_star`,
/// output resolution, arrangement, and optional augmentation.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeConfig {
    n: usize,
    t_star: usize,
    out_h: usize,
    out_w: usize,
    arrangement: Arrangement,
    augment: Option<AugmentSpec>,
}

impl TimeConfig {
    /// Requires `n >= 1`, `t_star >= 1`, and `out_h, out_w >= n` so every
    /// grid cell is at least one pixel.
    pub fn new(
        n: usize,
        t_star: usize,
        out_h: usize,
        out_w: usize,
        arrangement: Arrangement,
    ) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidConfig("grid side n must be at least 1"));
        }
        if t_star == 0 {
            return Err(Error::InvalidConfig("output frame count must be at least 1"));
        }
        if out_h < n || out_w < n {
            return Err(Error::InvalidConfig("output dimensions must be at least n"));
        }
        n.checked_mul(n)
            .and_then(|nn| nn.checked_mul(t_star))
            .ok_or(Error::InvalidConfig("t_star * n^2 overflows"))?;
        Ok(Self { n, t_star, out_h, out_w, arrangement, augment: None })
    }

    pub fn with_augment(mut self, spec: AugmentSpec) -> Result<Self, Error> {
        if spec.rotation_quarter_turns > 3 {
            return Err(Error::InvalidConfig("rotation must be 0..=3 quarter turns"));
        }
        if let Some(s) = spec.scale {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::InvalidConfig("scale must be a positive finite number"));
            }
        }
        self.augment = Some(spec);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_star(&self) -> usize {
        self.t_star
    }

    pub fn out_h(&self) -> usize {
        self.out_h
    }

    pub fn out_w(&self) -> usize {
        self.out_w
    }

    pub fn arrangement(&self) -> Arrangement {
        self.arrangement
    }

    pub fn augment(&self) -> Option<&AugmentSpec> {
        self.augment.as_ref()
    }

    /// Adjusted input length `t_star * n^2`.
    pub fn grid_frames(&self) -> usize {
        self.t_star * self.n * self.n
    }

    /// Cell size before the final resize: floor division of the output size.
    pub fn cell_size(&self) -> (usize, usize) {
        (self.out_h / self.n, self.out_w / self.n)
    }
}

/// Explicit permutation from (output frame `j`, row-major grid cell `k`) to
/// the adjusted-input frame index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMap {
    n: usize,
    t_star: usize,
    entries: Vec<usize>,
}

impl IndexMap {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_star(&self) -> usize {
        self.t_star
    }

    /// Total number of (frame, cell) pairs, `t_star * n^2`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adjusted-input frame index shown in cell `k` of output frame `j`.
    #[inline]
    pub fn source_index(&self, frame: usize, cell: usize) -> usize {
        self.entries[frame * self.n * self.n + cell]
    }

    /// Entries in (frame-major, cell row-major) order.
    pub fn entries(&self) -> &[usize] {
        &self.entries
    }
}

/// Builds the permutation for the configured arrangement.
///
/// Spatial: `src(j, k) = k * t_star + j` — cell `k` holds the `k`-th
/// contiguous segment of `t_star` frames and advances one frame per output
/// frame. Temporal: `src(j, k) = j * n^2 + k` — output frame `j` is the
/// `j`-th block of `n^2` consecutive frames laid out row-major.
pub fn build_index_map(config: &TimeConfig) -> IndexMap {
    let n2 = config.n * config.n;
    let t_star = config.t_star;
    let mut entries = Vec::with_capacity(t_star * n2);
    for frame in 0..t_star {
        for cell in 0..n2 {
            entries.push(match config.arrangement {
                Arrangement::Spatial => cell * t_star + frame,
                Arrangement::Temporal => frame * n2 + cell,
            });
        }
    }
    IndexMap { n: config.n, t_star, entries }
}

/// Indices selected by [`adjust_length`]: `floor(k * t / required)` for each
/// output position `k`. One rule covers both repetition (`t < required`) and
/// uniform subsampling (`t > required`); it is order-preserving and the
/// identity when `t == required`.
pub fn adjusted_indices(t: usize, required: usize) -> Vec<usize> {
    (0..required).map(|k| ((k as u64 * t as u64) / required as u64) as usize).collect()
}

/// Resamples the sequence to exactly `required` frames.
pub fn adjust_length(video: &Video, required: usize) -> Result<Video, Error> {
    if required == 0 {
        return Err(Error::ZeroDimension);
    }
    let frames = adjusted_indices(video.frame_count(), required)
        .into_iter()
        .map(|i| video.frames()[i].clone())
        .collect();
    Ok(Video::new(frames).expect("adjusted frames share the input shape"))
}

fn rotate_quarter_cw(frame: &Frame) -> Frame {
    let (h, w, ch) = (frame.height(), frame.width(), frame.channels());
    let mut data = alloc::vec![0.0f32; h * w * ch];
    // (r, c) moves to (c, h - 1 - r); output is w x h.
    for r in 0..h {
        for c in 0..w {
            for k in 0..ch {
                data[(c * h + (h - 1 - r)) * ch + k] = frame.get(r, c, k);
            }
        }
    }
    Frame::from_raw(w, h, ch, data)
}

pub(crate) fn flip_horizontal(frame: &Frame) -> Frame {
    let (h, w, ch) = (frame.height(), frame.width(), frame.channels());
    let mut data = Vec::with_capacity(h * w * ch);
    for r in 0..h {
        for c in 0..w {
            for k in 0..ch {
                data.push(frame.get(r, w - 1 - c, k));
            }
        }
    }
    Frame::from_raw(h, w, ch, data)
}

fn crop(frame: &Frame, rect: CropRect) -> Result<Frame, Error> {
    if rect.height == 0 || rect.width == 0 {
        return Err(Error::ZeroDimension);
    }
    if rect.top + rect.height > frame.height() || rect.left + rect.width > frame.width() {
        return Err(Error::CropOutOfBounds);
    }
    let ch = frame.channels();
    let mut data = Vec::with_capacity(rect.height * rect.width * ch);
    for r in 0..rect.height {
        let row = frame.row(rect.top + r);
        data.extend_from_slice(&row[rect.left * ch..(rect.left + rect.width) * ch]);
    }
    Ok(Frame::from_raw(rect.height, rect.width, ch, data))
}

fn augment_frame(frame: &Frame, spec: &AugmentSpec) -> Result<Frame, Error> {
    let mut out = if let Some(s) = spec.scale {
        let new_h = (libm::round(frame.height() as f64 * s) as usize).max(1);
        let new_w = (libm::round(frame.width() as f64 * s) as usize).max(1);
        resize_bilinear(frame, new_h, new_w)?
    } else {
        frame.clone()
    };
    if let Some(rect) = spec.crop {
        out = crop(&out, rect)?;
    }
    for _ in 0..spec.rotation_quarter_turns {
        out = rotate_quarter_cw(&out);
    }
    if spec.horizontal_flip {
        out = flip_horizontal(&out);
    }
    Ok(out)
}

/// Applies one geometric transform to every frame (sequence-consistent).
pub fn apply_augment(video: &Video, spec: &AugmentSpec) -> Result<Video, Error> {
    if spec.rotation_quarter_turns > 3 {
        return Err(Error::InvalidConfig("rotation must be 0..=3 quarter turns"));
    }
    if let Some(s) = spec.scale {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidConfig("scale must be a positive finite number"));
        }
    }
    let frames = video
        .frames()
        .iter()
        .map(|f| augment_frame(f, spec))
        .collect::<Result<Vec<_>, _>>()?;
    Video::new(frames)
}

/// Assembles output frame `frame_idx` from the adjusted, cell-sized frames.
pub fn assemble_grid_frame(cells: &[Frame], map: &IndexMap, frame_idx: usize) -> Frame {
    let n = map.n();
    let (cell_h, cell_w, ch) = (cells[0].height(), cells[0].width(), cells[0].channels());
    let out_w = n * cell_w;
    let row_stride = out_w * ch;
    let mut data = alloc::vec![0.0f32; n * cell_h * row_stride];
    for cell in 0..n * n {
        let src = &cells[map.source_index(frame_idx, cell)];
        let (grid_r, grid_c) = (cell / n, cell % n);
        for r in 0..cell_h {
            let dst_row = grid_r * cell_h + r;
            let dst_off = dst_row * row_stride + grid_c * cell_w * ch;
            data[dst_off..dst_off + cell_w * ch].copy_from_slice(src.row(r));
        }
    }
    Frame::from_raw(n * cell_h, out_w, ch, data)
}

/// Full rearrangement pipeline.
///
/// augment (if configured) -> adjust to `t_star * n^2` frames -> resize each
/// to the cell size -> assemble `t_star` grid frames per the index map ->
/// final resize to exactly `out_h x out_w` when `n` does not divide them.
/// The output always has `t_star` frames of `out_h x out_w`.
pub fn time_transform(video: &Video, config: &TimeConfig) -> Result<Video, Error> {
    let augmented;
    let source = match config.augment() {
        Some(spec) => {
            augmented = apply_augment(video, spec)?;
            &augmented
        }
        None => video,
    };
    // Resizes straight from the selected source frames; materializing the
    // adjusted sequence first would only clone frames that are immediately
    // resampled.
    let (cell_h, cell_w) = config.cell_size();
    let cells = adjusted_indices(source.frame_count(), config.grid_frames())
        .into_iter()
        .map(|i| resize_bilinear(&source.frames()[i], cell_h, cell_w))
        .collect::<Result<Vec<_>, _>>()?;
    let map = build_index_map(config);
    let mut frames = Vec::with_capacity(config.t_star());
    for j in 0..config.t_star() {
        let assembled = assemble_grid_frame(&cells, &map, j);
        frames.push(if (assembled.height(), assembled.width()) == (config.out_h(), config.out_w()) {
            assembled
        } else {
            resize_bilinear(&assembled, config.out_h(), config.out_w())?
        });
    }
    Video::new(frames)
}

/// Inverse of the grid assembly (exact mode): cuts each output frame into
/// its `n^2` cells and re-orders them by the inverse permutation, recovering
/// the adjusted-length input sequence at cell resolution. Requires `n` to
/// divide both frame dimensions and exactly `t_star` input frames.
pub fn extract_cells(video: &Video, config: &TimeConfig) -> Result<Video, Error> {
    let n = config.n();
    if video.frame_count() != config.t_star() {
        return Err(Error::WrongFrameCount {
            expected: config.t_star(),
            actual: video.frame_count(),
        });
    }
    if video.height() % n != 0 || video.width() % n != 0 {
        return Err(Error::GridNotDivisible);
    }
    let (cell_h, cell_w) = (video.height() / n, video.width() / n);
    let map = build_index_map(config);
    let mut out: Vec<Option<Frame>> = alloc::vec![None; map.len()];
    for (j, frame) in video.frames().iter().enumerate() {
        for cell in 0..n * n {
            let rect = CropRect {
                top: (cell / n) * cell_h,
                left: (cell % n) * cell_w,
                height: cell_h,
                width: cell_w,
            };
            out[map.source_index(j, cell)] = Some(crop(frame, rect)?);
        }
    }
    let frames = out.into_iter().map(|f| f.expect("index map is a bijection")).collect();
    Video::new(frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn one_pixel_video(values: &[f32]) -> Video {
        Video::new(values.iter().map(|&v| Frame::new(1, 1, 1, vec![v]).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn adjusted_indices_identity_and_repeat() {
        assert_eq!(adjusted_indices(8, 8), (0..8).collect::<Vec<_>>());
        assert_eq!(adjusted_indices(4, 8), vec![0, 0, 1, 1, 2, 2, 3, 3]);
    }

    // Brute-force evaluation of floor(k*10/4) for k = 0..3.
    #[test]
    fn adjusted_indices_subsample() {
        assert_eq!(adjusted_indices(10, 4), vec![0, 2, 5, 7]);
    }

    #[test]
    fn adjusted_indices_cover_all_sources_when_growing() {
        for t in 1..20usize {
            for l in t..60 {
                let idx = adjusted_indices(t, l);
                let mut seen = vec![false; t];
                for i in idx {
                    seen[i] = true;
                }
                assert!(seen.iter().all(|&s| s), "t={t} l={l}");
            }
        }
    }

    #[test]
    fn index_map_spatial_example() {
        let cfg = TimeConfig::new(2, 2, 2, 2, Arrangement::Spatial).unwrap();
        let map = build_index_map(&cfg);
        assert_eq!(&map.entries()[0..4], &[0, 2, 4, 6]);
        assert_eq!(&map.entries()[4..8], &[1, 3, 5, 7]);
    }

    #[test]
    fn index_map_temporal_example() {
        let cfg = TimeConfig::new(2, 2, 2, 2, Arrangement::Temporal).unwrap();
        let map = build_index_map(&cfg);
        assert_eq!(&map.entries()[0..4], &[0, 1, 2, 3]);
        assert_eq!(&map.entries()[4..8], &[4, 5, 6, 7]);
    }

    #[test]
    fn index_map_n1_reduces_to_identity() {
        for arrangement in [Arrangement::Spatial, Arrangement::Temporal] {
            let cfg = TimeConfig::new(1, 5, 4, 4, arrangement).unwrap();
            let map = build_index_map(&cfg);
            for j in 0..5 {
                assert_eq!(map.source_index(j, 0), j);
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(TimeConfig::new(0, 1, 4, 4, Arrangement::Spatial).is_err());
        assert!(TimeConfig::new(2, 0, 4, 4, Arrangement::Spatial).is_err());
        assert!(TimeConfig::new(4, 1, 3, 8, Arrangement::Spatial).is_err());
        assert!(TimeConfig::new(2, 2, 4, 4, Arrangement::Spatial).is_ok());
    }

    #[test]
    fn transform_spatial_example() {
        let v = one_pixel_video(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0].map(|k| k / 8.0));
        let cfg = TimeConfig::new(2, 2, 2, 2, Arrangement::Spatial).unwrap();
        let out = time_transform(&v, &cfg).unwrap();
        assert_eq!(out.frame_count(), 2);
        let expect = |f: &Frame, vals: [f32; 4]| {
            assert_eq!(f.data(), &vals.map(|k| k / 8.0));
        };
        expect(&out.frames()[0], [1.0, 3.0, 5.0, 7.0]);
        expect(&out.frames()[1], [2.0, 4.0, 6.0, 8.0]);
    }

    #[test]
    fn transform_temporal_example() {
        let v = one_pixel_video(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0].map(|k| k / 8.0));
        let cfg = TimeConfig::new(2, 2, 2, 2, Arrangement::Temporal).unwrap();
        let out = time_transform(&v, &cfg).unwrap();
        assert_eq!(out.frames()[0].data(), &[1.0, 2.0, 3.0, 4.0].map(|k| k / 8.0));
        assert_eq!(out.frames()[1].data(), &[5.0, 6.0, 7.0, 8.0].map(|k| k / 8.0));
    }

    #[test]
    fn extract_recovers_spatial_example() {
        let values: Vec<f32> = (1..=8).map(|k| k as f32 / 8.0).collect();
        let v = one_pixel_video(&values);
        let cfg = TimeConfig::new(2, 2, 2, 2, Arrangement::Spatial).unwrap();
        let out = time_transform(&v, &cfg).unwrap();
        let cells = extract_cells(&out, &cfg).unwrap();
        assert_eq!(cells.frame_count(), 8);
        for (i, f) in cells.frames().iter().enumerate() {
            assert_eq!(f.data(), &[(i as f32 + 1.0) / 8.0]);
        }
    }

    #[test]
    fn extract_n1_is_identity() {
        let v = one_pixel_video(&[0.1, 0.2, 0.3]);
        let cfg = TimeConfig::new(1, 3, 1, 1, Arrangement::Spatial).unwrap();
        assert_eq!(extract_cells(&v, &cfg).unwrap(), v);
    }

    #[test]
    fn extract_rejects_non_divisible() {
        let v = Video::new(vec![Frame::filled(3, 3, 1, 0.0).unwrap(); 2]).unwrap();
        let cfg = TimeConfig::new(2, 2, 3, 3, Arrangement::Spatial).unwrap();
        assert_eq!(extract_cells(&v, &cfg), Err(Error::GridNotDivisible));
    }

    #[test]
    fn augment_identity_is_bit_exact() {
        let v = one_pixel_video(&[0.25, 0.5]);
        assert_eq!(apply_augment(&v, &AugmentSpec::default()).unwrap(), v);
    }

    #[test]
    fn flip_is_an_involution() {
        let f = Frame::new(2, 3, 1, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        let v = Video::new(vec![f]).unwrap();
        let spec = AugmentSpec { horizontal_flip: true, ..AugmentSpec::default() };
        let once = apply_augment(&v, &spec).unwrap();
        assert_ne!(once, v);
        assert_eq!(apply_augment(&once, &spec).unwrap(), v);
    }

    // Naive per-pixel oracle: one clockwise quarter turn maps (r, c) to
    // (c, h - 1 - r).
    #[test]
    fn rotation_matches_pixel_oracle() {
        let f = Frame::new(2, 3, 1, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        let v = Video::new(vec![f.clone()]).unwrap();
        let spec = AugmentSpec { rotation_quarter_turns: 1, ..AugmentSpec::default() };
        let out = apply_augment(&v, &spec).unwrap();
        let rotated = &out.frames()[0];
        assert_eq!((rotated.height(), rotated.width()), (3, 2));
        for r in 0..2 {
            for c in 0..3 {
                assert_eq!(rotated.get(c, 2 - 1 - r, 0), f.get(r, c, 0));
            }
        }
    }

    #[test]
    fn four_rotations_are_identity() {
        let f = Frame::new(2, 3, 3, (0..18).map(|i| i as f32 / 18.0).collect()).unwrap();
        let v = Video::new(vec![f]).unwrap();
        let spec = AugmentSpec { rotation_quarter_turns: 1, ..AugmentSpec::default() };
        let mut cur = v.clone();
        for _ in 0..4 {
            cur = apply_augment(&cur, &spec).unwrap();
        }
        assert_eq!(cur, v);
    }

    #[test]
    fn crop_out_of_bounds_is_rejected() {
        let v = Video::new(vec![Frame::filled(4, 4, 1, 0.0).unwrap()]).unwrap();
        let spec = AugmentSpec {
            crop: Some(CropRect { top: 2, left: 2, height: 3, width: 2 }),
            ..AugmentSpec::default()
        };
        assert_eq!(apply_augment(&v, &spec), Err(Error::CropOutOfBounds));
    }

    #[test]
    fn crop_takes_the_requested_window() {
        let f = Frame::new(2, 3, 1, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        let v = Video::new(vec![f]).unwrap();
        let spec = AugmentSpec {
            crop: Some(CropRect { top: 1, left: 1, height: 1, width: 2 }),
            ..AugmentSpec::default()
        };
        let out = apply_augment(&v, &spec).unwrap();
        assert_eq!(out.frames()[0].data(), &[0.5, 0.6]);
    }

    #[test]
    fn n1_matches_uniform_sampling_bit_exactly() {
        let values: Vec<f32> = (0..13).map(|k| k as f32 / 13.0).collect();
        let v = one_pixel_video(&values);
        for arrangement in [Arrangement::Spatial, Arrangement::Temporal] {
            let cfg = TimeConfig::new(1, 5, 1, 1, arrangement).unwrap();
            let out = time_transform(&v, &cfg).unwrap();
            assert_eq!(out, adjust_length(&v, 5).unwrap());
        }
    }

    #[test]
    fn output_shape_contract_holds_with_non_divisible_sizes() {
        let v = Video::new(vec![Frame::filled(5, 7, 3, 0.4).unwrap(); 3]).unwrap();
        let cfg = TimeConfig::new(3, 4, 10, 11, Arrangement::Temporal).unwrap();
        let out = time_transform(&v, &cfg).unwrap();
        assert_eq!(out.frame_count(), 4);
        assert_eq!((out.height(), out.width(), out.channels()), (10, 11, 3));
    }
}
