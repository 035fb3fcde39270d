//! Deterministic parallel drivers.
//!
//! Per-frame work fans out over rayon and is gathered back in index order,
//! so results are bit-identical to the sequential functions in
//! `timelayer-core` — the parallel versions call exactly the same per-frame
//! code. `TIME_THREADS` caps the pool size (0 or unset means automatic).

use std::path::PathBuf;

use rayon::prelude::*;
use timelayer_core::diagnostics::{
    evaluate_sweep_cells, SampleSource, SweepConfig, SweepRow,
};
use timelayer_core::probe::featurize;
use timelayer_core::transform::{
    adjusted_indices, apply_augment, assemble_grid_frame, build_index_map, Arrangement,
    TimeConfig,
};
use timelayer_core::{resize_bilinear, Error as CoreError, Video};

use crate::error::ToolError;
use crate::io::read_video_dir;

pub const THREADS_ENV: &str = "TIME_THREADS";

/// Builds the global rayon pool from `TIME_THREADS`. Call once at startup;
/// later calls are ignored (rayon's pool is process-global).
pub fn init_thread_pool_from_env() -> Result<(), ToolError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| ToolError::Usage(format!("{THREADS_ENV} must be a number, got {value:?}")))?;
    if threads == 0 {
        return Ok(());
    }
    // An AlreadyInitialized error just means a pool exists; keep it.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Parallel [`timelayer_core::time_transform`]; output is bit-identical to
/// the sequential version.
pub fn time_transform_parallel(video: &Video, config: &TimeConfig) -> Result<Video, CoreError> {
    let augmented;
    let source = match config.augment() {
        Some(spec) => {
            augmented = apply_augment(video, spec)?;
            &augmented
        }
        None => video,
    };
    let (cell_h, cell_w) = config.cell_size();
    let cells = adjusted_indices(source.frame_count(), config.grid_frames())
        .into_par_iter()
        .map(|i| resize_bilinear(&source.frames()[i], cell_h, cell_w))
        .collect::<Result<Vec<_>, _>>()?;
    let map = build_index_map(config);
    let frames = (0..config.t_star())
        .into_par_iter()
        .map(|j| {
            let assembled = assemble_grid_frame(&cells, &map, j);
            if (assembled.height(), assembled.width()) == (config.out_h(), config.out_w()) {
                Ok(assembled)
            } else {
                resize_bilinear(&assembled, config.out_h(), config.out_w())
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Video::new(frames)
}

/// A labeled dataset on disk: one frame directory per sample, resolved
/// against `labels.csv` entries. Samples load on demand.
pub struct DiskDataset {
    data_dir: PathBuf,
    entries: Vec<(String, bool)>,
}

impl DiskDataset {
    pub fn new(data_dir: PathBuf, entries: Vec<(String, bool)>) -> Self {
        Self { data_dir, entries }
    }

    pub fn load(&self, index: usize) -> Result<(Video, bool), ToolError> {
        let (name, label) = &self.entries[index];
        Ok((read_video_dir(&self.data_dir.join(name), "*")?, *label))
    }

    pub fn entries(&self) -> &[(String, bool)] {
        &self.entries
    }
}

/// Featurizes every disk sample for each cell config, in parallel, with
/// full I/O error context. Each sample is read from disk exactly once.
pub fn featurize_disk(
    dataset: &DiskDataset,
    configs: &[TimeConfig],
    probe_size: usize,
) -> Result<(Vec<Vec<Vec<f32>>>, Vec<bool>), ToolError> {
    let per_sample: Vec<(Vec<Vec<f32>>, bool)> = (0..dataset.entries.len())
        .into_par_iter()
        .map(|idx| {
            let (video, label) = dataset.load(idx)?;
            let feats = configs
                .iter()
                .map(|cfg| featurize(&video, cfg, probe_size))
                .collect::<Result<Vec<_>, CoreError>>()?;
            Ok((feats, label))
        })
        .collect::<Result<_, ToolError>>()?;
    let labels = per_sample.iter().map(|(_, y)| *y).collect();
    let features = (0..configs.len())
        .map(|c| per_sample.iter().map(|(f, _)| f[c].clone()).collect())
        .collect();
    Ok((features, labels))
}

/// Featurizes every sample for one transform config, in parallel, gathered
/// in sample order.
pub fn featurize_all<S: SampleSource + Sync>(
    source: &S,
    config: &TimeConfig,
    probe_size: usize,
) -> Result<(Vec<Vec<f32>>, Vec<bool>), CoreError> {
    let rows: Vec<(Vec<f32>, bool)> = (0..source.len())
        .into_par_iter()
        .map(|idx| {
            let (video, label) = source.sample(idx)?;
            Ok((featurize(&video, config, probe_size)?, label))
        })
        .collect::<Result<_, CoreError>>()?;
    Ok(rows.into_iter().unzip())
}

/// Parallel sweep: features for every (n, arrangement) cell are computed
/// across samples with rayon, gathered in sample order, then trained and
/// evaluated exactly like `timelayer_core::diagnostics::run_sweep`. Rows
/// are bit-identical to the sequential harness.
pub fn run_sweep_parallel<S: SampleSource + Sync>(
    source: &S,
    n_values: &[usize],
    arrangements: &[Arrangement],
    config: &SweepConfig,
) -> Result<Vec<SweepRow>, CoreError> {
    if n_values.is_empty() || arrangements.is_empty() || source.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    let cells = timelayer_core::diagnostics::sweep_cells(n_values, arrangements, config)?;
    let per_sample: Vec<(Vec<Vec<f32>>, bool)> = (0..source.len())
        .into_par_iter()
        .map(|idx| {
            let (video, label) = source.sample(idx)?;
            let feats = cells
                .iter()
                .map(|(_, _, cfg)| featurize(&video, cfg, config.probe_size))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((feats, label))
        })
        .collect::<Result<_, CoreError>>()?;

    let labels: Vec<bool> = per_sample.iter().map(|(_, y)| *y).collect();
    let features: Vec<Vec<Vec<f32>>> = (0..cells.len())
        .map(|c| per_sample.iter().map(|(f, _)| f[c].clone()).collect())
        .collect();
    evaluate_sweep_cells(&cells, &features, &labels, config)
}
