//! Checkpoint diffing and the parameter sweep harness.
//!
//! `compare_checkpoints` reports per-layer cosine similarity between two
//! tensor archives — the diagnostic for locating where a preprocessing
//! change moved a model's learned weights. `run_sweep` measures probe
//! accuracy across grid sides and arrangements on a labeled video dataset.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::archive::{TensorArchive, TensorEntry};
use crate::error::Error;
use crate::probe::{evaluate, featurize, train, TrainConfig};
use crate::rng::SplitMix64;
use crate::transform::{Arrangement, TimeConfig};
use crate::frame::Video;

/// Cosine similarity of two equal-length vectors, accumulated in f64.
///
/// Zero-norm sentinel: 1 if both vectors are zero, 0 if exactly one is.
/// The true value is reported without clamping, so the result lies in
/// [-1, 1] up to rounding.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64, Error> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch);
    }
    if a.is_empty() {
        return Err(Error::EmptyTensor);
    }
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    Ok(if na == 0.0 && nb == 0.0 {
        1.0
    } else if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / libm::sqrt(na * nb)
    })
}

/// Cosine similarity of two tensors; shapes must match exactly.
pub fn tensor_cosine(a: &TensorEntry, b: &TensorEntry) -> Result<f64, Error> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch);
    }
    cosine_similarity(&a.to_f64_vec(), &b.to_f64_vec())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityRow {
    pub layer: String,
    pub similarity: f64,
    pub elements: usize,
}

/// Per-layer similarity over the name intersection of two archives.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimilarityReport {
    pub rows: Vec<SimilarityRow>,
    pub unmatched_a: Vec<String>,
    pub unmatched_b: Vec<String>,
}

impl SimilarityReport {
    /// CSV with header `layer,cosine_similarity,elements`; similarity is
    /// printed with six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("layer,cosine_similarity,elements\n");
        for row in &self.rows {
            out.push_str(&format!("{},{:.6},{}\n", row.layer, row.similarity, row.elements));
        }
        out
    }
}

/// One row per common-name, matching-shape tensor, in `a`'s entry order.
/// Names present in only one archive land in the unmatched lists; matching
/// names with differing shapes are annotated and listed on both sides.
pub fn compare_checkpoints(a: &TensorArchive, b: &TensorArchive) -> Result<SimilarityReport, Error> {
    let mut report = SimilarityReport::default();
    for entry in a.entries() {
        match b.get(entry.name()) {
            Some(other) if other.shape() == entry.shape() => {
                report.rows.push(SimilarityRow {
                    layer: String::from(entry.name()),
                    similarity: tensor_cosine(entry, other)?,
                    elements: entry.element_count(),
                });
            }
            Some(other) => {
                let note = format!(
                    "{} (shape {:?} vs {:?})",
                    entry.name(),
                    entry.shape(),
                    other.shape()
                );
                report.unmatched_a.push(note.clone());
                report.unmatched_b.push(note);
            }
            None => report.unmatched_a.push(String::from(entry.name())),
        }
    }
    for entry in b.entries() {
        if a.get(entry.name()).is_none() {
            report.unmatched_b.push(String::from(entry.name()));
        }
    }
    Ok(report)
}

/// Random-access source of labeled videos. `true` labels a left-to-right
/// sample in the synthetic dataset; any binary labeling works.
///
/// Implementations regenerate or reload samples on demand so sweeps never
/// need a whole dataset in memory.
pub trait SampleSource {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn sample(&self, index: usize) -> Result<(Video, bool), Error>;
}

/// In-memory dataset.
pub struct SliceSource<'a>(pub &'a [(Video, bool)]);

impl SampleSource for SliceSource<'_> {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn sample(&self, index: usize) -> Result<(Video, bool), Error> {
        let (v, y) = &self.0[index];
        Ok((v.clone(), *y))
    }
}

/// Settings shared by every sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub t_star: usize,
    pub out_h: usize,
    pub out_w: usize,
    pub probe_size: usize,
    pub train: TrainConfig,
    /// Seed of the 80/20 train/test shuffle.
    pub split_seed: u64,
    /// Consecutive samples kept on the same side of the split. The default
    /// of 2 matches the twin layout of the synthetic direction dataset;
    /// splitting mirror twins across train and test would leak (a
    /// classifier can map a memorized sample onto its reflection), which is
    /// exactly what the pairing is meant to rule out. Use 1 for unpaired
    /// data.
    pub split_group: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            t_star: 16,
            out_h: 224,
            out_w: 224,
            probe_size: 32,
            train: TrainConfig::default(),
            split_seed: 42,
            split_group: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub arrangement: Arrangement,
    pub accuracy: f64,
}

/// CSV with header `n,arrangement,accuracy`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,arrangement,accuracy\n");
    for row in rows {
        out.push_str(&format!("{},{},{:.4}\n", row.n, row.arrangement.as_str(), row.accuracy));
    }
    out
}

/// Seeded shuffle split: first 80% of the permuted indices train, the rest
/// test.
pub fn split_indices(count: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    split_indices_grouped(count, 1, seed)
}

/// Like [`split_indices`], but blocks of `group` consecutive indices stay
/// on one side of the split (the final block may be shorter). The 80/20
/// ratio applies to the blocks.
pub fn split_indices_grouped(count: usize, group: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let group = group.max(1);
    let blocks = count.div_ceil(group);
    let mut order: Vec<usize> = (0..blocks).collect();
    let mut rng = SplitMix64::new(seed);
    for i in (1..blocks).rev() {
        let j = rng.next_below((i + 1) as u64) as usize;
        order.swap(i, j);
    }
    let train_blocks = blocks * 8 / 10;
    let expand = |block_ids: &[usize]| -> Vec<usize> {
        block_ids
            .iter()
            .flat_map(|&b| b * group..((b + 1) * group).min(count))
            .collect()
    };
    (expand(&order[..train_blocks]), expand(&order[train_blocks..]))
}

/// The deduplicated, (n, arrangement)-sorted cells of a sweep, with their
/// transform configs.
pub fn sweep_cells(
    n_values: &[usize],
    arrangements: &[Arrangement],
    config: &SweepConfig,
) -> Result<Vec<(usize, Arrangement, TimeConfig)>, Error> {
    let combos: BTreeSet<(usize, Arrangement)> = n_values
        .iter()
        .flat_map(|&n| arrangements.iter().map(move |&a| (n, a)))
        .collect();
    combos
        .into_iter()
        .map(|(n, a)| {
            TimeConfig::new(n, config.t_star, config.out_h, config.out_w, a)
                .map(|cfg| (n, a, cfg))
        })
        .collect()
}

/// Splits, trains, and evaluates each cell over its precomputed features
/// (`features[cell][sample]`). Shared by the sequential harness here and
/// the parallel featurizer in the companion crate.
pub fn evaluate_sweep_cells(
    cells: &[(usize, Arrangement, TimeConfig)],
    features: &[Vec<Vec<f32>>],
    labels: &[bool],
    config: &SweepConfig,
) -> Result<Vec<SweepRow>, Error> {
    let (train_idx, test_idx) =
        split_indices_grouped(labels.len(), config.split_group, config.split_seed);
    let mut rows = Vec::with_capacity(cells.len());
    for ((n, arrangement, _), feats) in cells.iter().zip(features) {
        let gather = |idx: &[usize]| -> (Vec<Vec<f32>>, Vec<bool>) {
            (
                idx.iter().map(|&i| feats[i].clone()).collect(),
                idx.iter().map(|&i| labels[i]).collect(),
            )
        };
        let (train_x, train_y) = gather(&train_idx);
        let (test_x, test_y) = gather(&test_idx);
        let model = train(&train_x, &train_y, &config.train)?;
        let eval = evaluate(&model, &test_x, &test_y)?;
        rows.push(SweepRow { n: *n, arrangement: *arrangement, accuracy: eval.accuracy });
    }
    Ok(rows)
}

/// Trains and evaluates the probe for every requested (n, arrangement)
/// cell. Duplicate cells are deduplicated and rows come out sorted by
/// (n, arrangement). Reported accuracy is on the held-out test split.
pub fn run_sweep<S: SampleSource>(
    source: &S,
    n_values: &[usize],
    arrangements: &[Arrangement],
    config: &SweepConfig,
) -> Result<Vec<SweepRow>, Error> {
    if n_values.is_empty() || arrangements.is_empty() || source.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let cells = sweep_cells(n_values, arrangements, config)?;

    // One pass over the dataset featurizes every cell so samples are
    // generated or loaded exactly once.
    let mut features: Vec<Vec<Vec<f32>>> = cells.iter().map(|_| Vec::new()).collect();
    let mut labels = Vec::with_capacity(source.len());
    for idx in 0..source.len() {
        let (video, label) = source.sample(idx)?;
        labels.push(label);
        for (slot, (_, _, cfg)) in features.iter_mut().zip(&cells) {
            slot.push(featurize(&video, cfg, config.probe_size)?);
        }
    }
    evaluate_sweep_cells(&cells, &features, &labels, config)
}
