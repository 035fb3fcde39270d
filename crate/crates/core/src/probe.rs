//! Linear probe measuring how much label-relevant information a single
//! rearranged frame carries.
//!
//! The probe is deliberately minimal: flatten output frame 0 of the
//! transform (grayscaled and downsampled), then fit L2-regularized
//! logistic regression by full-batch gradient descent from zero-initialized
//! weights. Everything is f64 and single-threaded, so runs are exactly
//! reproducible and the analytic gradient can be checked against central
//! finite differences to tight tolerances.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::frame::{resize_bilinear, to_grayscale, Video};
use crate::transform::{time_transform, TimeConfig};

/// Gradient-descent settings. The L2 penalty applies to the weights only,
/// not the bias.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { learning_rate: 0.1, epochs: 200, l2: 1e-4, seed: 0 }
    }
}

/// Trained logistic-regression probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeModel {
    weights: Vec<f64>,
    bias: f64,
    config: TrainConfig,
}

impl ProbeModel {
    pub fn from_parts(weights: Vec<f64>, bias: f64, config: TrainConfig) -> Self {
        Self { weights, bias, config }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    fn logit(&self, x: &[f32]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn predict_proba(&self, x: &[f32]) -> f64 {
        sigmoid(self.logit(x))
    }

    /// Decision threshold 0.5, i.e. the sign of the logit.
    pub fn predict(&self, x: &[f32]) -> bool {
        self.logit(x) >= 0.0
    }
}

fn dot(w: &[f64], x: &[f32]) -> f64 {
    w.iter().zip(x).map(|(&wi, &xi)| wi * xi as f64).sum()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// log(1 + e^z), computed without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + libm::log1p(libm::exp(-libm::fabs(z)))
}

fn check_dataset(features: &[Vec<f32>], labels: &[bool]) -> Result<usize, Error> {
    if features.is_empty() || features.len() != labels.len() {
        return Err(Error::EmptyDataset);
    }
    let dim = features[0].len();
    if dim == 0 || features.iter().any(|f| f.len() != dim) {
        return Err(Error::FeatureLengthMismatch);
    }
    Ok(dim)
}

/// Mean cross-entropy plus `l2/2 * ||w||^2`.
pub fn loss(
    weights: &[f64],
    bias: f64,
    features: &[Vec<f32>],
    labels: &[bool],
    l2: f64,
) -> f64 {
    let m = features.len() as f64;
    let mut total = 0.0;
    for (x, &y) in features.iter().zip(labels) {
        let z = dot(weights, x) + bias;
        total += softplus(z) - if y { z } else { 0.0 };
    }
    let penalty = 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>();
    total / m + penalty
}

/// Analytic gradient of [`loss`] with respect to the weights and bias.
pub fn gradient(
    weights: &[f64],
    bias: f64,
    features: &[Vec<f32>],
    labels: &[bool],
    l2: f64,
) -> (Vec<f64>, f64) {
    let m = features.len() as f64;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for (x, &y) in features.iter().zip(labels) {
        let residual = sigmoid(dot(weights, x) + bias) - if y { 1.0 } else { 0.0 };
        for (g, &xi) in grad_w.iter_mut().zip(x) {
            *g += residual * xi as f64;
        }
        grad_b += residual;
    }
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g = *g / m + l2 * w;
    }
    (grad_w, grad_b / m)
}

/// Full-batch gradient descent from zero-initialized weights. Requires at
/// least two samples of each class. Deterministic: equal inputs and config
/// give bit-identical models.
pub fn train(
    features: &[Vec<f32>],
    labels: &[bool],
    config: &TrainConfig,
) -> Result<ProbeModel, Error> {
    let dim = check_dataset(features, labels)?;
    let positives = labels.iter().filter(|&&y| y).count();
    if positives < 2 || labels.len() - positives < 2 {
        return Err(Error::DegenerateLabels);
    }
    let mut weights = vec![0.0; dim];
    let mut bias = 0.0;
    for _ in 0..config.epochs {
        let (grad_w, grad_b) = gradient(&weights, bias, features, labels, config.l2);
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= config.learning_rate * g;
        }
        bias -= config.learning_rate * grad_b;
    }
    Ok(ProbeModel { weights, bias, config: config.clone() })
}

/// Overall and per-class accuracy; index 0 is the `false` class.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub accuracy: f64,
    pub class_accuracy: [f64; 2],
}

pub fn evaluate(
    model: &ProbeModel,
    features: &[Vec<f32>],
    labels: &[bool],
) -> Result<Evaluation, Error> {
    let dim = check_dataset(features, labels)?;
    if dim != model.dimension() {
        return Err(Error::FeatureLengthMismatch);
    }
    let mut correct = [0usize; 2];
    let mut total = [0usize; 2];
    for (x, &y) in features.iter().zip(labels) {
        let class = y as usize;
        total[class] += 1;
        if model.predict(x) == y {
            correct[class] += 1;
        }
    }
    let per_class = |c: usize| {
        if total[c] == 0 {
            1.0
        } else {
            correct[c] as f64 / total[c] as f64
        }
    };
    Ok(Evaluation {
        accuracy: (correct[0] + correct[1]) as f64 / labels.len() as f64,
        class_accuracy: [per_class(0), per_class(1)],
    })
}

/// Feature vector of one video: transform, take output frame 0, grayscale,
/// downsample to `probe_size` square, flatten row-major.
pub fn featurize(
    video: &Video,
    config: &TimeConfig,
    probe_size: usize,
) -> Result<Vec<f32>, Error> {
    if probe_size == 0 {
        return Err(Error::ZeroDimension);
    }
    let transformed = time_transform(video, config)?;
    let gray = to_grayscale(&transformed.frames()[0])?;
    let small = resize_bilinear(&gray, probe_size, probe_size)?;
    Ok(small.data().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;
    use crate::transform::Arrangement;

    fn xor_free_dataset() -> (Vec<Vec<f32>>, Vec<bool>) {
        // Linearly separable on the first coordinate.
        let features = vec![
            vec![0.0, 0.3],
            vec![0.1, 0.9],
            vec![0.9, 0.2],
            vec![1.0, 0.8],
        ];
        let labels = vec![false, false, true, true];
        (features, labels)
    }

    #[test]
    fn separable_dataset_reaches_full_accuracy() {
        let (features, labels) = xor_free_dataset();
        let config = TrainConfig { epochs: 2000, learning_rate: 0.5, l2: 0.0, seed: 0 };
        let model = train(&features, &labels, &config).unwrap();
        let eval = evaluate(&model, &features, &labels).unwrap();
        assert_eq!(eval.accuracy, 1.0);
    }

    #[test]
    fn constant_features_predict_the_prior() {
        let features = vec![vec![0.5f32; 4]; 10];
        let labels: Vec<bool> = (0..10).map(|i| i < 4).collect();
        let model = train(&features, &labels, &TrainConfig::default()).unwrap();
        let eval = evaluate(&model, &features, &labels).unwrap();
        // Majority class is `false` with prior 0.6.
        assert_eq!(eval.accuracy, 0.6);
        assert_eq!(eval.class_accuracy, [1.0, 0.0]);
    }

    #[test]
    fn single_class_is_rejected() {
        let features = vec![vec![0.0f32], vec![1.0]];
        assert_eq!(
            train(&features, &[true, true], &TrainConfig::default()),
            Err(Error::DegenerateLabels)
        );
    }

    #[test]
    fn empty_evaluation_is_rejected() {
        let model = ProbeModel::from_parts(vec![0.0], 0.0, TrainConfig::default());
        assert_eq!(evaluate(&model, &[], &[]), Err(Error::EmptyDataset));
    }

    #[test]
    fn perfect_and_inverted_predictors() {
        let features = vec![vec![-1.0f32], vec![1.0], vec![-0.5], vec![0.5]];
        let labels = vec![false, true, false, true];
        let perfect = ProbeModel::from_parts(vec![5.0], 0.0, TrainConfig::default());
        assert_eq!(evaluate(&perfect, &features, &labels).unwrap().accuracy, 1.0);
        let inverted = ProbeModel::from_parts(vec![-5.0], 0.0, TrainConfig::default());
        assert_eq!(evaluate(&inverted, &features, &labels).unwrap().accuracy, 0.0);
    }

    #[test]
    fn training_is_deterministic() {
        let (features, labels) = xor_free_dataset();
        let a = train(&features, &labels, &TrainConfig::default()).unwrap();
        let b = train(&features, &labels, &TrainConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    // First-step scale covariance: scaling features by c and the learning
    // rate by 1/c^2 scales the first weight update by 1/c, leaving the
    // first-step logits (and so the predicted labels) unchanged.
    #[test]
    fn first_step_update_is_scale_covariant() {
        let (features, labels) = xor_free_dataset();
        let scale = 4.0f32;
        let scaled: Vec<Vec<f32>> =
            features.iter().map(|f| f.iter().map(|&v| v * scale).collect()).collect();
        let (g, _) = gradient(&vec![0.0; 2], 0.0, &features, &labels, 0.0);
        let (gs, _) = gradient(&vec![0.0; 2], 0.0, &scaled, &labels, 0.0);
        for (a, b) in g.iter().zip(&gs) {
            assert!((b - a * scale as f64).abs() < 1e-12);
        }
        // One step with lr and lr/scale^2 respectively.
        let lr = 0.1;
        let w: Vec<f64> = g.iter().map(|gi| -lr * gi).collect();
        let ws: Vec<f64> = gs.iter().map(|gi| -(lr / (scale as f64).powi(2)) * gi).collect();
        for (x, xs) in features.iter().zip(&scaled) {
            let z = dot(&w, x);
            let zs = dot(&ws, xs);
            assert!((z - zs).abs() < 1e-12);
        }
    }

    #[test]
    fn featurize_black_video_is_zero() {
        let v = Video::new(vec![Frame::filled(16, 16, 1, 0.0).unwrap(); 8]).unwrap();
        let cfg = TimeConfig::new(2, 2, 16, 16, Arrangement::Spatial).unwrap();
        let features = featurize(&v, &cfg, 4).unwrap();
        assert_eq!(features, vec![0.0; 16]);
    }

    #[test]
    fn featurize_n1_is_the_first_sampled_frame() {
        let frames: Vec<Frame> = (0..8)
            .map(|k| Frame::filled(4, 4, 1, k as f32 / 8.0).unwrap())
            .collect();
        let v = Video::new(frames).unwrap();
        let cfg = TimeConfig::new(1, 4, 4, 4, Arrangement::Spatial).unwrap();
        let features = featurize(&v, &cfg, 4).unwrap();
        assert_eq!(features, vec![0.0; 16]);
    }

    // Follows the transform example: four one-pixel frames per grid cell
    // keep their four distinct values.
    #[test]
    fn featurize_n2_carries_four_distinct_values() {
        let frames: Vec<Frame> = (1..=8)
            .map(|k| Frame::new(1, 1, 1, vec![k as f32 / 8.0]).unwrap())
            .collect();
        let v = Video::new(frames).unwrap();
        let cfg = TimeConfig::new(2, 2, 2, 2, Arrangement::Spatial).unwrap();
        let features = featurize(&v, &cfg, 2).unwrap();
        let mut distinct = features.clone();
        distinct.sort_by(f32::total_cmp);
        distinct.dedup();
        assert_eq!(distinct.len(), 4);
        assert_eq!(features, vec![1.0 / 8.0, 3.0 / 8.0, 5.0 / 8.0, 7.0 / 8.0]);
    }
}
