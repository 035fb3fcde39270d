//! Finite-difference oracle for the probe gradient, and the monotone-loss
//! smoke test for the default training configuration.

use timelayer_core::probe::{gradient, loss, train, TrainConfig};
use timelayer_core::rng::SplitMix64;

fn random_batch(
    rng: &mut SplitMix64,
    samples: usize,
    dim: usize,
) -> (Vec<Vec<f32>>, Vec<bool>, Vec<f64>, f64) {
    let features = (0..samples)
        .map(|_| (0..dim).map(|_| rng.next_unit_f64() as f32).collect())
        .collect();
    let labels = (0..samples).map(|_| rng.next_u64() % 2 == 0).collect();
    let weights = (0..dim).map(|_| rng.next_unit_f64() * 2.0 - 1.0).collect();
    let bias = rng.next_unit_f64() * 2.0 - 1.0;
    (features, labels, weights, bias)
}

/// Central finite difference of the loss along one coordinate.
fn numeric_partial(
    weights: &[f64],
    bias: f64,
    features: &[Vec<f32>],
    labels: &[bool],
    l2: f64,
    coord: Option<usize>,
    step: f64,
) -> f64 {
    let mut perturb = |delta: f64| -> f64 {
        match coord {
            Some(i) => {
                let mut w = weights.to_vec();
                w[i] += delta;
                loss(&w, bias, features, labels, l2)
            }
            None => loss(weights, bias + delta, features, labels, l2),
        }
    };
    (perturb(step) - perturb(-step)) / (2.0 * step)
}

fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-8)
}

#[test]
fn analytic_gradient_matches_central_differences() {
    let mut rng = SplitMix64::new(2024);
    let step = 1e-5;
    let mut worst = 0.0f64;
    for draw in 0..20 {
        let dim = 3 + (draw % 5);
        let (features, labels, weights, bias) = random_batch(&mut rng, 6 + draw % 7, dim);
        // Include the L2 penalty in half the draws.
        let l2 = if draw % 2 == 0 { 0.0 } else { 0.05 };
        let (grad_w, grad_b) = gradient(&weights, bias, &features, &labels, l2);
        for i in 0..dim {
            let numeric =
                numeric_partial(&weights, bias, &features, &labels, l2, Some(i), step);
            worst = worst.max(relative_error(grad_w[i], numeric));
        }
        let numeric_b = numeric_partial(&weights, bias, &features, &labels, l2, None, step);
        worst = worst.max(relative_error(grad_b, numeric_b));
    }
    assert!(worst < 1e-5, "max relative error {worst}");
}

#[test]
fn loss_is_nonincreasing_with_default_config() {
    let mut rng = SplitMix64::new(7);
    let (features, labels, _, _) = random_batch(&mut rng, 40, 16);
    let config = TrainConfig::default();
    assert_eq!(config.learning_rate, 0.1);
    assert_eq!(config.epochs, 200);

    let mut weights = vec![0.0; 16];
    let mut bias = 0.0;
    let mut prev = loss(&weights, bias, &features, &labels, config.l2);
    for _ in 0..config.epochs {
        let (grad_w, grad_b) = gradient(&weights, bias, &features, &labels, config.l2);
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= config.learning_rate * g;
        }
        bias -= config.learning_rate * grad_b;
        let cur = loss(&weights, bias, &features, &labels, config.l2);
        assert!(cur <= prev + 1e-12, "loss increased: {prev} -> {cur}");
        prev = cur;
    }

    // The manual loop above is exactly what `train` runs.
    let model = train(&features, &labels, &config).unwrap();
    assert_eq!(model.weights(), &weights[..]);
    assert_eq!(model.bias(), bias);
}
