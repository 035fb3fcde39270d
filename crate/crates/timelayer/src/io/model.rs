//! Probe model persistence inside an `NTA1` archive: a `weights` f32
//! tensor, a `bias` f32 scalar, and a JSON-encoded `config` entry stored
//! as u8 bytes. Weights train in f64 but are stored as f32, so save/load
//! round-trips to f32 precision.

use std::path::Path;

use serde::{Deserialize, Serialize};
use timelayer_core::archive::{TensorArchive, TensorEntry};
use timelayer_core::probe::{ProbeModel, TrainConfig};

use crate::error::ToolError;
use crate::io::nta;

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    learning_rate: f64,
    epochs: usize,
    l2: f64,
    seed: u64,
}

pub fn save_model(model: &ProbeModel, path: &Path) -> Result<(), ToolError> {
    let weights: Vec<f32> = model.weights().iter().map(|&w| w as f32).collect();
    let config = model.config();
    let config_json = serde_json::to_vec(&ConfigJson {
        learning_rate: config.learning_rate,
        epochs: config.epochs,
        l2: config.l2,
        seed: config.seed,
    })
    .expect("config serializes");

    let mut archive = TensorArchive::new();
    archive.insert(TensorEntry::from_f32("weights", vec![weights.len()], &weights)?)?;
    archive.insert(TensorEntry::from_f32("bias", vec![1], &[model.bias() as f32])?)?;
    archive.insert(TensorEntry::from_u8("config", vec![config_json.len()], &config_json)?)?;
    nta::write_archive(&archive, path)
}

pub fn load_model(path: &Path) -> Result<ProbeModel, ToolError> {
    let archive = nta::read_archive(path)?;
    let missing = |name: &str| ToolError::ManifestParse(format!("model archive lacks {name:?}"));
    let weights = archive
        .get("weights")
        .and_then(|t| t.as_f32())
        .ok_or_else(|| missing("weights"))?;
    let bias = archive
        .get("bias")
        .and_then(|t| t.as_f32())
        .and_then(|v| v.first().copied())
        .ok_or_else(|| missing("bias"))?;
    let config_bytes = archive.get("config").ok_or_else(|| missing("config"))?;
    let config: ConfigJson = serde_json::from_slice(config_bytes.data())
        .map_err(|e| ToolError::ManifestParse(format!("model config: {e}")))?;
    Ok(ProbeModel::from_parts(
        weights.iter().map(|&w| w as f64).collect(),
        bias as f64,
        TrainConfig {
            learning_rate: config.learning_rate,
            epochs: config.epochs,
            l2: config.l2,
            seed: config.seed,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn save_load_round_trips_to_f32_precision() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("probe.nta");
        let model = ProbeModel::from_parts(
            vec![0.125, -3.5, 0.25],
            1.75,
            TrainConfig { learning_rate: 0.05, epochs: 77, l2: 0.001, seed: 9 },
        );
        save_model(&model, &path).unwrap();
        let back = load_model(&path).unwrap();
        // The chosen values are exactly representable in f32.
        assert_eq!(back.weights(), model.weights());
        assert_eq!(back.bias(), model.bias());
        assert_eq!(back.config(), model.config());
    }
}
