//! `labels.csv`: one `filename,label` row per sample, with a header.

use std::path::Path;

use timelayer_core::synth::Direction;

use crate::error::ToolError;

pub const HEADER: &str = "filename,label";

pub fn write_labels(rows: &[(String, Direction)], path: &Path) -> Result<(), ToolError> {
    let mut out = String::from(HEADER);
    out.push('\n');
    for (name, direction) in rows {
        out.push_str(&format!("{name},{}\n", direction.as_str()));
    }
    std::fs::write(path, out).map_err(|e| ToolError::io(path, e))
}

pub fn read_labels(path: &Path) -> Result<Vec<(String, Direction)>, ToolError> {
    let text = std::fs::read_to_string(path).map_err(|e| ToolError::io(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (idx == 0 && line == HEADER) {
            continue;
        }
        let (name, label) = line.split_once(',').ok_or_else(|| ToolError::Labels {
            path: path.to_path_buf(),
            line: idx + 1,
            message: "expected filename,label".into(),
        })?;
        let direction = Direction::parse(label.trim()).ok_or_else(|| ToolError::Labels {
            path: path.to_path_buf(),
            line: idx + 1,
            message: format!("unknown label {label:?}"),
        })?;
        rows.push((name.trim().to_string(), direction));
    }
    if rows.is_empty() {
        return Err(ToolError::Labels {
            path: path.to_path_buf(),
            line: 0,
            message: "no label rows".into(),
        });
    }
    Ok(rows)
}
