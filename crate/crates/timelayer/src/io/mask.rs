//! Tube mask export: portable bitmap (P1, `1` = masked) or a JSON
//! description with the masked (row, col) pairs.

use std::path::Path;

use serde_json::json;
use timelayer_core::masking::TubeMask;

use crate::error::ToolError;

/// ASCII PBM of the spatial patch grid. Every time slice of a tube mask is
/// identical, so one bitmap describes all of them.
pub fn mask_to_pbm(mask: &TubeMask) -> String {
    let mut out = format!("P1\n{} {}\n", mask.patch_cols(), mask.patch_rows());
    for r in 0..mask.patch_rows() {
        let row: Vec<&str> = (0..mask.patch_cols())
            .map(|c| if mask.is_masked(r, c) { "1" } else { "0" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn mask_to_json(mask: &TubeMask) -> String {
    let pairs: Vec<[usize; 2]> = mask.masked_pairs().iter().map(|&(r, c)| [r, c]).collect();
    json!({
        "patch_rows": mask.patch_rows(),
        "patch_cols": mask.patch_cols(),
        "t_steps": mask.t_steps(),
        "ratio": mask.ratio(),
        "masked": pairs,
    })
    .to_string()
}

/// Writes JSON when the path ends in `.json`, PBM otherwise.
pub fn write_mask(mask: &TubeMask, path: &Path) -> Result<(), ToolError> {
    let text = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        mask_to_json(mask)
    } else {
        mask_to_pbm(mask)
    };
    std::fs::write(path, text).map_err(|e| ToolError::io(path, e))
}
