//! The `NTA1` named-tensor archive.
//!
//! Layout, all multi-byte numbers little-endian:
//!
//! ```text
//! offset 0   magic bytes "NTA1"
//! offset 4   u64: manifest byte length
//! offset 12  UTF-8 JSON manifest: [{"name", "dtype", "shape", "offset"}, ...]
//! payload    starts at the first 64-byte-aligned offset after the manifest
//! ```
//!
//! Tensor offsets are relative to the payload start and each 64-byte
//! aligned. The writer is canonical (offsets assigned in entry order, zero
//! padding), so `write . read` is the identity on its own files and
//! `read . write` is the identity on archives.

use std::path::Path;

use serde::{Deserialize, Serialize};
use timelayer_core::archive::{Dtype, TensorArchive, TensorEntry};

use crate::error::ToolError;

const MAGIC: &[u8; 4] = b"NTA1";
const ALIGN: u64 = 64;

#[derive(Serialize, Deserialize)]
struct ManifestEntry {
    name: String,
    dtype: String,
    shape: Vec<u64>,
    offset: u64,
}

fn align_up(v: u64) -> u64 {
    v.div_ceil(ALIGN) * ALIGN
}

pub fn to_bytes(archive: &TensorArchive) -> Vec<u8> {
    let mut manifest = Vec::with_capacity(archive.len());
    let mut offset = 0u64;
    for entry in archive.entries() {
        manifest.push(ManifestEntry {
            name: entry.name().to_string(),
            dtype: entry.dtype().as_str().to_string(),
            shape: entry.shape().iter().map(|&d| d as u64).collect(),
            offset,
        });
        offset = align_up(offset + entry.data().len() as u64);
    }
    let manifest_json = serde_json::to_vec(&manifest).expect("manifest serializes");

    let header_len = 12 + manifest_json.len() as u64;
    let payload_start = align_up(header_len);
    let payload_len = archive
        .entries()
        .last()
        .map(|e| manifest.last().unwrap().offset + e.data().len() as u64)
        .unwrap_or(0);
    // An empty payload needs no alignment padding after the manifest.
    let total = if payload_len == 0 { header_len } else { payload_start + payload_len };
    let mut out = vec![0u8; total as usize];
    out[..4].copy_from_slice(MAGIC);
    out[4..12].copy_from_slice(&(manifest_json.len() as u64).to_le_bytes());
    out[12..12 + manifest_json.len()].copy_from_slice(&manifest_json);
    for (entry, m) in archive.entries().iter().zip(&manifest) {
        let start = (payload_start + m.offset) as usize;
        out[start..start + entry.data().len()].copy_from_slice(entry.data());
    }
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<TensorArchive, ToolError> {
    let len = bytes.len() as u64;
    if len < 4 || &bytes[..4] != MAGIC {
        return Err(ToolError::BadMagic);
    }
    if len < 12 {
        return Err(ToolError::Truncated { needed: 12, available: len });
    }
    let manifest_len = u64::from_le_bytes(bytes[4..12].try_into().unwrap());
    let manifest_end = 12u64
        .checked_add(manifest_len)
        .ok_or(ToolError::Truncated { needed: u64::MAX, available: len })?;
    if manifest_end > len {
        return Err(ToolError::Truncated { needed: manifest_end, available: len });
    }
    let manifest: Vec<ManifestEntry> =
        serde_json::from_slice(&bytes[12..manifest_end as usize])
            .map_err(|e| ToolError::ManifestParse(e.to_string()))?;
    let payload_start = align_up(manifest_end);

    // Validate alignment and extents before touching the payload.
    let mut extents: Vec<(u64, u64, &str)> = Vec::with_capacity(manifest.len());
    for m in &manifest {
        if m.offset % ALIGN != 0 {
            return Err(ToolError::MisalignedOffset { name: m.name.clone(), offset: m.offset });
        }
        let dtype = Dtype::parse(&m.dtype).ok_or_else(|| ToolError::UnknownDtype {
            name: m.name.clone(),
            dtype: m.dtype.clone(),
        })?;
        let elements = m
            .shape
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
            .ok_or(ToolError::Truncated { needed: u64::MAX, available: len })?;
        let byte_len = elements
            .checked_mul(dtype.size_bytes() as u64)
            .ok_or(ToolError::Truncated { needed: u64::MAX, available: len })?;
        let end = payload_start
            .checked_add(m.offset)
            .and_then(|s| s.checked_add(byte_len))
            .ok_or(ToolError::Truncated { needed: u64::MAX, available: len })?;
        if end > len {
            return Err(ToolError::Truncated { needed: end, available: len });
        }
        extents.push((m.offset, byte_len, &m.name));
    }
    let mut sorted = extents.clone();
    sorted.sort_by_key(|&(off, ..)| off);
    for pair in sorted.windows(2) {
        let (off_a, len_a, name_a) = pair[0];
        let (off_b, _, name_b) = pair[1];
        if off_a + len_a > off_b {
            return Err(ToolError::OverlappingExtents(name_a.to_string(), name_b.to_string()));
        }
    }

    let mut archive = TensorArchive::new();
    for (m, (offset, byte_len, _)) in manifest.iter().zip(&extents) {
        let start = (payload_start + offset) as usize;
        let dtype = Dtype::parse(&m.dtype).expect("dtype validated above");
        let shape = m.shape.iter().map(|&d| d as usize).collect();
        let data = bytes[start..start + *byte_len as usize].to_vec();
        archive.insert(TensorEntry::new(m.name.clone(), dtype, shape, data)?)?;
    }
    Ok(archive)
}

pub fn write_archive(archive: &TensorArchive, path: &Path) -> Result<(), ToolError> {
    std::fs::write(path, to_bytes(archive)).map_err(|e| ToolError::io(path, e))
}

pub fn read_archive(path: &Path) -> Result<TensorArchive, ToolError> {
    let bytes = std::fs::read(path).map_err(|e| ToolError::io(path, e))?;
    from_bytes(&bytes)
}
