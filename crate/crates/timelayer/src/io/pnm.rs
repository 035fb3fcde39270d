//! Binary PGM (P5) and PPM (P6) with maxval 255.

use std::path::Path;

use timelayer_core::{Error as CoreError, Frame};

use crate::error::ToolError;

fn decode_err(path: &Path, message: impl Into<String>) -> ToolError {
    ToolError::Decode { path: path.to_path_buf(), message: message.into() }
}

/// Header tokens are separated by whitespace; `#` starts a comment that
/// runs to end of line.
fn next_token(bytes: &[u8], pos: &mut usize) -> Option<Vec<u8>> {
    while *pos < bytes.len() {
        match bytes[*pos] {
            b'#' => {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
            }
            b' ' | b'\t' | b'\r' | b'\n' => *pos += 1,
            _ => break,
        }
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (*pos > start).then(|| bytes[start..*pos].to_vec())
}

fn parse_dim(token: Option<Vec<u8>>, what: &str, path: &Path) -> Result<usize, ToolError> {
    let token = token.ok_or_else(|| decode_err(path, format!("missing {what}")))?;
    std::str::from_utf8(&token)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| decode_err(path, format!("invalid {what}")))
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<Frame, ToolError> {
    if bytes.len() < 2 {
        return Err(decode_err(path, "file too short"));
    }
    let channels = match &bytes[..2] {
        b"P5" => 1,
        b"P6" => 3,
        _ => return Err(decode_err(path, "not a binary PGM/PPM (magic must be P5 or P6)")),
    };
    let mut pos = 2;
    let width = parse_dim(next_token(bytes, &mut pos), "width", path)?;
    let height = parse_dim(next_token(bytes, &mut pos), "height", path)?;
    let maxval = parse_dim(next_token(bytes, &mut pos), "maxval", path)?;
    if maxval != 255 {
        return Err(decode_err(path, format!("unsupported maxval {maxval} (must be 255)")));
    }
    if width == 0 || height == 0 {
        return Err(decode_err(path, "zero dimension"));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(decode_err(path, "missing raster separator"));
    }
    pos += 1;
    let expected = width * height * channels;
    let raster = bytes
        .get(pos..pos + expected)
        .ok_or_else(|| decode_err(path, format!("raster truncated: expected {expected} bytes")))?;
    let data = raster.iter().map(|&b| b as f32 / 255.0).collect();
    Frame::new(height, width, channels, data).map_err(|e: CoreError| decode_err(path, e.to_string()))
}

pub fn encode(frame: &Frame) -> Result<Vec<u8>, ToolError> {
    let magic = match frame.channels() {
        1 => "P5",
        3 => "P6",
        ch => return Err(ToolError::PgmChannels(ch)),
    };
    let header = format!("{magic}\n{} {}\n255\n", frame.width(), frame.height());
    let mut out = header.into_bytes();
    out.extend(frame.data().iter().map(|&v| quantize(v)));
    Ok(out)
}

/// round(v * 255) clamped to [0, 255].
pub fn quantize(v: f32) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}
