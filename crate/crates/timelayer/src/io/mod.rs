//! Readers and writers: image-sequence video directories, the `NTA1`
//! tensor archive, label CSVs, mask export, and probe model persistence.

pub mod labels;
pub mod mask;
pub mod model;
pub mod nta;
pub mod pnm;

use std::cmp::Ordering;
use std::path::{Path, PathBuf};

use timelayer_core::{Frame, Video};

use crate::error::ToolError;

pub use labels::{read_labels, write_labels};
pub use mask::{mask_to_json, mask_to_pbm, write_mask};
pub use model::{load_model, save_model};
pub use nta::{read_archive, write_archive};

/// Output image format for video directories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Png,
    Ppm,
    Pgm,
}

impl ImageFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ImageFormat::Png => "png",
            ImageFormat::Ppm => "ppm",
            ImageFormat::Pgm => "pgm",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "png" => Some(ImageFormat::Png),
            "ppm" => Some(ImageFormat::Ppm),
            "pgm" => Some(ImageFormat::Pgm),
            _ => None,
        }
    }
}

/// Numeric-aware ordering: digit runs compare by value (then by length so
/// `frame_01` < `frame_001` is stable), so `frame_9` sorts before
/// `frame_10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (a, b) = (a.as_bytes(), b.as_bytes());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].is_ascii_digit() && b[j].is_ascii_digit() {
            let ai = i;
            let bj = j;
            while i < a.len() && a[i].is_ascii_digit() {
                i += 1;
            }
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            let va: u128 = std::str::from_utf8(&a[ai..i]).unwrap().parse().unwrap_or(u128::MAX);
            let vb: u128 = std::str::from_utf8(&b[bj..j]).unwrap().parse().unwrap_or(u128::MAX);
            match va.cmp(&vb).then((i - ai).cmp(&(j - bj))) {
                Ordering::Equal => {}
                other => return other,
            }
        } else {
            match a[i].cmp(&b[j]) {
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                other => return other,
            }
        }
    }
    (a.len() - i).cmp(&(b.len() - j))
}

/// `*` matches any run of characters; everything else is literal.
pub fn wildcard_match(pattern: &str, name: &str) -> bool {
    fn rec(p: &[u8], n: &[u8]) -> bool {
        match p.first() {
            None => n.is_empty(),
            Some(b'*') => (0..=n.len()).any(|k| rec(&p[1..], &n[k..])),
            Some(&c) => n.first() == Some(&c) && rec(&p[1..], &n[1..]),
        }
    }
    rec(pattern.as_bytes(), name.as_bytes())
}

fn decode_frame(path: &Path) -> Result<Frame, ToolError> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    match ext.as_str() {
        "pgm" | "ppm" => {
            let bytes = std::fs::read(path).map_err(|e| ToolError::io(path, e))?;
            pnm::decode(&bytes, path)
        }
        "png" => {
            let img = image::open(path)
                .map_err(|e| ToolError::Decode { path: path.to_path_buf(), message: e.to_string() })?;
            let (data, h, w, ch) = match img {
                image::DynamicImage::ImageLuma8(g) => {
                    let (w, h) = (g.width() as usize, g.height() as usize);
                    (g.into_raw(), h, w, 1)
                }
                image::DynamicImage::ImageRgb8(rgb) => {
                    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
                    (rgb.into_raw(), h, w, 3)
                }
                other => {
                    return Err(ToolError::Decode {
                        path: path.to_path_buf(),
                        message: format!(
                            "unsupported PNG pixel type {:?} (need 8-bit gray or RGB)",
                            other.color()
                        ),
                    })
                }
            };
            let values = data.iter().map(|&b| b as f32 / 255.0).collect();
            Frame::new(h, w, ch, values)
                .map_err(|e| ToolError::Decode { path: path.to_path_buf(), message: e.to_string() })
        }
        _ => Err(ToolError::Decode {
            path: path.to_path_buf(),
            message: "unrecognized extension (expected png, pgm, or ppm)".into(),
        }),
    }
}

/// Reads a video from a directory of image frames.
///
/// Files with a recognized extension (png, pgm, ppm) whose names match
/// `pattern` are decoded in natural-sort order. All frames must share one
/// shape.
pub fn read_video_dir(dir: &Path, pattern: &str) -> Result<Video, ToolError> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .map_err(|e| ToolError::io(dir, e))?
        .filter_map(|entry| {
            let entry = entry.ok()?;
            let name = entry.file_name().into_string().ok()?;
            let recognized = ["png", "pgm", "ppm"]
                .iter()
                .any(|ext| name.to_ascii_lowercase().ends_with(&format!(".{ext}")));
            (recognized && wildcard_match(pattern, &name) && entry.path().is_file())
                .then_some(name)
        })
        .collect();
    if names.is_empty() {
        return Err(ToolError::NoFrames(dir.to_path_buf()));
    }
    names.sort_by(|a, b| natural_cmp(a, b));

    let mut frames = Vec::with_capacity(names.len());
    let mut expected: Option<(usize, usize, usize)> = None;
    for name in &names {
        let path = dir.join(name);
        let frame = decode_frame(&path)?;
        let shape = (frame.height(), frame.width(), frame.channels());
        match expected {
            None => expected = Some(shape),
            Some(e) if e != shape => {
                return Err(ToolError::FrameShape { path, expected: e, actual: shape })
            }
            Some(_) => {}
        }
        frames.push(frame);
    }
    Ok(Video::new(frames)?)
}

/// Writes frames as `frame_%05d.<ext>`; returns the number written.
///
/// Values are quantized by `round(v * 255)`, so a write/read round trip is
/// exact to within half a quantization step (1/510 per pixel). PGM requires
/// single-channel video and PPM three channels.
pub fn write_video_dir(
    video: &Video,
    dir: &Path,
    format: ImageFormat,
) -> Result<usize, ToolError> {
    match (format, video.channels()) {
        (ImageFormat::Pgm, ch) if ch != 1 => return Err(ToolError::PgmChannels(ch)),
        (ImageFormat::Ppm, ch) if ch != 3 => return Err(ToolError::PpmChannels(ch)),
        _ => {}
    }
    std::fs::create_dir_all(dir).map_err(|e| ToolError::io(dir, e))?;
    for (i, frame) in video.frames().iter().enumerate() {
        let path = dir.join(format!("frame_{i:05}.{}", format.extension()));
        match format {
            ImageFormat::Pgm | ImageFormat::Ppm => {
                std::fs::write(&path, pnm::encode(frame)?).map_err(|e| ToolError::io(&path, e))?;
            }
            ImageFormat::Png => {
                let bytes: Vec<u8> = frame.data().iter().map(|&v| pnm::quantize(v)).collect();
                let color = match frame.channels() {
                    1 => image::ExtendedColorType::L8,
                    _ => image::ExtendedColorType::Rgb8,
                };
                image::save_buffer(
                    &path,
                    &bytes,
                    frame.width() as u32,
                    frame.height() as u32,
                    color,
                )
                .map_err(|e| ToolError::Decode { path: path.clone(), message: e.to_string() })?;
            }
        }
    }
    Ok(video.frame_count())
}

/// Paths of the frame files [`write_video_dir`] would produce.
pub fn frame_paths(dir: &Path, count: usize, format: ImageFormat) -> Vec<PathBuf> {
    (0..count).map(|i| dir.join(format!("frame_{i:05}.{}", format.extension()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_sort_orders_numerically() {
        let mut names = vec!["frame_10.png", "frame_9.png", "frame_100.png", "frame_2.png"];
        names.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(names, vec!["frame_2.png", "frame_9.png", "frame_10.png", "frame_100.png"]);
    }

    #[test]
    fn natural_sort_handles_mixed_text() {
        let mut names = vec!["b1", "a10", "a9", "a09"];
        names.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(names, vec!["a9", "a09", "a10", "b1"]);
    }

    #[test]
    fn wildcard_semantics() {
        assert!(wildcard_match("*", "anything.png"));
        assert!(wildcard_match("frame_*.png", "frame_00001.png"));
        assert!(!wildcard_match("frame_*.png", "other_00001.png"));
        assert!(wildcard_match("*.pgm", "x.pgm"));
        assert!(!wildcard_match("*.pgm", "x.png"));
    }
}
