//! Image I/O, preprocessing and the session driver.
//!
//! Volumes are 2D or 3D scalar grids loaded from minimal NIfTI-1 files or
//! grayscale PNGs. This module also hosts the intensity normalization
//! preprocessing step, the Dice coefficient, label palettes and the
//! end-to-end session runner.

mod nifti;
mod normalize;
mod png;
mod session;

pub use nifti::{read_nifti, write_nifti};
pub use normalize::{normalize, peak_threshold, NormalizeReport};
pub use png::{read_gray_png, write_overlay_png};
pub use session::{load_model, run_session, CheckOutcome, SessionOptions, SessionReport};

use std::path::Path;

use crate::error::{EvalError, LoadError, Result};
use crate::space::PointSet;

/// Scalar payload of a volume. Integer payloads are widened to `f64`
/// when attached to a model; nothing is rescaled.
#[derive(Debug, Clone, PartialEq)]
pub enum VolumeData {
    U8(Vec<u8>),
    I16(Vec<i16>),
    U16(Vec<u16>),
    F32(Vec<f32>),
}

impl VolumeData {
    pub fn len(&self) -> usize {
        match self {
            VolumeData::U8(v) => v.len(),
            VolumeData::I16(v) => v.len(),
            VolumeData::U16(v) => v.len(),
            VolumeData::F32(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A scalar image volume: 2 or 3 axis lengths, per-axis physical spacing
/// and the raw payload. `scale`, when present, is the NIfTI
/// slope/intercept pair applied when converting to attribute values.
#[derive(Debug, Clone, PartialEq)]
pub struct Volume {
    pub dims: Vec<usize>,
    pub spacing: Vec<f64>,
    pub data: VolumeData,
    pub scale: Option<(f32, f32)>,
}

impl Volume {
    pub fn new(dims: Vec<usize>, spacing: Vec<f64>, data: VolumeData) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if data.len() != expected {
            return Err(EvalError::ChannelLength {
                name: "<volume>".into(),
                expected,
                found: data.len(),
            }
            .into());
        }
        Ok(Volume {
            dims,
            spacing,
            data,
            scale: None,
        })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Widens the payload to `f64` attribute values, applying the
    /// slope/intercept scaling when a nonzero slope is present.
    pub fn attribute_values(&self) -> Vec<f64> {
        let raw: Vec<f64> = match &self.data {
            VolumeData::U8(v) => v.iter().map(|&x| x as f64).collect(),
            VolumeData::I16(v) => v.iter().map(|&x| x as f64).collect(),
            VolumeData::U16(v) => v.iter().map(|&x| x as f64).collect(),
            VolumeData::F32(v) => v.iter().map(|&x| x as f64).collect(),
        };
        match self.scale {
            Some((slope, inter)) if slope != 0.0 => raw
                .into_iter()
                .map(|x| x * slope as f64 + inter as f64)
                .collect(),
            _ => raw,
        }
    }
}

/// Loads a volume by file extension: `.nii` or `.png`.
pub fn read_volume(path: &Path) -> Result<Volume> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("nii") => read_nifti(path),
        Some("png") => read_gray_png(path),
        _ => Err(LoadError::UnsupportedFile {
            path: path.to_path_buf(),
        }
        .into()),
    }
}

/// Dice coefficient `2|A∩B| / (|A|+|B|)` between two segmentations over
/// the same space. Two empty segmentations agree perfectly: 1.
pub fn dice(a: &PointSet, b: &PointSet) -> Result<f64> {
    if a.space() != b.space() {
        return Err(EvalError::SpaceMismatch.into());
    }
    let denom = a.count() + b.count();
    if denom == 0 {
        return Ok(1.0);
    }
    Ok(2.0 * a.intersection(b).count() as f64 / denom as f64)
}

/// Default palette for label overlays. Labels 7 and 8 keep the
/// green/red convention of segmentation outputs; other labels get a
/// stable golden-angle hue.
pub fn label_color(label: u16) -> [u8; 3] {
    match label {
        7 => [0, 200, 0],
        8 => [220, 30, 30],
        _ => {
            let hue = (label as f64 * 137.508) % 360.0;
            hsv_to_rgb(hue, 0.85, 0.95)
        }
    }
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let c = v * s;
    let x = c * (1.0 - ((h / 60.0) % 2.0 - 1.0).abs());
    let m = v - c;
    let (r, g, b) = match (h / 60.0) as u32 % 6 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    [
        ((r + m) * 255.0).round() as u8,
        ((g + m) * 255.0).round() as u8,
        ((b + m) * 255.0).round() as u8,
    ]
}
