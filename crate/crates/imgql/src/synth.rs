//! Synthetic test volumes.
//!
//! The head phantom mimics the tissue layout a segmentation session
//! expects: a dark surround, a bright outer rim, a low-intensity ring
//! under it, a mid-intensity disk, and an embedded bright blob wrapped in
//! a brighter ring, plus optional salt noise. Intensities are chosen so
//! that after normalization they land inside the standard threshold
//! bands (low < 0.5 < mid < 1.3, blob in 1.17..1.47, ring in 1.53..2.4,
//! rim > 1.7).

use crate::io::{Volume, VolumeData};

/// Intensity levels of [`head_phantom`], before normalization. The
/// mid-level is tuned so the mean over significant points is close to 1,
/// making the phantom approximately normalization-invariant.
pub const BACKGROUND: f64 = 0.04;
pub const INNER_RING: f64 = 0.2;
pub const MID: f64 = 0.8305;
pub const BLOB: f64 = 1.32;
pub const BLOB_RING: f64 = 1.9;
pub const RIM: f64 = 1.95;

/// A synthetic head-like phantom with ground-truth masks.
#[derive(Debug, Clone)]
pub struct Phantom {
    pub volume: Volume,
    /// Ground truth of the embedded blob ("tumor"), by linear index.
    pub blob: Vec<bool>,
    /// Ground truth of the ring around the blob ("oedema").
    pub blob_ring: Vec<bool>,
}

/// Builds a 256×256 phantom at 0.5 mm spacing.
///
/// Layout (radii in pixels around the image center): head disk of radius
/// 100 with a bright rim for 92 < r ≤ 100, a low ring for 84 < r ≤ 92 and
/// mid intensity inside; a blob of radius 20 centred 22 px right of
/// center, wrapped by a ring out to radius 32. `noise_pixels` randomly
/// placed single pixels are overwritten with rim- or blob-level values,
/// seeded deterministically.
pub fn head_phantom(noise_pixels: usize, seed: u64) -> Phantom {
    let n = 256usize;
    let c = 127.5;
    let (bx, by) = (c + 22.0, c);
    let mut values = vec![BACKGROUND as f32; n * n];
    let mut blob = vec![false; n * n];
    let mut blob_ring = vec![false; n * n];

    for y in 0..n {
        for x in 0..n {
            let idx = y * n + x;
            let r = ((x as f64 - c).powi(2) + (y as f64 - c).powi(2)).sqrt();
            let rb = ((x as f64 - bx).powi(2) + (y as f64 - by).powi(2)).sqrt();
            let v = if r > 100.0 {
                BACKGROUND
            } else if r > 92.0 {
                RIM
            } else if r > 84.0 {
                INNER_RING
            } else if rb <= 20.0 {
                blob[idx] = true;
                BLOB
            } else if rb <= 32.0 {
                blob_ring[idx] = true;
                BLOB_RING
            } else {
                MID
            };
            values[idx] = v as f32;
        }
    }

    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..noise_pixels {
        let idx = (next() % (n * n) as u64) as usize;
        values[idx] = if next() % 2 == 0 { RIM } else { BLOB } as f32;
    }

    Phantom {
        volume: Volume::new(vec![n, n], vec![0.5, 0.5], VolumeData::F32(values)).unwrap(),
        blob,
        blob_ring,
    }
}
