//! Intensity normalization preprocessing.
//!
//! Divides every value by the mean intensity of the significant (non
//! background) points, so that fixed thresholds carry over between
//! acquisitions that differ by a global intensity scale. The background
//! is the below-threshold region that touches the image border, computed
//! by the model checker itself; the threshold follows the first valley
//! after the dark peak of the intensity histogram unless overridden.

use std::sync::Arc;

use crate::checker::Evaluator;
use crate::error::{EvalError, Result};
use crate::formula::{Cmp, Formula};
use crate::model::Model;
use crate::space::{Adjacency, GridSpace};

use super::{Volume, VolumeData};

/// What [`normalize`] decided along the way, for reporting.
#[derive(Debug, Clone)]
pub struct NormalizeReport {
    pub threshold: f64,
    pub mean: f64,
    pub significant_points: usize,
}

/// Background-threshold heuristic: smooth the 256-bin histogram with a
/// 5-bin moving average, find the global maximum within the lowest
/// quartile of bins, and return the upper edge of the first local
/// minimum after it.
pub fn peak_threshold(values: &[f64]) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in values {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !(hi > lo) {
        return lo; // constant image: nothing falls below the threshold
    }
    const BINS: usize = 256;
    let delta = (hi - lo) / BINS as f64;
    let mut hist = [0u64; BINS];
    for &v in values {
        if v.is_finite() {
            let b = (((v - lo) / delta) as usize).min(BINS - 1);
            hist[b] += 1;
        }
    }
    let smooth: Vec<f64> = (0..BINS)
        .map(|i| {
            let a = i.saturating_sub(2);
            let b = (i + 2).min(BINS - 1);
            hist[a..=b].iter().sum::<u64>() as f64 / (b - a + 1) as f64
        })
        .collect();
    let peak = (0..BINS / 4)
        .max_by(|&a, &b| smooth[a].total_cmp(&smooth[b]))
        .unwrap();
    let mut valley = BINS - 1;
    for i in peak + 1..BINS - 1 {
        if smooth[i] <= smooth[i + 1] {
            valley = i;
            break;
        }
    }
    lo + delta * (valley + 1) as f64
}

/// Normalizes a volume: output = input / mean(significant points).
///
/// Significant points are the complement of `touch(below-threshold,
/// border)`, evaluated with the checker. Fails when nothing significant
/// remains.
pub fn normalize(volume: &Volume, threshold_override: Option<f64>) -> Result<(Volume, NormalizeReport)> {
    let values = volume.attribute_values();
    let threshold = match threshold_override {
        Some(t) => t,
        None => peak_threshold(&values),
    };

    let space = Arc::new(GridSpace::new(
        &volume.dims,
        &volume.spacing,
        Adjacency::Orthodiagonal,
    )?);
    let mut model = Model::new(space);
    model.attach_channel("v", values.clone())?;
    let background_formula = Formula::touch(
        Formula::assertion("v", Cmp::Lt, threshold),
        Formula::Border,
    );
    let background = Evaluator::new(&model).check(&background_formula)?;
    let significant = background.complement();
    let count = significant.count();
    if count == 0 {
        return Err(EvalError::EmptySignificant.into());
    }
    let mean = significant.iter().map(|i| values[i]).sum::<f64>() / count as f64;
    if mean == 0.0 {
        return Err(EvalError::EmptySignificant.into());
    }

    let out = Volume::new(
        volume.dims.clone(),
        volume.spacing.clone(),
        VolumeData::F32(values.iter().map(|&v| (v / mean) as f32).collect()),
    )?;
    Ok((
        out,
        NormalizeReport {
            threshold,
            mean,
            significant_points: count,
        },
    ))
}
