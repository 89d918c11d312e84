//! First-order statistical texture analysis.
//!
//! Provides intensity histograms over point sets, the Pearson
//! cross-correlation between two histograms, and the statistical
//! comparison operator that classifies each point by how similar the
//! intensity distribution of a sphere around it is to that of a target
//! region.

use rayon::prelude::*;

use crate::error::{EvalError, Result};
use crate::formula::Cmp;
use crate::model::Model;
use crate::space::{GridSpace, PointSet};

/// An intensity histogram: `bins` counts over the half-open range
/// `[min, min + k·Δ)` with `Δ = (max − min)/k`. Values outside the range
/// contribute to no bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    counts: Vec<u64>,
    min: f64,
    max: f64,
}

impl Histogram {
    /// Builds a histogram from raw bin counts.
    pub fn from_counts(counts: Vec<u64>, min: f64, max: f64) -> Result<Self> {
        check_params(min, max, counts.len())?;
        Ok(Histogram { counts, min, max })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.min, self.max)
    }

    /// True when every bin holds the same count (zero standard deviation).
    pub fn is_constant(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }
}

fn check_params(min: f64, max: f64, bins: usize) -> Result<()> {
    if !(min < max) {
        return Err(EvalError::Parameter(format!(
            "histogram range must satisfy min < max, got [{min}, {max})"
        ))
        .into());
    }
    if bins == 0 {
        return Err(EvalError::Parameter("histogram needs at least one bin".into()).into());
    }
    Ok(())
}

#[inline]
fn bin_of(v: f64, min: f64, delta: f64, bins: usize) -> Option<usize> {
    let idx = (v - min) / delta;
    if idx >= 0.0 && idx < bins as f64 {
        Some(idx as usize)
    } else {
        None
    }
}

/// Histogram of the values of `attr` over the points of `region`.
pub fn histogram(
    m: &Model,
    attr: &str,
    region: &PointSet,
    min: f64,
    max: f64,
    bins: usize,
) -> Result<Histogram> {
    check_params(min, max, bins)?;
    let values = m.channel(attr).ok_or_else(|| EvalError::UnknownAttribute {
        name: attr.to_string(),
        loc: None,
    })?;
    let delta = (max - min) / bins as f64;
    let mut counts = vec![0u64; bins];
    for idx in region.iter() {
        if let Some(b) = bin_of(values[idx], min, delta, bins) {
            counts[b] += 1;
        }
    }
    Ok(Histogram { counts, min, max })
}

/// Pearson cross-correlation between two histograms with equal bin count.
///
/// Both histograms constant yields 1; exactly one constant yields 0.
pub fn cross_correlation(h1: &Histogram, h2: &Histogram) -> Result<f64> {
    if h1.bins() != h2.bins() {
        return Err(EvalError::Parameter(format!(
            "histograms have different bin counts: {} vs {}",
            h1.bins(),
            h2.bins()
        ))
        .into());
    }
    Ok(correlation_raw(&h1.counts, &h2.counts))
}

fn correlation_raw(c1: &[u64], c2: &[u64]) -> f64 {
    let k = c1.len() as f64;
    let mean1 = c1.iter().sum::<u64>() as f64 / k;
    let mean2 = c2.iter().sum::<u64>() as f64 / k;
    let mut num = 0.0;
    let mut den1 = 0.0;
    let mut den2 = 0.0;
    for (&a, &b) in c1.iter().zip(c2) {
        let da = a as f64 - mean1;
        let db = b as f64 - mean2;
        num += da * db;
        den1 += da * da;
        den2 += db * db;
    }
    match (den1 == 0.0, den2 == 0.0) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        // sqrt of the product keeps r(h,h) at exactly 1
        (false, false) => num / (den1 * den2).sqrt(),
    }
}

/// Offsets of the grid points within physical distance `rho` of a point,
/// precomputed once per (radius, spacing) pair and reused for every
/// sphere placement.
pub(crate) fn sphere_offsets(space: &GridSpace, rho: f64) -> Vec<[isize; 3]> {
    let mut sp = [1.0f64; 3];
    sp[..space.ndim()].copy_from_slice(space.spacing());
    let mut reach = [0isize; 3];
    for a in 0..space.ndim() {
        reach[a] = (rho / sp[a]).floor() as isize;
    }
    let mut out = Vec::new();
    for dz in -reach[2]..=reach[2] {
        for dy in -reach[1]..=reach[1] {
            for dx in -reach[0]..=reach[0] {
                let d2 = (dx as f64 * sp[0]).powi(2)
                    + (dy as f64 * sp[1]).powi(2)
                    + (dz as f64 * sp[2]).powi(2);
                if d2.sqrt() <= rho {
                    out.push([dx, dy, dz]);
                }
            }
        }
    }
    out
}

/// The statistical comparison operator.
///
/// For every point `x` of `restrict`, compares the histogram of
/// `attr_sphere` over the Euclidean sphere of radius `rho` around `x`
/// against the histogram of `attr_target` over `target`, and keeps `x`
/// when the cross-correlation satisfies `cmp c`. An empty target region
/// is permitted: its histogram is all-zero, hence constant, and the
/// special-case correlation rules apply.
#[allow(clippy::too_many_arguments)]
pub fn scmp(
    m: &Model,
    attr_sphere: &str,
    attr_target: &str,
    target: &PointSet,
    rho: f64,
    cmp: Cmp,
    c: f64,
    min: f64,
    max: f64,
    bins: usize,
    restrict: &PointSet,
) -> Result<PointSet> {
    check_params(min, max, bins)?;
    if !(rho >= 0.0) {
        return Err(EvalError::Parameter(format!("sphere radius must be >= 0, got {rho}")).into());
    }
    let space = m.space().clone();
    let sphere_values = m
        .channel(attr_sphere)
        .ok_or_else(|| EvalError::UnknownAttribute {
            name: attr_sphere.to_string(),
            loc: None,
        })?;
    let target_hist = histogram(m, attr_target, target, min, max, bins)?;
    let delta = (max - min) / bins as f64;
    let offsets = sphere_offsets(&space, rho);
    let dims = space.dims().to_vec();
    let ndim = space.ndim();

    let indices: Vec<usize> = restrict.iter().collect();
    let hits: Vec<usize> = indices
        .par_iter()
        .fold(
            || (vec![0u64; bins], Vec::new()),
            |(mut counts, mut hits), &idx| {
                counts.fill(0);
                let cc = space.coords_of(idx);
                for off in &offsets {
                    let mut ok = true;
                    let mut nc = [0usize; 3];
                    for a in 0..ndim {
                        let v = cc[a] as isize + off[a];
                        if v < 0 || v as usize >= dims[a] {
                            ok = false;
                            break;
                        }
                        nc[a] = v as usize;
                    }
                    if ok {
                        if let Some(b) = bin_of(sphere_values[space.index_of(nc)], min, delta, bins)
                        {
                            counts[b] += 1;
                        }
                    }
                }
                let r = correlation_raw(&counts, target_hist.counts());
                if cmp.eval(r, c) {
                    hits.push(idx);
                }
                (counts, hits)
            },
        )
        .map(|(_, hits)| hits)
        .reduce(Vec::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });

    Ok(PointSet::from_indices(space, hits))
}
