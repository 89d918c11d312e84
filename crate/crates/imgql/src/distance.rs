//! Distance transforms and evaluation of distance predicates.
//!
//! Two transforms are provided: an exact Euclidean distance transform
//! computed dimension by dimension with lower-envelope pruning (linear in
//! the number of points), and a chamfer transform computed by a modified
//! Dijkstra sweep over the weighted grid adjacency (quasi-linear). Both
//! honour anisotropic per-axis spacing, so distances are in physical
//! units. The distance to the empty set is `+∞` everywhere.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::formula::{Interval, Metric, R64};
use crate::space::{Adjacency, GridSpace, PointSet};

/// Which transform produced a [`DistanceField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldMetric {
    Euclidean,
    Chamfer(Adjacency),
}

/// One non-negative distance (or `+∞`) per grid point.
#[derive(Debug, Clone)]
pub struct DistanceField {
    space: Arc<GridSpace>,
    values: Vec<f64>,
    metric: FieldMetric,
}

impl DistanceField {
    pub fn space(&self) -> &Arc<GridSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn metric(&self) -> FieldMetric {
        self.metric
    }

    pub fn get(&self, idx: usize) -> f64 {
        self.values[idx]
    }
}

/// Exact Euclidean distance transform: for every point, the distance in
/// physical units to the centre of the nearest seed point.
///
/// Proceeds by induction on the dimensions: a seeded 1D transform along
/// axis 0, then for each further axis a lower-envelope pass combining the
/// squared distances of the previous stage.
pub fn edt(space: &Arc<GridSpace>, seed: &PointSet) -> DistanceField {
    assert!(
        **space == **seed.space(),
        "seed set belongs to a different grid space"
    );
    let n = space.len();
    let dims = space.dims();
    let spacing = space.spacing();

    // Squared distances, +inf off-seed.
    let mut sq = vec![f64::INFINITY; n];
    for idx in seed.iter() {
        sq[idx] = 0.0;
    }

    // Axis 0: lines are contiguous chunks.
    let nx = dims[0];
    let sx = spacing[0];
    sq.par_chunks_mut(nx).for_each(|line| {
        let mut scratch = EnvelopeScratch::new(nx);
        let input = line.to_vec();
        envelope_pass(&input, sx, &mut scratch, line);
    });

    // Remaining axes: lines are strided; gather, transform, scatter.
    for axis in 1..space.ndim() {
        let len = dims[axis];
        let stride: usize = dims[..axis].iter().product();
        let outer: usize = n / (len * stride);
        let bases: Vec<usize> = (0..outer)
            .flat_map(|o| (0..stride).map(move |i| o * stride * len + i))
            .collect();
        let s = spacing[axis];
        let sq_ref = &sq;
        let transformed: Vec<Vec<f64>> = bases
            .par_iter()
            .map(|&base| {
                let input: Vec<f64> = (0..len).map(|i| sq_ref[base + i * stride]).collect();
                let mut out = vec![0.0; len];
                let mut scratch = EnvelopeScratch::new(len);
                envelope_pass(&input, s, &mut scratch, &mut out);
                out
            })
            .collect();
        for (&base, line) in bases.iter().zip(&transformed) {
            for (i, &v) in line.iter().enumerate() {
                sq[base + i * stride] = v;
            }
        }
    }

    let values = sq.into_iter().map(f64::sqrt).collect();
    DistanceField {
        space: space.clone(),
        values,
        metric: FieldMetric::Euclidean,
    }
}

struct EnvelopeScratch {
    hull: Vec<usize>,
    boundary: Vec<f64>,
}

impl EnvelopeScratch {
    fn new(len: usize) -> Self {
        EnvelopeScratch {
            hull: Vec::with_capacity(len),
            boundary: Vec::with_capacity(len + 1),
        }
    }
}

/// One 1D pass: `out[i] = min_j (input[j] + (s·(i−j))²)`, skipping
/// infinite inputs. Lower envelope of parabolas in physical coordinates.
fn envelope_pass(input: &[f64], s: f64, scratch: &mut EnvelopeScratch, out: &mut [f64]) {
    let hull = &mut scratch.hull;
    let boundary = &mut scratch.boundary;
    hull.clear();
    boundary.clear();

    let x = |i: usize| i as f64 * s;
    // Intersection abscissa of the parabolas rooted at q and p.
    let intersect = |q: usize, p: usize| -> f64 {
        ((input[q] + x(q) * x(q)) - (input[p] + x(p) * x(p))) / (2.0 * (x(q) - x(p)))
    };

    for q in 0..input.len() {
        if input[q].is_infinite() {
            continue;
        }
        if hull.is_empty() {
            hull.push(q);
            boundary.push(f64::NEG_INFINITY);
            continue;
        }
        let mut sxn = intersect(q, *hull.last().unwrap());
        while hull.len() > 1 && sxn <= *boundary.last().unwrap() {
            hull.pop();
            boundary.pop();
            sxn = intersect(q, *hull.last().unwrap());
        }
        hull.push(q);
        boundary.push(sxn);
    }

    if hull.is_empty() {
        out.fill(f64::INFINITY);
        return;
    }
    boundary.push(f64::INFINITY);
    let mut k = 0;
    for i in 0..out.len() {
        let xi = x(i);
        while boundary[k + 1] < xi {
            k += 1;
        }
        let j = hull[k];
        let d = xi - x(j);
        out[i] = input[j] + d * d;
    }
}

/// Chamfer (weighted shortest-path) distance transform via a modified
/// Dijkstra sweep.
///
/// The queue starts with every seed point that has an edge to a non-seed
/// point, at priority 0; seeds themselves all carry distance 0. A binary
/// heap with lazy deletion keeps the sweep quasi-linear, and results do
/// not depend on tie order since only distances are stored.
pub fn chamfer_dt(space: &Arc<GridSpace>, seed: &PointSet) -> DistanceField {
    assert!(
        **space == **seed.space(),
        "seed set belongs to a different grid space"
    );
    let n = space.len();
    let mut values = vec![f64::INFINITY; n];
    let mut heap: BinaryHeap<(Reverse<R64>, usize)> = BinaryHeap::new();

    for idx in seed.iter() {
        values[idx] = 0.0;
        let mut boundary = false;
        space.for_each_neighbor(idx, |nb, _| {
            if !seed.contains(nb) {
                boundary = true;
            }
        });
        if boundary {
            heap.push((Reverse(R64(0.0)), idx));
        }
    }

    while let Some((Reverse(R64(d)), idx)) = heap.pop() {
        if d > values[idx] {
            continue; // stale entry
        }
        space.for_each_neighbor(idx, |nb, w| {
            let nd = d + w;
            if nd < values[nb] {
                values[nb] = nd;
                heap.push((Reverse(R64(nd)), nb));
            }
        });
    }

    DistanceField {
        space: space.clone(),
        values,
        metric: FieldMetric::Chamfer(space.adjacency()),
    }
}

/// Runs the transform selected by `metric` on the space's adjacency.
pub fn transform(space: &Arc<GridSpace>, seed: &PointSet, metric: Metric) -> DistanceField {
    match metric {
        Metric::Euclidean => edt(space, seed),
        Metric::Chamfer => chamfer_dt(space, seed),
    }
}

/// The points whose distance value lies in the interval.
pub fn eval_dist(field: &DistanceField, interval: &Interval) -> PointSet {
    PointSet::from_fn(field.space.clone(), |i| interval.contains(field.values[i]))
}

/// Radius-`c` filter `D^{<c}(¬ D^{<c} ¬f)`: removes details of radius
/// smaller than `c` while keeping larger regions approximately intact.
pub fn flt(c: f64, f_set: &PointSet, metric: Metric) -> crate::Result<PointSet> {
    if !(c > 0.0) {
        return Err(crate::EvalError::Parameter(format!(
            "flt radius must be positive, got {c}"
        ))
        .into());
    }
    let space = f_set.space().clone();
    let lt_c = Interval::from_cmp(crate::formula::Cmp::Lt, c)?;
    let near_complement = eval_dist(&transform(&space, &f_set.complement(), metric), &lt_c);
    let core = near_complement.complement();
    Ok(eval_dist(&transform(&space, &core, metric), &lt_c))
}
