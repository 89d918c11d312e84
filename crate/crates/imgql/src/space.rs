//! Image domains as quasi-discrete closure spaces.
//!
//! A [`GridSpace`] is a regular 2D or 3D grid of points together with a
//! per-axis physical spacing and an adjacency relation. The adjacency
//! relation induces the closure operator `C(Y) = Y ∪ {x | ∃y ∈ Y. y R x}`;
//! since the relation is symmetric on grids, closure coincides with a
//! one-step dilation. Sets of points are represented densely as
//! [`PointSet`] bitmasks, one bit per grid point.

use std::fmt;
use std::sync::Arc;

/// Adjacency relation between grid points.
///
/// All three relations are reflexive and symmetric. The counts below are
/// for interior points; points on the grid boundary have fewer neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Adjacency {
    /// Axis-aligned neighbours only: `2n` in `n` dimensions (von Neumann).
    Orthogonal,
    /// Everything in the 3×3(×3) window around a point: `3ⁿ − 1`.
    Orthodiagonal,
    /// Everything in the 5×5(×5) window around a point: `5ⁿ − 1`.
    Window5,
}

impl Adjacency {
    fn radius(self) -> isize {
        match self {
            Adjacency::Orthogonal | Adjacency::Orthodiagonal => 1,
            Adjacency::Window5 => 2,
        }
    }

    fn admits(self, delta: &[isize; 3]) -> bool {
        match self {
            Adjacency::Orthogonal => delta.iter().map(|d| d.abs()).sum::<isize>() == 1,
            Adjacency::Orthodiagonal | Adjacency::Window5 => delta.iter().any(|&d| d != 0),
        }
    }
}

impl fmt::Display for Adjacency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Adjacency::Orthogonal => write!(f, "orthogonal"),
            Adjacency::Orthodiagonal => write!(f, "orthodiagonal"),
            Adjacency::Window5 => write!(f, "window5"),
        }
    }
}

/// Grid coordinates. Axis 2 is always 0 on 2D spaces.
pub type Coords = [usize; 3];

#[derive(Debug, Clone)]
struct NeighborOffset {
    delta: [isize; 3],
    weight: f64,
}

/// A finite quasi-discrete closure space on a regular grid.
///
/// Points are addressed by linear index, axis 0 fastest. Edge weights are
/// the Euclidean distance between point centres in physical units, i.e.
/// anisotropic spacing is honoured.
#[derive(Debug, Clone)]
pub struct GridSpace {
    dims: [usize; 3],
    spacing: [f64; 3],
    ndim: usize,
    adjacency: Adjacency,
    offsets: Vec<NeighborOffset>,
}

impl PartialEq for GridSpace {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims
            && self.spacing == other.spacing
            && self.ndim == other.ndim
            && self.adjacency == other.adjacency
    }
}

impl GridSpace {
    /// Builds a grid space. `dims` and `spacing` must have matching length
    /// 2 or 3, every axis length at least 1 and every spacing positive.
    pub fn new(dims: &[usize], spacing: &[f64], adjacency: Adjacency) -> crate::Result<Self> {
        if dims.len() != spacing.len() || !(dims.len() == 2 || dims.len() == 3) {
            return Err(crate::EvalError::Parameter(format!(
                "grid must have 2 or 3 axes with matching spacing, got {} dims and {} spacings",
                dims.len(),
                spacing.len()
            ))
            .into());
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(crate::EvalError::Parameter(format!(
                "every axis length must be >= 1, got {dims:?}"
            ))
            .into());
        }
        if spacing.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(crate::EvalError::Parameter(format!(
                "every spacing must be a positive finite number, got {spacing:?}"
            ))
            .into());
        }
        let ndim = dims.len();
        let mut d3 = [1usize; 3];
        let mut s3 = [1.0f64; 3];
        d3[..ndim].copy_from_slice(dims);
        s3[..ndim].copy_from_slice(spacing);
        let offsets = Self::build_offsets(ndim, &s3, adjacency);
        Ok(GridSpace {
            dims: d3,
            spacing: s3,
            ndim,
            adjacency,
            offsets,
        })
    }

    /// Convenience constructor with unit spacing on every axis.
    pub fn unit(dims: &[usize], adjacency: Adjacency) -> crate::Result<Self> {
        Self::new(dims, &vec![1.0; dims.len()], adjacency)
    }

    fn build_offsets(ndim: usize, spacing: &[f64; 3], adjacency: Adjacency) -> Vec<NeighborOffset> {
        let r = adjacency.radius();
        let zr = if ndim == 3 { r } else { 0 };
        let mut offsets = Vec::new();
        for dz in -zr..=zr {
            for dy in -r..=r {
                for dx in -r..=r {
                    let delta = [dx, dy, dz];
                    if adjacency.admits(&delta) {
                        let weight = ((dx as f64 * spacing[0]).powi(2)
                            + (dy as f64 * spacing[1]).powi(2)
                            + (dz as f64 * spacing[2]).powi(2))
                        .sqrt();
                        offsets.push(NeighborOffset { delta, weight });
                    }
                }
            }
        }
        offsets
    }

    pub fn ndim(&self) -> usize {
        self.ndim
    }

    /// Axis lengths (length 2 or 3).
    pub fn dims(&self) -> &[usize] {
        &self.dims[..self.ndim]
    }

    /// Physical spacing per axis.
    pub fn spacing(&self) -> &[f64] {
        &self.spacing[..self.ndim]
    }

    pub fn adjacency(&self) -> Adjacency {
        self.adjacency
    }

    /// Total number of points `|X|`.
    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        false // every axis has length >= 1
    }

    pub fn index_of(&self, c: Coords) -> usize {
        (c[2] * self.dims[1] + c[1]) * self.dims[0] + c[0]
    }

    pub fn coords_of(&self, index: usize) -> Coords {
        let x = index % self.dims[0];
        let rest = index / self.dims[0];
        [x, rest % self.dims[1], rest / self.dims[1]]
    }

    pub fn in_bounds(&self, c: Coords) -> bool {
        c[0] < self.dims[0] && c[1] < self.dims[1] && c[2] < self.dims[2]
    }

    /// Adjacent in-bounds points of `p` with their edge weights. Excludes
    /// `p` itself; the reflexive self-loop of the relation is implicit.
    pub fn neighbors(&self, p: Coords) -> crate::Result<Vec<(Coords, f64)>> {
        if !self.in_bounds(p) {
            return Err(crate::EvalError::Parameter(format!(
                "point {:?} outside grid {:?}",
                &p[..self.ndim],
                self.dims()
            ))
            .into());
        }
        let mut out = Vec::with_capacity(self.offsets.len());
        self.for_each_neighbor(self.index_of(p), |idx, w| {
            out.push((self.coords_of(idx), w));
        });
        Ok(out)
    }

    /// Calls `f(index, weight)` for every in-bounds neighbour of the point
    /// with linear index `idx`.
    #[inline]
    pub fn for_each_neighbor<F: FnMut(usize, f64)>(&self, idx: usize, mut f: F) {
        let c = self.coords_of(idx);
        for off in &self.offsets {
            let x = c[0] as isize + off.delta[0];
            let y = c[1] as isize + off.delta[1];
            let z = c[2] as isize + off.delta[2];
            if x >= 0
                && (x as usize) < self.dims[0]
                && y >= 0
                && (y as usize) < self.dims[1]
                && z >= 0
                && (z as usize) < self.dims[2]
            {
                f(
                    (z as usize * self.dims[1] + y as usize) * self.dims[0] + x as usize,
                    off.weight,
                );
            }
        }
    }

    /// Closure `C(Y) = Y ∪ {x | ∃y ∈ Y. y R x}`.
    pub fn closure(&self, s: &PointSet) -> PointSet {
        let mut out = s.clone();
        self.dilate_into(s, &mut out);
        out
    }

    /// Adds every neighbour of every point of `frontier` to `acc`.
    pub(crate) fn dilate_into(&self, frontier: &PointSet, acc: &mut PointSet) {
        for idx in frontier.iter() {
            self.for_each_neighbor(idx, |n, _| acc.insert(n));
        }
    }

    /// The points with at least one coordinate equal to 0 or `len − 1` on
    /// some axis.
    pub fn border_set(self: &Arc<Self>) -> PointSet {
        let mut s = PointSet::empty(self.clone());
        for idx in 0..self.len() {
            let c = self.coords_of(idx);
            let on_border = (0..self.ndim)
                .any(|a| c[a] == 0 || c[a] == self.dims[a] - 1);
            if on_border {
                s.insert(idx);
            }
        }
        s
    }
}

/// A dense set of grid points: one bit per point of the owning space.
///
/// All set algebra stays within a single space; combining sets from
/// different spaces is a programming error and panics.
#[derive(Clone)]
pub struct PointSet {
    space: Arc<GridSpace>,
    words: Vec<u64>,
}

impl PointSet {
    pub fn empty(space: Arc<GridSpace>) -> Self {
        let words = vec![0u64; space.len().div_ceil(64)];
        PointSet { space, words }
    }

    pub fn full(space: Arc<GridSpace>) -> Self {
        let mut s = Self::empty(space);
        for w in &mut s.words {
            *w = !0;
        }
        s.mask_tail();
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(space: Arc<GridSpace>, iter: I) -> Self {
        let mut s = Self::empty(space);
        for i in iter {
            s.insert(i);
        }
        s
    }

    /// Builds a set from a per-point predicate.
    pub fn from_fn<F: FnMut(usize) -> bool>(space: Arc<GridSpace>, mut f: F) -> Self {
        let mut s = Self::empty(space);
        for i in 0..s.space.len() {
            if f(i) {
                s.insert(i);
            }
        }
        s
    }

    pub fn space(&self) -> &Arc<GridSpace> {
        &self.space
    }

    fn mask_tail(&mut self) {
        let n = self.space.len();
        let tail = n % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    fn check_same_space(&self, other: &PointSet) {
        assert!(
            *self.space == *other.space,
            "point sets belong to different grid spaces"
        );
    }

    #[inline]
    pub fn contains(&self, idx: usize) -> bool {
        (self.words[idx / 64] >> (idx % 64)) & 1 != 0
    }

    #[inline]
    pub fn insert(&mut self, idx: usize) {
        self.words[idx / 64] |= 1u64 << (idx % 64);
    }

    #[inline]
    pub fn remove(&mut self, idx: usize) {
        self.words[idx / 64] &= !(1u64 << (idx % 64));
    }

    /// Number of points in the set.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.check_same_space(other);
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.check_same_space(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.check_same_space(other);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.check_same_space(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Set difference `self \ other`.
    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.check_same_space(other);
        let mut out = self.clone();
        out.subtract(other);
        out
    }

    pub fn subtract(&mut self, other: &PointSet) {
        self.check_same_space(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn complement(&self) -> PointSet {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        out.mask_tail();
        out
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.check_same_space(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Iterates over the linear indices of the points in the set.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        *self.space == *other.space && self.words == other.words
    }
}

impl Eq for PointSet {}

// Listing thousands of indices in test failures is useless; show the count
// plus the first few points.
impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<usize> = self.iter().take(16).collect();
        write!(
            f,
            "PointSet({} of {} points; first: {:?})",
            self.count(),
            self.space.len(),
            pts
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(dims: &[usize], adj: Adjacency) -> Arc<GridSpace> {
        Arc::new(GridSpace::unit(dims, adj).unwrap())
    }

    #[test]
    fn closure_of_empty_is_empty() {
        let sp = space(&[5, 5], Adjacency::Orthogonal);
        let empty = PointSet::empty(sp.clone());
        assert_eq!(sp.closure(&empty), empty);
    }

    #[test]
    fn closure_of_full_is_full() {
        let sp = space(&[5, 5], Adjacency::Orthodiagonal);
        let full = PointSet::full(sp.clone());
        assert_eq!(sp.closure(&full), full);
    }

    #[test]
    fn closure_of_center_pixel_is_plus_shape() {
        let sp = space(&[5, 5], Adjacency::Orthogonal);
        let center = sp.index_of([2, 2, 0]);
        let s = PointSet::from_indices(sp.clone(), [center]);
        let c = sp.closure(&s);
        let expected = PointSet::from_indices(
            sp.clone(),
            [
                center,
                sp.index_of([1, 2, 0]),
                sp.index_of([3, 2, 0]),
                sp.index_of([2, 1, 0]),
                sp.index_of([2, 3, 0]),
            ],
        );
        assert_eq!(c, expected);
        assert_eq!(c.count(), 5);
    }

    #[test]
    fn interior_neighbor_counts() {
        let sp2 = GridSpace::unit(&[9, 9], Adjacency::Orthodiagonal).unwrap();
        assert_eq!(sp2.neighbors([4, 4, 0]).unwrap().len(), 8);
        let sp5 = GridSpace::unit(&[9, 9], Adjacency::Window5).unwrap();
        assert_eq!(sp5.neighbors([4, 4, 0]).unwrap().len(), 24);
        let sp3 = GridSpace::unit(&[9, 9, 9], Adjacency::Orthodiagonal).unwrap();
        assert_eq!(sp3.neighbors([4, 4, 4]).unwrap().len(), 26);
        let sp35 = GridSpace::unit(&[9, 9, 9], Adjacency::Window5).unwrap();
        assert_eq!(sp35.neighbors([4, 4, 4]).unwrap().len(), 124);
    }

    #[test]
    fn corner_neighbor_count_is_clipped() {
        let sp = GridSpace::unit(&[5, 5], Adjacency::Orthogonal).unwrap();
        assert_eq!(sp.neighbors([0, 0, 0]).unwrap().len(), 2);
    }

    #[test]
    fn out_of_bounds_neighbors_is_an_error() {
        let sp = GridSpace::unit(&[5, 5], Adjacency::Orthogonal).unwrap();
        assert!(sp.neighbors([5, 0, 0]).is_err());
    }

    #[test]
    fn orthogonal_unit_weights_are_one() {
        let sp = GridSpace::unit(&[5, 5], Adjacency::Orthogonal).unwrap();
        for (_, w) in sp.neighbors([2, 2, 0]).unwrap() {
            assert_eq!(w, 1.0);
        }
    }

    #[test]
    fn anisotropic_weights() {
        let sp = GridSpace::new(&[5, 5], &[2.0, 3.0], Adjacency::Orthodiagonal).unwrap();
        let ns = sp.neighbors([2, 2, 0]).unwrap();
        let w_diag = ns
            .iter()
            .find(|(c, _)| *c == [3, 3, 0])
            .map(|(_, w)| *w)
            .unwrap();
        assert!((w_diag - (4.0f64 + 9.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn border_of_3x3_is_ring() {
        let sp = space(&[3, 3], Adjacency::Orthogonal);
        let b = sp.border_set();
        assert_eq!(b.count(), 8);
        assert!(!b.contains(sp.index_of([1, 1, 0])));
    }

    #[test]
    fn border_of_1xn_is_everything() {
        let sp = space(&[1, 7], Adjacency::Orthogonal);
        assert_eq!(sp.border_set().count(), 7);
    }

    #[test]
    fn border_of_4x4x4_matches_enumeration() {
        let sp = space(&[4, 4, 4], Adjacency::Orthogonal);
        let b = sp.border_set();
        // independent enumeration: interior points have all coords in 1..3
        let mut interior = 0;
        for z in 0..4 {
            for y in 0..4 {
                for x in 0..4 {
                    let inside = (1..3).contains(&x) && (1..3).contains(&y) && (1..3).contains(&z);
                    if inside {
                        interior += 1;
                        assert!(!b.contains(sp.index_of([x, y, z])));
                    } else {
                        assert!(b.contains(sp.index_of([x, y, z])));
                    }
                }
            }
        }
        assert_eq!(interior, 8);
        assert_eq!(b.count(), 64 - 8);
    }

    #[test]
    fn invalid_spaces_are_rejected() {
        assert!(GridSpace::unit(&[0, 3], Adjacency::Orthogonal).is_err());
        assert!(GridSpace::unit(&[3], Adjacency::Orthogonal).is_err());
        assert!(GridSpace::new(&[3, 3], &[1.0, 0.0], Adjacency::Orthogonal).is_err());
        assert!(GridSpace::new(&[3, 3], &[1.0, -2.0], Adjacency::Orthogonal).is_err());
    }

    #[test]
    fn set_algebra_tail_bits_stay_clean() {
        let sp = space(&[3, 3], Adjacency::Orthogonal);
        let full = PointSet::full(sp.clone());
        assert_eq!(full.count(), 9);
        assert_eq!(full.complement().count(), 0);
        let empty = PointSet::empty(sp.clone());
        assert_eq!(empty.complement(), full);
    }
}
