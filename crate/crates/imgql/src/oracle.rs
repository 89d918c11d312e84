//! Brute-force reference semantics for small models.
//!
//! This module implements the satisfaction relation directly: boolean
//! vectors instead of bitmasks, a per-point neighbour scan instead of
//! dilation, path search instead of the surrounded fixpoint, relaxation
//! to a fixpoint instead of a heap for shortest paths, and the literal
//! per-bin histogram definition. It shares no evaluation machinery with
//! the production checker and exists so the two can be tested against
//! each other. Spaces are capped at [`MAX_ORACLE_POINTS`] points.

use crate::error::{EvalError, Result};
use crate::formula::{Formula, Metric};
use crate::model::Model;
use crate::space::{Adjacency, GridSpace, PointSet};

/// Largest space the oracle will accept.
pub const MAX_ORACLE_POINTS: usize = 64;

/// A finite path: consecutive points must be related by the adjacency
/// relation. Only the oracle ever materialises paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub points: Vec<usize>,
}

impl Path {
    /// Checks the continuity invariant against the space's adjacency.
    pub fn is_continuous(&self, space: &GridSpace) -> bool {
        self.points
            .windows(2)
            .all(|w| related(space, w[0], w[1]))
    }
}

/// The adjacency relation, computed directly from coordinates.
fn related(space: &GridSpace, a: usize, b: usize) -> bool {
    if a == b {
        return true; // reflexive
    }
    let ca = space.coords_of(a);
    let cb = space.coords_of(b);
    let d: Vec<isize> = (0..3)
        .map(|i| cb[i] as isize - ca[i] as isize)
        .collect();
    match space.adjacency() {
        Adjacency::Orthogonal => d.iter().map(|x| x.abs()).sum::<isize>() == 1,
        Adjacency::Orthodiagonal => d.iter().all(|x| x.abs() <= 1),
        Adjacency::Window5 => d.iter().all(|x| x.abs() <= 2),
    }
}

fn euclid(space: &GridSpace, a: usize, b: usize) -> f64 {
    let ca = space.coords_of(a);
    let cb = space.coords_of(b);
    let sp = space.spacing();
    (0..space.ndim())
        .map(|i| ((ca[i] as f64 - cb[i] as f64) * sp[i]).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Direct recursive evaluation of the satisfaction relation. Refuses
/// spaces larger than [`MAX_ORACLE_POINTS`].
pub fn check(model: &Model, f: &Formula) -> Result<PointSet> {
    let n = model.space().len();
    if n > MAX_ORACLE_POINTS {
        return Err(EvalError::SpaceTooLarge {
            points: n,
            limit: MAX_ORACLE_POINTS,
        }
        .into());
    }
    let sat = eval(model, f)?;
    Ok(PointSet::from_fn(model.space().clone(), |i| sat[i]))
}

fn eval(model: &Model, f: &Formula) -> Result<Vec<bool>> {
    let space = model.space();
    let n = space.len();
    match f {
        Formula::Assertion(attr, cmp, c) => {
            let values = model
                .channel(attr)
                .ok_or_else(|| EvalError::UnknownAttribute {
                    name: attr.clone(),
                    loc: None,
                })?;
            Ok(values.iter().map(|&v| cmp.eval(v, c.0)).collect())
        }
        Formula::Border => Ok((0..n)
            .map(|i| {
                let c = space.coords_of(i);
                (0..space.ndim()).any(|a| c[a] == 0 || c[a] == space.dims()[a] - 1)
            })
            .collect()),
        Formula::Not(g) => Ok(eval(model, g)?.iter().map(|b| !b).collect()),
        Formula::And(a, b) => {
            let sa = eval(model, a)?;
            let sb = eval(model, b)?;
            Ok(sa.iter().zip(&sb).map(|(x, y)| *x && *y).collect())
        }
        Formula::Near(g) => {
            let sg = eval(model, g)?;
            // x is in the closure of the region iff some region point is
            // related to it (the relation is reflexive)
            Ok((0..n)
                .map(|x| (0..n).any(|y| sg[y] && related(space, y, x)))
                .collect())
        }
        Formula::Surrounded(f1, f2) => {
            let s1 = eval(model, f1)?;
            let s2 = eval(model, f2)?;
            Ok((0..n)
                .map(|x| s1[x] && violating_path(space, &s1, &s2, x).is_none())
                .collect())
        }
        Formula::Dist(metric, interval, g) => {
            let seeds = eval(model, g)?;
            let d = match metric {
                Metric::Euclidean => euclid_distances(space, &seeds),
                Metric::Chamfer => relaxation_distances(space, &seeds),
            };
            Ok(d.iter().map(|&v| interval.contains(v)).collect())
        }
        Formula::Scmp {
            params,
            restrict,
            target,
        } => {
            let in_restrict = eval(model, restrict)?;
            let in_target = eval(model, target)?;
            let sphere_vals =
                model
                    .channel(&params.attr_sphere)
                    .ok_or_else(|| EvalError::UnknownAttribute {
                        name: params.attr_sphere.clone(),
                        loc: None,
                    })?;
            let target_vals =
                model
                    .channel(&params.attr_target)
                    .ok_or_else(|| EvalError::UnknownAttribute {
                        name: params.attr_target.clone(),
                        loc: None,
                    })?;
            let (m, mx, k) = (params.min.0, params.max.0, params.bins);
            let target_pts: Vec<usize> = (0..n).filter(|&i| in_target[i]).collect();
            let hb = literal_histogram(target_vals, &target_pts, m, mx, k);
            Ok((0..n)
                .map(|x| {
                    if !in_restrict[x] {
                        return false;
                    }
                    let sphere: Vec<usize> = (0..n)
                        .filter(|&y| euclid(space, x, y) <= params.radius.0)
                        .collect();
                    let ha = literal_histogram(sphere_vals, &sphere, m, mx, k);
                    params.cmp.eval(pearson(&ha, &hb), params.threshold.0)
                })
                .collect())
        }
    }
}

/// Searches depth-first for a path prefix that leaves the `s1` region
/// without first passing through `s2`. Returns the path if one exists.
/// Visited-marking bounds the search by simple paths, whose length never
/// exceeds the number of points.
fn violating_path(space: &GridSpace, s1: &[bool], s2: &[bool], start: usize) -> Option<Path> {
    let n = s1.len();
    let mut visited = vec![false; n];
    let mut stack_path = vec![start];
    fn dfs(
        space: &GridSpace,
        s1: &[bool],
        s2: &[bool],
        at: usize,
        visited: &mut [bool],
        path: &mut Vec<usize>,
    ) -> bool {
        for next in 0..s1.len() {
            if next == at || visited[next] || !related(space, at, next) {
                continue;
            }
            if s2[next] {
                continue; // stepping on s2 protects the prefix
            }
            path.push(next);
            if !s1[next] {
                return true; // escaped s1 with no s2 in between
            }
            visited[next] = true;
            if dfs(space, s1, s2, next, visited, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    visited[start] = true;
    if dfs(space, s1, s2, start, &mut visited, &mut stack_path) {
        let p = Path { points: stack_path };
        debug_assert!(p.is_continuous(space));
        Some(p)
    } else {
        None
    }
}

/// Brute-force nearest-seed scan in physical units, `O(|X|·|seed|)`.
/// Unlike [`check`], this has no size cap; it exists as the independent
/// reference for the exact Euclidean distance transform.
pub fn brute_euclidean(seed: &PointSet) -> Vec<f64> {
    let space = seed.space().clone();
    let seeds: Vec<bool> = (0..space.len()).map(|i| seed.contains(i)).collect();
    euclid_distances(&space, &seeds)
}

fn euclid_distances(space: &GridSpace, seeds: &[bool]) -> Vec<f64> {
    (0..seeds.len())
        .map(|x| {
            (0..seeds.len())
                .filter(|&y| seeds[y])
                .map(|y| euclid(space, x, y))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Weighted shortest-path distances by relaxation to a fixpoint.
fn relaxation_distances(space: &GridSpace, seeds: &[bool]) -> Vec<f64> {
    let n = seeds.len();
    let mut d: Vec<f64> = seeds
        .iter()
        .map(|&s| if s { 0.0 } else { f64::INFINITY })
        .collect();
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if x != y && related(space, x, y) {
                    let w = euclid(space, x, y);
                    if d[x] + w < d[y] {
                        d[y] = d[x] + w;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return d;
        }
    }
}

/// The histogram definition taken literally: for each bin `i ∈ [1, k]`,
/// count the points with `(i−1)Δ ≤ v − m < iΔ`.
fn literal_histogram(values: &[f64], points: &[usize], m: f64, mx: f64, k: usize) -> Vec<u64> {
    let delta = (mx - m) / k as f64;
    (1..=k)
        .map(|i| {
            points
                .iter()
                .filter(|&&p| {
                    let v = values[p] - m;
                    (i - 1) as f64 * delta <= v && v < i as f64 * delta
                })
                .count() as u64
        })
        .collect()
}

fn pearson(h1: &[u64], h2: &[u64]) -> f64 {
    let k = h1.len() as f64;
    let m1 = h1.iter().sum::<u64>() as f64 / k;
    let m2 = h2.iter().sum::<u64>() as f64 / k;
    let num: f64 = h1
        .iter()
        .zip(h2)
        .map(|(&a, &b)| (a as f64 - m1) * (b as f64 - m2))
        .sum();
    let v1: f64 = h1.iter().map(|&a| (a as f64 - m1).powi(2)).sum();
    let v2: f64 = h2.iter().map(|&b| (b as f64 - m2).powi(2)).sum();
    if v1 == 0.0 && v2 == 0.0 {
        1.0
    } else if v1 == 0.0 || v2 == 0.0 {
        0.0
    } else {
        num / (v1.sqrt() * v2.sqrt())
    }
}
