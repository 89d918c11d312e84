//! Global model checking of core formulas.
//!
//! [`Evaluator`] maps each core formula to the set of all points
//! satisfying it, caching the result per structurally-identical
//! subformula so that `Let`-shared subterms are evaluated once.

use std::collections::HashMap;
use std::sync::Arc;

use crate::distance;
use crate::error::Result;
use crate::formula::Formula;
use crate::model::{Assertion, Model};
use crate::space::PointSet;
use crate::stats;

/// Evaluates core formulas over a model, memoizing per subformula.
pub struct Evaluator<'m> {
    model: &'m Model,
    cache: HashMap<Formula, Arc<PointSet>>,
    caching: bool,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model) -> Self {
        Evaluator {
            model,
            cache: HashMap::new(),
            caching: true,
        }
    }

    /// An evaluator that recomputes every subformula; used to validate
    /// cache transparency.
    pub fn without_cache(model: &'m Model) -> Self {
        Evaluator {
            model,
            cache: HashMap::new(),
            caching: false,
        }
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    /// The set of all points satisfying `f`.
    pub fn check(&mut self, f: &Formula) -> Result<Arc<PointSet>> {
        if self.caching {
            if let Some(hit) = self.cache.get(f) {
                return Ok(hit.clone());
            }
        }
        let space = self.model.space();
        let result: PointSet = match f {
            Formula::Assertion(attr, cmp, c) => self.model.eval_assertion(&Assertion {
                attr: attr.clone(),
                cmp: *cmp,
                value: c.0,
            })?,
            Formula::Border => self.model.border(),
            Formula::Not(g) => self.check(g)?.complement(),
            Formula::And(a, b) => {
                let sa = self.check(a)?;
                let sb = self.check(b)?;
                sa.intersection(&sb)
            }
            Formula::Near(g) => {
                let inner = self.check(g)?;
                space.closure(&inner)
            }
            Formula::Surrounded(f1, f2) => {
                let s1 = self.check(f1)?;
                let s2 = self.check(f2)?;
                check_surrounded(&s1, &s2)
            }
            Formula::Dist(metric, interval, g) => {
                let seed = self.check(g)?;
                let field = distance::transform(space, &seed, *metric);
                distance::eval_dist(&field, interval)
            }
            Formula::Scmp {
                params,
                restrict,
                target,
            } => {
                let restrict_set = self.check(restrict)?;
                let target_set = self.check(target)?;
                stats::scmp(
                    self.model,
                    &params.attr_sphere,
                    &params.attr_target,
                    &target_set,
                    params.radius.0,
                    params.cmp,
                    params.threshold.0,
                    params.min.0,
                    params.max.0,
                    params.bins,
                    &restrict_set,
                )?
            }
        };
        let result = Arc::new(result);
        if self.caching {
            self.cache.insert(f.clone(), result.clone());
        }
        Ok(result)
    }
}

/// Points of `s1` from which every path leaving the `s1`-region first
/// passes through `s2`.
///
/// Computed as a fixpoint over "bad" points: the points satisfying
/// neither formula seed the bad set, which then absorbs adjacent points
/// until nothing changes; the surrounded points are the `s1`-points with
/// no bad point adjacent. Badness never spreads through an `s2`-point:
/// a path that steps on `s2` is protected from there on, which matters
/// when `s1` and `s2` overlap (for disjoint regions the growth zone is
/// all of `s1` and this is the classical bad-point iteration). Only the
/// freshly added frontier is dilated each round, so the loop does linear
/// work overall.
pub fn check_surrounded(s1: &PointSet, s2: &PointSet) -> PointSet {
    let space = s1.space().clone();
    let not2 = s2.complement();
    // escape endpoints: neither s1 nor s2
    let mut bad = not2.difference(s1);
    // badness propagates backwards through unprotected s1-points
    let grow_zone = s1.intersection(&not2);
    let mut frontier = bad.clone();
    loop {
        let mut fresh = PointSet::empty(space.clone());
        for idx in frontier.iter() {
            space.for_each_neighbor(idx, |nb, _| {
                if grow_zone.contains(nb) && !bad.contains(nb) && !fresh.contains(nb) {
                    fresh.insert(nb);
                }
            });
        }
        if fresh.is_empty() {
            break;
        }
        bad.union_with(&fresh);
        frontier = fresh;
    }
    s1.difference(&space.closure(&bad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Cmp, Interval, Metric};
    use crate::space::{Adjacency, GridSpace};

    fn two_channel_model(dims: &[usize], adj: Adjacency, q: Vec<f64>, p: Vec<f64>) -> Model {
        let space = Arc::new(GridSpace::unit(dims, adj).unwrap());
        let mut m = Model::new(space);
        m.attach_channel("q", q).unwrap();
        m.attach_channel("p", p).unwrap();
        m
    }

    fn ring_and_disk(gap: bool) -> Model {
        let mut q = vec![0.0; 36];
        let mut p = vec![0.0; 36];
        for y in 1..5usize {
            for x in 1..5usize {
                if x == 1 || x == 4 || y == 1 || y == 4 {
                    p[y * 6 + x] = 1.0;
                } else {
                    q[y * 6 + x] = 1.0;
                }
            }
        }
        if gap {
            p[6 + 2] = 0.0;
        }
        two_channel_model(&[6, 6], Adjacency::Orthogonal, q, p)
    }

    fn atom(name: &str) -> Formula {
        Formula::assertion(name, Cmp::Gt, 0.5)
    }

    #[test]
    fn tt_is_the_full_grid() {
        let m = ring_and_disk(false);
        let mut e = Evaluator::new(&m);
        assert_eq!(e.check(&Formula::tt()).unwrap().count(), 36);
        assert!(e.check(&Formula::ff()).unwrap().is_empty());
    }

    #[test]
    fn near_is_extensive() {
        let m = ring_and_disk(false);
        let mut e = Evaluator::new(&m);
        let f = atom("q");
        let base = e.check(&f).unwrap();
        let near = e.check(&Formula::near(f)).unwrap();
        assert!(base.is_subset(&near));
    }

    #[test]
    fn surrounded_of_empty_sets_is_empty() {
        let m = ring_and_disk(false);
        let space = m.space().clone();
        let empty = PointSet::empty(space);
        assert!(check_surrounded(&empty, &empty).is_empty());
    }

    #[test]
    fn full_grid_surrounded_by_nothing_is_full() {
        // Everywhere f = f S false: with s1 the full grid there is no
        // escape, so the fixpoint never grows
        let m = ring_and_disk(false);
        let space = m.space().clone();
        let full = PointSet::full(space.clone());
        let empty = PointSet::empty(space);
        assert_eq!(check_surrounded(&full, &empty), full);
    }

    #[test]
    fn ring_encloses_disk() {
        let m = ring_and_disk(false);
        let mut e = Evaluator::new(&m);
        let got = e.check(&Formula::surrounded(atom("q"), atom("p"))).unwrap();
        let want = e.check(&atom("q")).unwrap();
        assert_eq!(*got, *want);
        assert_eq!(got.count(), 4);
        let oracle = crate::oracle::check(&m, &Formula::surrounded(atom("q"), atom("p"))).unwrap();
        assert_eq!(*got, oracle);
    }

    #[test]
    fn gap_in_ring_lets_everything_escape() {
        let m = ring_and_disk(true);
        let mut e = Evaluator::new(&m);
        let got = e.check(&Formula::surrounded(atom("q"), atom("p"))).unwrap();
        assert!(got.is_empty());
        let oracle = crate::oracle::check(&m, &Formula::surrounded(atom("q"), atom("p"))).unwrap();
        assert_eq!(*got, oracle);
    }

    #[test]
    fn surrounded_is_monotone_in_the_guard() {
        let m = ring_and_disk(true); // gapped ring
        let mut e = Evaluator::new(&m);
        let s1 = e.check(&atom("q")).unwrap();
        let weak = e.check(&atom("p")).unwrap();
        // strengthen the guard by closing the gap
        let mut strong = (*weak).clone();
        strong.insert(6 + 2);
        let r_weak = check_surrounded(&s1, &weak);
        let r_strong = check_surrounded(&s1, &strong);
        assert!(r_weak.is_subset(&r_strong));
    }

    #[test]
    fn cache_is_transparent() {
        let m = ring_and_disk(false);
        let f = Formula::and(
            Formula::surrounded(atom("q"), atom("p")),
            Formula::near(Formula::or(atom("q"), atom("p"))),
        );
        let cached = Evaluator::new(&m).check(&f).unwrap();
        let uncached = Evaluator::without_cache(&m).check(&f).unwrap();
        assert_eq!(*cached, *uncached);
    }

    #[test]
    fn reach_matches_oracle_duality() {
        let m = ring_and_disk(true);
        let f = Formula::reach(atom("q"), atom("p"));
        let got = Evaluator::new(&m).check(&f).unwrap();
        let want = crate::oracle::check(&m, &f).unwrap();
        assert_eq!(*got, want);
    }

    #[test]
    fn interior_is_complement_closure_complement() {
        let m = ring_and_disk(false);
        let mut e = Evaluator::new(&m);
        let f = atom("p");
        let interior = e.check(&Formula::interior(f.clone())).unwrap();
        let direct = e
            .check(&f)
            .unwrap()
            .complement();
        let direct = m.space().closure(&direct).complement();
        assert_eq!(*interior, direct);
    }

    #[test]
    fn flt_primitive_matches_desugared_formula() {
        let m = ring_and_disk(false);
        let mut e = Evaluator::new(&m);
        for metric in [Metric::Chamfer, Metric::Euclidean] {
            let via_formula = e
                .check(&Formula::flt(2.0, metric, atom("q")).unwrap())
                .unwrap();
            let direct =
                distance::flt(2.0, &e.check(&atom("q")).unwrap(), metric).unwrap();
            assert_eq!(*via_formula, direct);
        }
    }

    #[test]
    fn dist_zero_equals_the_region() {
        let m = ring_and_disk(false);
        let mut e = Evaluator::new(&m);
        let zero = Interval::from_cmp(Cmp::Eq, 0.0).unwrap();
        let f = Formula::dist(Metric::Euclidean, zero, atom("p"));
        let got = e.check(&f).unwrap();
        let want = e.check(&atom("p")).unwrap();
        assert_eq!(*got, *want);
    }
}
