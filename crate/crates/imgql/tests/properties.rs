//! Property tests: closure axioms, printer/parser round trips, and
//! checker-versus-oracle equivalence over randomly generated formulas.

mod common;

use std::sync::Arc;

use proptest::prelude::*;

use imgql::checker::Evaluator;
use imgql::lang;
use imgql::{oracle, Adjacency, Cmp, Formula, GridSpace, Interval, Metric, Model, PointSet};

fn adjacency_strategy() -> impl Strategy<Value = Adjacency> {
    prop_oneof![
        Just(Adjacency::Orthogonal),
        Just(Adjacency::Orthodiagonal),
        Just(Adjacency::Window5),
    ]
}

fn cmp_strategy() -> impl Strategy<Value = Cmp> {
    prop_oneof![
        Just(Cmp::Lt),
        Just(Cmp::Gt),
        Just(Cmp::Le),
        Just(Cmp::Ge),
        Just(Cmp::Eq),
    ]
}

fn metric_strategy() -> impl Strategy<Value = Metric> {
    prop_oneof![Just(Metric::Euclidean), Just(Metric::Chamfer)]
}

/// Random core formulas over attributes `a` and `b`, including distance
/// and statistical nodes.
fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Border),
        4 => (prop_oneof![Just("a"), Just("b")], cmp_strategy(), 0.0..1.0f64)
            .prop_map(|(attr, cmp, c)| Formula::assertion(attr, cmp, c)),
    ];
    leaf.prop_recursive(3, 20, 2, |inner| {
        prop_oneof![
            3 => inner.clone().prop_map(Formula::not),
            3 => (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::and(x, y)),
            3 => inner.clone().prop_map(Formula::near),
            3 => (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::surrounded(x, y)),
            2 => (metric_strategy(), cmp_strategy(), 0.0..5.0f64, inner.clone()).prop_map(
                |(m, cmp, c, x)| Formula::dist(m, Interval::from_cmp(cmp, c).unwrap(), x)
            ),
            1 => (inner.clone(), inner.clone(), 0.0..3.0f64, cmp_strategy(), -1.0..1.0f64)
                .prop_map(|(r, t, rho, cmp, thr)| Formula::Scmp {
                    params: imgql::formula::ScmpParams {
                        attr_sphere: "a".into(),
                        attr_target: "b".into(),
                        radius: rho.into(),
                        cmp,
                        threshold: thr.into(),
                        min: 0.0.into(),
                        max: 1.0.into(),
                        bins: 5,
                    },
                    restrict: Box::new(r),
                    target: Box::new(t),
                }),
        ]
    })
}

fn small_model(adj: Adjacency, va: Vec<f64>, vb: Vec<f64>) -> Model {
    let space = Arc::new(GridSpace::unit(&[6, 6], adj).unwrap());
    let mut m = Model::new(space);
    m.attach_channel("a", va).unwrap();
    m.attach_channel("b", vb).unwrap();
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_axioms(
        adj in adjacency_strategy(),
        bits_a in proptest::collection::vec(any::<bool>(), 30),
        bits_b in proptest::collection::vec(any::<bool>(), 30),
    ) {
        let space = Arc::new(GridSpace::unit(&[6, 5], adj).unwrap());
        let a = PointSet::from_fn(space.clone(), |i| bits_a[i]);
        let b = PointSet::from_fn(space.clone(), |i| bits_b[i]);

        // C(empty) = empty
        let empty = PointSet::empty(space.clone());
        prop_assert_eq!(space.closure(&empty), empty);
        // extensivity
        prop_assert!(a.is_subset(&space.closure(&a)));
        // additivity
        prop_assert_eq!(
            space.closure(&a.union(&b)),
            space.closure(&a).union(&space.closure(&b))
        );
    }

    #[test]
    fn closure_symmetry(adj in adjacency_strategy(), x in 0usize..30, y in 0usize..30) {
        let space = Arc::new(GridSpace::unit(&[6, 5], adj).unwrap());
        let cx = space.closure(&PointSet::from_indices(space.clone(), [x]));
        let cy = space.closure(&PointSet::from_indices(space.clone(), [y]));
        prop_assert_eq!(cx.contains(y), cy.contains(x));
    }

    #[test]
    fn printer_parser_roundtrip(f in formula_strategy()) {
        let printed = f.to_string();
        let reparsed = lang::parse_formula(&printed)
            .and_then(|e| lang::desugar(&e))
            .map_err(|e| TestCaseError::fail(format!("reparse of `{printed}`: {e}")))?;
        prop_assert_eq!(&reparsed, &f, "printed form: {}", printed);
    }

    #[test]
    fn checker_matches_oracle_on_random_formulas(
        f in formula_strategy(),
        adj in adjacency_strategy(),
        va in proptest::collection::vec(0.0..1.0f64, 36),
        vb in proptest::collection::vec(0.0..1.0f64, 36),
    ) {
        let m = small_model(adj, va, vb);
        let got = Evaluator::new(&m).check(&f).unwrap();
        let want = oracle::check(&m, &f).unwrap();
        prop_assert_eq!(&*got, &want, "formula: {}", f);
    }

    #[test]
    fn interior_is_the_dual_of_closure(
        adj in adjacency_strategy(),
        va in proptest::collection::vec(0.0..1.0f64, 36),
    ) {
        let m = small_model(adj, va, vec![0.0; 36]);
        let f = Formula::assertion("a", Cmp::Gt, 0.5);
        let mut eval = Evaluator::new(&m);
        let interior = eval.check(&Formula::interior(f.clone())).unwrap();
        let direct = m
            .space()
            .closure(&eval.check(&f).unwrap().complement())
            .complement();
        prop_assert_eq!(&*interior, &direct);
    }

    #[test]
    fn touch_matches_reachability_search(
        adj in adjacency_strategy(),
        va in proptest::collection::vec(0.0..1.0f64, 36),
        vb in proptest::collection::vec(0.0..1.0f64, 36),
    ) {
        let m = small_model(adj, va, vb);
        let a = Formula::assertion("a", Cmp::Gt, 0.5);
        let b = Formula::assertion("b", Cmp::Gt, 0.5);
        let got = Evaluator::new(&m).check(&Formula::touch(a.clone(), b.clone())).unwrap();

        // independent reading: x satisfies `a`, and a path within the
        // union region connects x to a point satisfying `b`
        let sa = Evaluator::new(&m).check(&a).unwrap();
        let sb = Evaluator::new(&m).check(&b).unwrap();
        let space = m.space().clone();
        let want = PointSet::from_fn(space.clone(), |x| {
            if !sa.contains(x) {
                return false;
            }
            let mut seen = vec![false; space.len()];
            let mut stack = vec![x];
            seen[x] = true;
            while let Some(at) = stack.pop() {
                if sb.contains(at) {
                    return true;
                }
                let mut next = Vec::new();
                space.for_each_neighbor(at, |nb, _| {
                    if !seen[nb] && (sa.contains(nb) || sb.contains(nb)) {
                        next.push(nb);
                    }
                });
                for nb in next {
                    seen[nb] = true;
                    stack.push(nb);
                }
            }
            false
        });
        prop_assert_eq!(&*got, &want);
    }

    #[test]
    fn chamfer_dominates_euclidean(
        adj in adjacency_strategy(),
        bits in proptest::collection::vec(any::<bool>(), 48),
        sx in 0.4..2.0f64,
        sy in 0.4..2.0f64,
    ) {
        let space = Arc::new(GridSpace::new(&[8, 6], &[sx, sy], adj).unwrap());
        let seed = PointSet::from_fn(space.clone(), |i| bits[i]);
        let e = imgql::distance::edt(&space, &seed);
        let c = imgql::distance::chamfer_dt(&space, &seed);
        for i in 0..space.len() {
            if e.get(i).is_finite() {
                prop_assert!(c.get(i) >= e.get(i) - 1e-12);
            } else {
                prop_assert!(c.get(i).is_infinite());
            }
        }
    }

    #[test]
    fn surrounded_monotone_in_guard(
        va in proptest::collection::vec(0.0..1.0f64, 36),
        vb in proptest::collection::vec(0.0..1.0f64, 36),
        extra in proptest::collection::vec(any::<bool>(), 36),
    ) {
        let m = small_model(Adjacency::Orthogonal, va, vb);
        let space = m.space().clone();
        let s1 = Evaluator::new(&m).check(&Formula::assertion("a", Cmp::Gt, 0.5)).unwrap();
        let s2 = Evaluator::new(&m).check(&Formula::assertion("b", Cmp::Gt, 0.5)).unwrap();
        let mut larger = (*s2).clone();
        for (i, &e) in extra.iter().enumerate() {
            if e {
                larger.insert(i);
            }
        }
        let small = imgql::checker::check_surrounded(&s1, &s2);
        let big = imgql::checker::check_surrounded(&s1, &larger);
        prop_assert!(small.is_subset(&big));
        // the full space needs no sets at all to be surrounded
        let full = PointSet::full(space.clone());
        let empty = PointSet::empty(space);
        prop_assert_eq!(imgql::checker::check_surrounded(&full, &empty), full);
    }

    #[test]
    fn expansion_idempotent_on_printed_core(f in formula_strategy()) {
        // desugaring a printed core formula is the identity, twice over
        let once = lang::desugar(&lang::parse_formula(&f.to_string()).unwrap()).unwrap();
        let twice = lang::desugar(&lang::parse_formula(&once.to_string()).unwrap()).unwrap();
        prop_assert_eq!(once, twice);
    }
}
