//! Closure spaces and the surroundedness operator on a hand-drawn grid.
//!
//! Paints a disk wrapped by a ring, evaluates `q S p` ("q surrounded by
//! p"), then opens a one-pixel gap in the ring and shows how the whole
//! region leaks out.
//!
//! Run with: `cargo run --example closure_and_surroundedness`

use std::sync::Arc;

use imgql::checker::Evaluator;
use imgql::{Adjacency, Cmp, Formula, GridSpace, Model, PointSet};

fn render(space: &GridSpace, layers: &[(&PointSet, char)]) -> String {
    let [w, h] = [space.dims()[0], space.dims()[1]];
    let mut out = String::new();
    for y in 0..h {
        for x in 0..w {
            let idx = space.index_of([x, y, 0]);
            let ch = layers
                .iter()
                .find(|(set, _)| set.contains(idx))
                .map(|&(_, c)| c)
                .unwrap_or('.');
            out.push(ch);
            out.push(' ');
        }
        out.push('\n');
    }
    out
}

fn build_model(gap: bool) -> Model {
    let space = Arc::new(GridSpace::unit(&[11, 11], Adjacency::Orthogonal).unwrap());
    let mut q = vec![0.0; space.len()];
    let mut p = vec![0.0; space.len()];
    for y in 2..9usize {
        for x in 2..9usize {
            let on_ring = x == 2 || x == 8 || y == 2 || y == 8;
            if on_ring {
                p[y * 11 + x] = 1.0;
            } else {
                q[y * 11 + x] = 1.0;
            }
        }
    }
    if gap {
        p[2 * 11 + 5] = 0.0;
    }
    let mut m = Model::new(space);
    m.attach_channel("q", q).unwrap();
    m.attach_channel("p", p).unwrap();
    m
}

fn main() {
    for gap in [false, true] {
        let model = build_model(gap);
        let mut eval = Evaluator::new(&model);
        let q = Formula::assertion("q", Cmp::Gt, 0.5);
        let p = Formula::assertion("p", Cmp::Gt, 0.5);

        let q_set = eval.check(&q).unwrap();
        let p_set = eval.check(&p).unwrap();
        let near_q = eval.check(&Formula::near(q.clone())).unwrap();
        let surrounded = eval
            .check(&Formula::surrounded(q.clone(), p.clone()))
            .unwrap();

        println!(
            "== ring {} ==",
            if gap { "with a one-pixel gap" } else { "closed" }
        );
        println!("input (q = disk, p = ring):");
        println!("{}", render(model.space(), &[(&q_set, 'q'), (&p_set, 'p')]));
        println!("closure step: N q adds the ring of next neighbours ({} -> {} points)",
            q_set.count(), near_q.count());
        println!("q S p ({} points):", surrounded.count());
        println!("{}", render(model.space(), &[(&surrounded, '#'), (&p_set, 'p')]));
    }

    // reach and touch are derived from S by duality
    let model = build_model(true);
    let mut eval = Evaluator::new(&model);
    let q = Formula::assertion("q", Cmp::Gt, 0.5);
    let border_touching = eval
        .check(&Formula::touch(Formula::tt(), Formula::Border))
        .unwrap();
    println!(
        "everything reaches the border on a connected grid: touch(TT, border) = {} of {} points",
        border_touching.count(),
        model.space().len()
    );
    let reach = eval
        .check(&Formula::reach(Formula::not(q.clone()), q))
        .unwrap();
    println!(
        "reach(!q, q): points connected to the disk through its complement: {} points",
        reach.count()
    );
}
