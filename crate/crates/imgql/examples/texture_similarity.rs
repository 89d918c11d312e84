//! Statistical texture comparison with the SCMP operator.
//!
//! Hides two copies of a two-valued texture in a noisy image and asks
//! for the points whose surrounding sphere has an intensity histogram
//! strongly correlated with a reference patch.
//!
//! Run with: `cargo run --example texture_similarity`

use std::sync::Arc;

use imgql::checker::Evaluator;
use imgql::formula::ScmpParams;
use imgql::{Adjacency, Cmp, Formula, GridSpace, Model, PointSet};

fn main() {
    let (w, h) = (48usize, 20usize);
    let space = Arc::new(GridSpace::unit(&[w, h], Adjacency::Orthodiagonal).unwrap());

    // pseudo-random speckle background between 0.9 and 1.1
    let mut state = 0x243f6a8885a308d3u64;
    let mut noise = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        0.9 + 0.2 * (state % 1000) as f64 / 1000.0
    };
    let mut values: Vec<f64> = (0..w * h).map(|_| noise()).collect();

    // two checkerboard patches of the same texture, far apart
    let mut paint = |x0: usize, y0: usize| {
        for dy in 0..6 {
            for dx in 0..6 {
                values[(y0 + dy) * w + x0 + dx] = if (dx + dy) % 2 == 0 { 2.0 } else { 3.0 };
            }
        }
    };
    paint(4, 6);
    paint(36, 10);

    let mut model = Model::new(space.clone());
    model.attach_channel("img", values.clone()).unwrap();

    // reference region: the first patch
    let target = PointSet::from_fn(space.clone(), |i| {
        let c = space.coords_of(i);
        (4..10).contains(&c[0]) && (6..12).contains(&c[1])
    });
    println!("reference patch: {} points", target.count());

    // core SCMP node: for each point, correlate the histogram of the
    // radius-3 sphere with the reference histogram
    let similar = Formula::Scmp {
        params: ScmpParams {
            attr_sphere: "img".into(),
            attr_target: "img".into(),
            radius: 3.0.into(),
            cmp: Cmp::Gt,
            threshold: 0.95.into(),
            min: 1.5.into(),
            max: 3.5.into(),
            bins: 8,
        },
        restrict: Box::new(Formula::tt()),
        target: Box::new(Formula::assertion("img", Cmp::Ge, 2.0)),
    };
    let hits = Evaluator::new(&model).check(&similar).unwrap();

    println!("points whose sphere matches the texture (r > 0.95): {}", hits.count());
    for y in 0..h {
        let row: String = (0..w)
            .map(|x| {
                let idx = space.index_of([x, y, 0]);
                if hits.contains(idx) {
                    '#'
                } else if values[idx] >= 2.0 {
                    '+'
                } else {
                    '.'
                }
            })
            .collect();
        println!("  {row}");
    }
    println!("(`+` texture pixels, `#` sphere centres classified as the texture)");
}
