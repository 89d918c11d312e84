//! Exact Euclidean versus chamfer distance transforms.
//!
//! Measures, on a grid with a single central seed, how closely the
//! shortest-path (chamfer) distance approximates the exact Euclidean
//! distance for each adjacency relation, and demonstrates the radius
//! filter built from two nested distance thresholds.
//!
//! Run with: `cargo run --release --example distance_transforms`

use std::sync::Arc;

use imgql::distance::{chamfer_dt, edt, flt};
use imgql::{Adjacency, GridSpace, Metric, PointSet};

fn main() {
    println!("chamfer error against the exact transform (201x201, central seed):");
    for adjacency in [
        Adjacency::Orthogonal,
        Adjacency::Orthodiagonal,
        Adjacency::Window5,
    ] {
        let space = Arc::new(GridSpace::unit(&[201, 201], adjacency).unwrap());
        let center = space.index_of([100, 100, 0]);
        let seed = PointSet::from_indices(space.clone(), [center]);
        let exact = edt(&space, &seed);
        let approx = chamfer_dt(&space, &seed);
        let mut max_err: f64 = 0.0;
        let mut sum_err = 0.0;
        for i in 0..space.len() {
            if i == center {
                continue;
            }
            let err = (approx.get(i) - exact.get(i)).abs() / exact.get(i);
            max_err = max_err.max(err);
            sum_err += err;
        }
        println!(
            "  {adjacency:<14} max {:6.3}%  mean {:6.3}%  ({} neighbours per interior point)",
            max_err * 100.0,
            sum_err / (space.len() - 1) as f64 * 100.0,
            space.neighbors([100, 100, 0]).unwrap().len()
        );
    }

    // anisotropic spacing: distances are physical
    let space = Arc::new(GridSpace::new(&[7, 5], &[2.0, 0.5], Adjacency::Orthogonal).unwrap());
    let seed = PointSet::from_indices(space.clone(), [space.index_of([3, 2, 0])]);
    let field = edt(&space, &seed);
    println!("\nanisotropic 7x5 grid (2.0 x 0.5 units per step), distances from the centre:");
    for y in 0..5 {
        let row: Vec<String> = (0..7)
            .map(|x| format!("{:4.1}", field.get(space.index_of([x, y, 0]))))
            .collect();
        println!("  {}", row.join(" "));
    }

    // the radius filter drops small specks but keeps bulky regions
    let space = Arc::new(GridSpace::unit(&[24, 12], Adjacency::Orthodiagonal).unwrap());
    let blob = PointSet::from_fn(space.clone(), |i| {
        let c = space.coords_of(i);
        let in_block = (3..10).contains(&c[0]) && (3..9).contains(&c[1]);
        let speck = (c[0], c[1]) == (18, 4) || (c[0], c[1]) == (20, 9);
        in_block || speck
    });
    let filtered = flt(2.0, &blob, Metric::Chamfer).unwrap();
    println!(
        "\nradius-2 filter: {} -> {} points (two isolated specks removed, block kept)",
        blob.count(),
        filtered.count()
    );
}
