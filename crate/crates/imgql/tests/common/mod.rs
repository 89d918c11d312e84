//! Shared fixtures for the integration suites.
#![allow(dead_code)] // each suite uses a different subset

use std::sync::Arc;

use imgql::{Adjacency, Cmp, Formula, GridSpace, Model, PointSet};

/// Builds a model over a unit-spacing grid from named 0/1 masks laid out
/// row-major (axis 0 fastest).
pub fn mask_model(dims: &[usize], adjacency: Adjacency, masks: &[(&str, &[u8])]) -> Model {
    let space = Arc::new(GridSpace::new(dims, &vec![1.0; dims.len()], adjacency).unwrap());
    let mut model = Model::new(space);
    for (name, mask) in masks {
        model
            .attach_channel(*name, mask.iter().map(|&b| b as f64).collect())
            .unwrap();
    }
    model
}

pub fn atom(name: &str) -> Formula {
    Formula::assertion(name, Cmp::Gt, 0.5)
}

/// The 6×6 two-region walkthrough grid: a 2×2 block in the bottom-left
/// corner fully ringed, and a 2×2 strip in the upper right that a
/// surrounding fixpoint erodes in two rounds of two points each.
///
/// ```text
///       x: 0  1  2  3  4  5
/// y=0:     .  .  .  .  .  .
/// y=1:     P  P  P  P  Y  Y
/// y=2:     P  P  P  P  Y  Y
/// y=3:     P  P  P  P  P  P
/// y=4:     Y  Y  P  .  .  .
/// y=5:     Y  Y  P  .  .  .
/// ```
pub fn corner_block_model() -> (Model, Vec<usize>) {
    let rows_yellow: [[u8; 6]; 6] = [
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0],
    ];
    let rows_pink: [[u8; 6]; 6] = [
        [0, 0, 0, 0, 0, 0],
        [1, 1, 1, 1, 0, 0],
        [1, 1, 1, 1, 0, 0],
        [1, 1, 1, 1, 1, 1],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
    ];
    let yellow: Vec<u8> = rows_yellow.iter().flatten().copied().collect();
    let pink: Vec<u8> = rows_pink.iter().flatten().copied().collect();
    let model = mask_model(
        &[6, 6],
        Adjacency::Orthogonal,
        &[("yellow", &yellow), ("pink", &pink)],
    );
    // the four corner-block points survive
    let expected = vec![4 * 6, 4 * 6 + 1, 5 * 6, 5 * 6 + 1];
    (model, expected)
}

/// An 8×8 grid (64 points, the oracle's limit) with a 5×5 `q` block
/// wrapped by a `p` ring, leaving an L-shaped free margin.
pub fn ringed_block_model() -> Model {
    let mut q = vec![0u8; 64];
    let mut p = vec![0u8; 64];
    for y in 0..7usize {
        for x in 0..7usize {
            if (1..6).contains(&x) && (1..6).contains(&y) {
                q[y * 8 + x] = 1;
            } else {
                p[y * 8 + x] = 1;
            }
        }
    }
    mask_model(&[8, 8], Adjacency::Orthogonal, &[("q", &q), ("p", &p)])
}

/// Point set from ground-truth style boolean masks.
pub fn set_from_mask(space: &Arc<GridSpace>, mask: &[bool]) -> PointSet {
    PointSet::from_fn(space.clone(), |i| mask[i])
}

/// The glioblastoma segmentation session, fragment for fragment.
pub const GBM_SESSION: &str = "\
Model \"med:FLAIR=GBM-NORM.nii\";
Let reach(a,b) = !(!b S !a);
Let touch(a,b) = a & reach(a|b,b);
Let flt(a) = MDDT(!(MDDT(!a,<1)),<1);
Let grow(a,b) = (a|b) S (!b);
Let denoise(a) = touch(a,MDDT(!a,>=2));
Let closeTo(a) = MDDT(a,<3.0);
Let lowIntsty = [FLAIR < 0.5];
Let medIntsty = [FLAIR > 0.5] & [FLAIR < 1.3];
Let highIntsty = [FLAIR > 1.7];
Let tumIntsty = [FLAIR > 1.17] & [FLAIR < 1.53];
Let oedIntsty = [FLAIR >= 1.47] & [FLAIR < 2.4];
Let background = touch(lowIntsty,[border]);
Let adipose = touch(highIntsty,closeTo(background));
Let head = !(closeTo(adipose) | background);
Let CSF = lowIntsty & head;
Let brainApprox = head & (!CSF) & medIntsty;
Let brainSeed = MDDT(!brainApprox,>10);
Let noisyBrain = grow(brainSeed,head & (!CSF));
Let brain = touch(noisyBrain,brainSeed);
Let tum0 = flt(tumIntsty S (brain|CSF));
Let oed0 = flt(oedIntsty S (brain|CSF));
Let oeddst = MDDT (oed0,<=2.0);
Let tum1 = touch(tum0,oeddst);
Let oed1 = oed0 & reach(oeddst,tum1);
Let tum2 = denoise(tum1);
Let oed2 = denoise(oed1);
Let tumor = touch(tum2,oed2);
Let oedema = touch(oed2,tum2);
Output GBM-seg.nii
Check \"8\" oedema;
Check \"7\" tumor;
";
