//! End-to-end segmentation of a synthetic head phantom.
//!
//! Generates a phantom (bright rim, low ring, mid disk, embedded blob
//! wrapped in a brighter ring, salt noise), normalizes it, runs the full
//! tumour/oedema session script, writes the label volume and overlay,
//! and scores the result against the phantom's ground truth.
//!
//! Run with: `cargo run --release --example phantom_segmentation`

use imgql::io::{self, SessionOptions};
use imgql::synth::head_phantom;
use imgql::{Adjacency, PointSet};

const SESSION: &str = "\
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

fn main() {
    let dir = std::env::temp_dir().join("imgql-phantom-demo");
    std::fs::create_dir_all(&dir).expect("create demo directory");

    // 1. synthesize and preprocess
    let phantom = head_phantom(250, 1);
    let (normalized, report) = io::normalize(&phantom.volume, None).expect("normalize");
    println!(
        "normalized: background threshold {:.4}, mean intensity {:.4} over {} significant points",
        report.threshold, report.mean, report.significant_points
    );
    io::write_nifti(&dir.join("GBM-NORM.nii"), &normalized).expect("write normalized volume");

    // 2. run the session
    let session_path = dir.join("gbm.imgql");
    std::fs::write(&session_path, SESSION).expect("write session");
    let started = std::time::Instant::now();
    let result = io::run_session(
        &session_path,
        &SessionOptions {
            adjacency: Adjacency::Orthogonal,
            out_dir: Some(dir.clone()),
        },
    )
    .expect("session runs");
    println!("session evaluated in {:.0} ms:", started.elapsed().as_secs_f64() * 1e3);
    for outcome in &result.outcomes {
        println!(
            "  Check \"{}\" {} -> {} points ({:.1} ms)",
            outcome.label, outcome.source, outcome.points, outcome.millis
        );
    }

    // 3. score against ground truth
    let space = result.outcomes[0].region.space();
    let truth_ring = PointSet::from_fn(space.clone(), |i| phantom.blob_ring[i]);
    let truth_blob = PointSet::from_fn(space.clone(), |i| phantom.blob[i]);
    let dice_oedema = io::dice(&result.outcomes[0].region, &truth_ring).unwrap();
    let dice_tumor = io::dice(&result.outcomes[1].region, &truth_blob).unwrap();
    println!("Dice vs ground truth: tumor {dice_tumor:.4}, oedema {dice_oedema:.4}");

    if let Some(p) = &result.label_volume {
        println!("label volume: {}", p.display());
    }
    if let Some(p) = &result.overlay {
        println!("overlay:      {}", p.display());
    }
}
