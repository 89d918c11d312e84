//! Session-corpus tests: the published segmentation scripts must parse
//! verbatim and expand without error.

mod common;

use common::GBM_SESSION;
use imgql::formula::Metric;
use imgql::lang::{self, ast::Expr};
use imgql::Formula;

/// Shared derived-operator prelude used by both case studies.
const PRELUDE: &str = "\
Let reach(a,b) = !(!b S !a);
Let touch(a,b) = a & reach(a|b,b);
Let flt(a) = MDDT(!(MDDT(!a,<1)),<1);
";

/// Rectum segmentation on the T2-weighted volume.
const RECTUM_T2_FRAGMENTS: &str = "\
Model \"med:T2=T2-NORM.nii\";
Let flt3D(a) = N(I(flt(a)));
Let hyperT2=flt3D([T2>1.6]);
Let hyperT2Super = flt3D([T2>2.5]);
Let hyperT2r = touch(hyperT2,hyperT2Super);
Let hypoT2 = flt3D([T2>0.17] & [T2<0.5]);
Let hyperT2rS = MDDT(hyperT2r,<5);
Let hypoT2r = touch(hypoT2,hyperT2rS);
Let rectum1S = MDDT(hyperT2r |  hypoT2r,<5);
Let intermT2 = flt3D([T2>0.9] & [T2<1.4]);
Let intermT2r = touch(intermT2,rectum1S);
Let rectum = hyperT2r |  hypoT2r | intermT2r;
Let rectumS = MDDT(rectum,<5);
";

/// Tumour segmentation on the co-registered ADC map. The wrapped `Model`
/// string and the line-broken SCMP call appear exactly as printed.
const RECTUM_ADC_FRAGMENTS: &str = "\
Model \"med:ADC=ADC-norm.nii,
            ROI=ROI_T2-2-ADC.nii\";
Let flt3D(a) = N(I(flt(a)));
Let rectumS=[ROI>0];
Let tumor1 = [ADC>0.96] & [ADC<1.56];
Let tumor2 = flt3D(tumor1);
Let tumor3 = touch(tumor2,rectumS);
Let tumorSpace = MDDT(tumor3,<20);
Let tumorStat =
SCMP(ADC,tumorSpace,3,>0.8,0.01,2.7,100)
(ADC,tumor3);
Let tumor = tumor3 | tumorStat;
";

fn attrs(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[test]
fn gbm_session_parses_and_expands() {
    let session = lang::parse(GBM_SESSION).expect("parse");
    assert_eq!(session.defs.len(), 28);
    assert_eq!(session.checks.len(), 2);
    assert_eq!(session.output.as_ref().unwrap().path, "GBM-seg.nii");
    let a = attrs(&["FLAIR"]);
    let checks = lang::expand_session(&session, Some(&a)).expect("expand");
    assert_eq!(checks.len(), 2);
    assert_eq!(checks[0].label, "8");
    assert_eq!(checks[1].label, "7");
    // both checked formulas ground out in the core language
    assert!(checks.iter().all(|c| c.formula.size() > 10));
}

#[test]
fn rectum_t2_session_parses_and_expands() {
    let text = format!("{PRELUDE}{RECTUM_T2_FRAGMENTS}");
    let session = lang::parse(&text).expect("parse");
    let a = attrs(&["T2"]);
    lang::expand_session(&session, Some(&a)).expect("expand");
}

#[test]
fn rectum_adc_session_parses_and_expands() {
    let text = format!("{PRELUDE}{RECTUM_ADC_FRAGMENTS}");
    let session = lang::parse(&text).expect("parse");
    let m = session.model.as_ref().unwrap();
    assert_eq!(
        m.bindings,
        vec![
            ("ADC".to_string(), "ADC-norm.nii".to_string()),
            ("ROI".to_string(), "ROI_T2-2-ADC.nii".to_string())
        ]
    );
    let a = attrs(&["ADC", "ROI"]);
    lang::expand_session(&session, Some(&a)).expect("expand");
}

#[test]
fn nested_near_fragment_parses() {
    let session = lang::parse("Let adipose = N (N [FLAIR>1.7]);").expect("parse");
    lang::expand_session(&session, None).expect("expand");
}

#[test]
fn flt_macro_matches_the_derived_constructor() {
    let session = lang::parse(PRELUDE).unwrap();
    let expr = lang::parse_formula("flt([a > 0])").unwrap();
    let got = lang::expand_in_session(&session, &expr, None).unwrap();
    let atom_gt0 = Formula::assertion("a", imgql::Cmp::Gt, 0.0);
    let want = Formula::flt(1.0, Metric::Chamfer, atom_gt0).unwrap();
    assert_eq!(got, want);
}

#[test]
fn every_distance_spelling_parses() {
    for text in [
        "EDT([a>0],<2)",
        "EDT([a>0],<=2)",
        "EDT([a>0],=2)",
        "EDT([a>0],>=2)",
        "EDT([a>0],>2)",
        "MDDT([a>0],<2.5)",
        "MDDT([a>0],>=0.1)",
    ] {
        let e = lang::parse_formula(text).expect(text);
        assert!(matches!(e, Expr::Dist { .. }));
    }
}

#[test]
fn scmp_fragment_round_trips_through_the_core_printer() {
    let expr = lang::parse_formula("SCMP(ADC,[ROI>0],3,>0.8,0.01,2.7,100)(ADC,[ADC<1])").unwrap();
    let core = lang::desugar(&expr).unwrap();
    let printed = core.to_string();
    let reparsed = lang::desugar(&lang::parse_formula(&printed).unwrap()).unwrap();
    assert_eq!(core, reparsed);
}
