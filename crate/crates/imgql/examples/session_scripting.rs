//! Parsing and macro-expanding a session script without touching disk.
//!
//! Shows the surface syntax (definitions with parameters, assertions,
//! derived operators) and the core formulas they expand into.
//!
//! Run with: `cargo run --example session_scripting`

use imgql::lang;

const SCRIPT: &str = r#"
// derived operators, defined once per session
Let reach(a,b) = !(!b S !a);
Let touch(a,b) = a & reach(a|b,b);
Let flt(a) = MDDT(!(MDDT(!a,<1)),<1);

// thresholds name intensity bands of the scan
Let darkish = [scan < 0.5];
Let bright = [scan > 1.7];

// the background is the dark region touching the image border
Let background = touch(darkish,[border]);
Let rim = touch(bright, MDDT(background,<3.0));

Check "1" background;
Check "2" rim;
Check "3" flt(bright & !rim);
"#;

fn main() {
    let session = lang::parse(SCRIPT).expect("script parses");
    println!(
        "parsed {} definitions, {} checks",
        session.defs.len(),
        session.checks.len()
    );
    for def in &session.defs {
        let arity = def.params.len();
        println!("  Let {}/{arity}", def.name);
    }

    let attrs = vec!["scan".to_string()];
    let checks = lang::expand_session(&session, Some(&attrs)).expect("script expands");
    println!("\nexpanded core formulas:");
    for check in &checks {
        println!(
            "  Check \"{}\" (size {}):\n    {}",
            check.label,
            check.formula.size(),
            check.formula
        );
    }

    // the printer emits valid surface syntax: parse it back
    for check in &checks {
        let reparsed = lang::parse_formula(&check.formula.to_string())
            .and_then(|e| lang::desugar(&e))
            .expect("printed formula reparses");
        assert_eq!(reparsed, check.formula);
    }
    println!("\nprinted formulas reparse to identical core terms");
}
