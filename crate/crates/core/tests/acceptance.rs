//! The acceptance gate: runs every check of the verification suite at full
//! desk scale and prints one pass/fail line per criterion.

use dirichlet_core::verify::{run_all, VerifyConfig};

#[test]
fn acceptance() {
    let cfg = VerifyConfig::default();
    let outcomes = run_all(&cfg).expect("suite runs to completion");
    let mut all_passed = true;
    for o in &outcomes {
        println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.detail);
        all_passed &= o.passed;
    }
    assert!(all_passed, "at least one acceptance criterion failed");
}
