//! Feature extraction and the administrated / effectively-ungoverned
//! verdict, side by side for a guarded kill switch and a plain token.
//!
//! Run with: cargo run --example classify_token

use token_auditor::classify::{classify, featurize};
use token_auditor::detect::{detect_all, detect_privilege_guards};
use token_auditor::solidity::{parse_source, resolve_symbols};

fn describe(name: &str, source: &str) {
    let (unit, _) = parse_source(source);
    let symbols = resolve_symbols(&unit);
    let guards = detect_privilege_guards(&unit, &symbols);
    let findings = detect_all(&unit, &symbols, &guards, None);
    let features = featurize(&findings, &guards);
    let classification = classify(&features);

    println!("{name}:");
    println!("  verdict    {}", classification.verdict.as_str());
    println!("  quadrant   {}", classification.quadrant);
    println!("  risk score {}", classification.risk_score);
    for line in &classification.rationale {
        println!("  - {line}");
    }
    println!();
}

fn main() {
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    for name in ["kill_switch.sol", "plain_erc20.sol", "symbolic_owner.sol"] {
        let source = std::fs::read_to_string(format!("{fixtures}/{name}"))
            .expect("fixture is checked in");
        describe(name, &source);
    }
}
