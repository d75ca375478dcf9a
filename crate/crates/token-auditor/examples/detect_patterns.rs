//! Run the five pattern detectors against one contract and print
//! every finding with its privilege guard.
//!
//! Run with: cargo run --example detect_patterns

use token_auditor::detect::{detect_all, detect_privilege_guards};
use token_auditor::solidity::{parse_source, resolve_symbols};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/mint_burn.sol");
    let source = std::fs::read_to_string(path).expect("fixture is checked in");

    let (unit, _) = parse_source(&source);
    let symbols = resolve_symbols(&unit);
    let guards = detect_privilege_guards(&unit, &symbols);

    for guard in &guards {
        println!(
            "guard {} ({:?}) compares msg.sender to {}, covers {}",
            guard.guard_name,
            guard.kind,
            guard.privileged_identity,
            guard.functions_guarded.join(", ")
        );
    }

    let findings = detect_all(&unit, &symbols, &guards, None);
    println!("\n{} finding(s):", findings.len());
    for finding in &findings {
        let line = finding.line.map(|l| format!(" L{l}")).unwrap_or_default();
        println!(
            "- {:?} in {}.{}{line}\n  {}",
            finding.pattern, finding.contract, finding.function, finding.evidence
        );
    }
}
