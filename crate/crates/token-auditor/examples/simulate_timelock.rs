//! Drive the safely-administrated token state machine through a
//! scenario and check the four safety properties on the trace.
//!
//! Run with: cargo run --example simulate_timelock

use token_auditor::sim::{exit_comparison, parse_scenario, run_scenario};

fn main() {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/scenarios/adversarial.scn"
    );
    let text = std::fs::read_to_string(path).expect("fixture is checked in");
    let scenario = parse_scenario(&text).expect("fixture parses");

    let trace = run_scenario(&scenario);
    for event in &trace.events {
        match event.reason {
            None => println!("t={:<8} {:<8} {:<28} applied", event.t, event.principal, event.op),
            Some(reason) => println!(
                "t={:<8} {:<8} {:<28} rejected: {reason}",
                event.t, event.principal, event.op
            ),
        }
    }

    println!();
    for verdict in &trace.verdicts {
        println!(
            "{} {}  {}",
            verdict.property,
            if verdict.pass { "pass" } else { "FAIL" },
            verdict.detail
        );
    }

    // The exit story behind P2: a holder who leaves during the delay
    // ends up with the same balance whether or not the pending action
    // ever executes.
    let cmp = exit_comparison(604_800);
    println!(
        "\nexit balance with execute {}, without {}, pre-proposal {}",
        cmp.exit_balance_with_execute,
        cmp.exit_balance_without_execute,
        cmp.pre_proposal_balance
    );
}
