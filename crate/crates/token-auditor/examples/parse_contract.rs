//! Parse a Solidity source file and walk the recovered AST.
//!
//! Run with: cargo run --example parse_contract

use token_auditor::solidity::parse_source;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/deprecatable.sol");
    let source = std::fs::read_to_string(path).expect("fixture is checked in");

    let (unit, diagnostics) = parse_source(&source);
    println!(
        "parsed {} contract(s), {} recovered region(s), fatal: {}",
        unit.contracts.len(),
        diagnostics.recovered_regions,
        diagnostics.fatal
    );

    for contract in &unit.contracts {
        println!("\ncontract {} ({:?})", contract.name, contract.kind);
        for var in &contract.state_vars {
            println!("  state {} {}", var.type_name, var.name);
        }
        for modifier in &contract.modifiers {
            println!("  modifier {}", modifier.name);
        }
        for function in &contract.functions {
            let kind = if function.is_constructor { "constructor" } else { "function" };
            let modifiers = if function.modifiers.is_empty() {
                String::new()
            } else {
                format!(" [{}]", function.modifiers.join(", "))
            };
            println!(
                "  {kind} {}({} param(s)){modifiers} at line {}",
                function.name,
                function.params.len(),
                function.line
            );
        }
    }

    // The parser is tolerant: statements it cannot model become
    // opaque nodes, and garbage between contracts is skipped while
    // the rest of the file still parses.
    let messy = "contract Ok { uint256 public total; }\n\
                 @#$ not solidity at all $#@\n\
                 contract AlsoOk { function f() public { total = 1; } }\n";
    let (unit, diagnostics) = parse_source(messy);
    println!(
        "\nmessy input: {} contract(s) recovered, {} region(s) skipped",
        unit.contracts.len(),
        diagnostics.recovered_regions
    );
}
