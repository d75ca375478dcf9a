//! Disassemble EVM bytecode and ask whether dangerous opcodes are
//! genuinely present or just bytes inside PUSH immediates.
//!
//! Run with: cargo run --example disassemble_bytecode

use token_auditor::evm::{disassemble, find_opcodes, format_listing, parse_hex};

fn main() {
    // CALLER; SELFDESTRUCT: the classic kill switch, two bytes long.
    let kill = parse_hex("0x33ff").unwrap();
    print!("{}", format_listing(&disassemble(&kill)));

    for evidence in find_opcodes(&disassemble(&kill), &["SELFDESTRUCT"]) {
        println!(
            "{} at offsets {:?}, reachable guess: {}",
            evidence.mnemonic, evidence.offsets, evidence.reachable_guess
        );
    }

    // The same 0xff byte inside a PUSH2 immediate is data, not code.
    // A naive byte scan would report two SELFDESTRUCTs here; the
    // decoder reports none.
    let push = parse_hex("61ffff").unwrap();
    let instrs = disassemble(&push);
    print!("\n{}", format_listing(&instrs));
    let hits = find_opcodes(&instrs, &["SELFDESTRUCT"]);
    println!("SELFDESTRUCT entries for 61ffff: {}", hits.len());

    // Position-exact errors for malformed hex.
    match parse_hex("33fg") {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nbad input: {e}"),
    }
}
