//! EVM bytecode decoding: hex input handling, a Shanghai-table linear
//! disassembler with exact PUSH-immediate accounting, and mnemonic
//! lookup with a straight-line reachability guess.

pub mod disasm;
pub mod opcodes;

pub use disasm::{
    disassemble, find_opcodes, format_listing, parse_hex, reachable_guess, HexError, Instruction,
    OpcodeEvidence,
};
