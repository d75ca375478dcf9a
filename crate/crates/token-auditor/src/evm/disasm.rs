use super::opcodes;

/// One decoded instruction. Offsets are byte positions in the original
/// code; every input byte belongs to exactly one instruction, either as
/// its opcode or inside its immediate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instruction {
    pub offset: usize,
    pub opcode: u8,
    pub mnemonic: String,
    /// Present only for PUSH1..PUSH32. May be shorter than the declared
    /// width when the code ends mid-immediate; such instructions are
    /// flagged invalid.
    pub immediate: Option<Vec<u8>>,
    pub invalid: bool,
}

impl Instruction {
    pub fn width(&self) -> usize {
        1 + self.immediate.as_ref().map_or(0, Vec::len)
    }
}

/// Occurrences of one mnemonic across an instruction stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpcodeEvidence {
    pub mnemonic: String,
    pub offsets: Vec<usize>,
    /// True when at least one occurrence is reachable per the
    /// straight-line heuristic of [`reachable_guess`].
    pub reachable_guess: bool,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HexError {
    #[error("odd number of hex digits ({0})")]
    OddLength(usize),
    #[error("invalid hex digit {found:?} at position {position}")]
    BadDigit { found: char, position: usize },
}

/// Decodes hex text into bytes. An optional 0x prefix and any ASCII
/// whitespace are tolerated; error positions refer to the original
/// string, prefix and whitespace included.
pub fn parse_hex(text: &str) -> Result<Vec<u8>, HexError> {
    let mut digits: Vec<(usize, char)> = Vec::new();
    for (pos, ch) in text.char_indices() {
        if !ch.is_ascii_whitespace() {
            digits.push((pos, ch));
        }
    }
    if digits.len() >= 2 && digits[0].1 == '0' && (digits[1].1 == 'x' || digits[1].1 == 'X') {
        digits.drain(..2);
    }
    if !digits.len().is_multiple_of(2) {
        return Err(HexError::OddLength(digits.len()));
    }
    let mut bytes = Vec::with_capacity(digits.len() / 2);
    for pair in digits.chunks(2) {
        let mut value = 0u8;
        for &(pos, ch) in pair {
            let nibble = ch
                .to_digit(16)
                .ok_or(HexError::BadDigit { found: ch, position: pos })?;
            value = value << 4 | nibble as u8;
        }
        bytes.push(value);
    }
    Ok(bytes)
}

/// Linear decode of raw bytecode. Undefined bytes become single-byte
/// instructions named UNKNOWN(0x..) and flagged invalid; a PUSH whose
/// immediate runs past the end keeps the partial immediate and is
/// flagged invalid. The sum of instruction widths always equals the
/// input length.
pub fn disassemble(code: &[u8]) -> Vec<Instruction> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < code.len() {
        let op = code[i];
        let offset = i;
        i += 1;
        let (mnemonic, mut invalid) = match opcodes::mnemonic(op) {
            Some(m) => (m.to_string(), false),
            None => (format!("UNKNOWN(0x{op:02x})"), true),
        };
        let want = opcodes::immediate_len(op);
        let immediate = if want > 0 {
            let end = (i + want).min(code.len());
            let imm = code[i..end].to_vec();
            if imm.len() < want {
                invalid = true;
            }
            i = end;
            Some(imm)
        } else {
            None
        };
        out.push(Instruction { offset, opcode: op, mnemonic, immediate, invalid });
    }
    out
}

/// Straight-line reachability guess, no jump-target resolution. An
/// instruction is marked unreachable when it follows STOP, RETURN,
/// REVERT, INVALID, or an undefined byte with no JUMPDEST in between.
pub fn reachable_guess(instrs: &[Instruction]) -> Vec<bool> {
    let mut reachable = true;
    instrs
        .iter()
        .map(|ins| {
            if ins.opcode == opcodes::JUMPDEST {
                reachable = true;
            }
            let here = reachable;
            let terminator = matches!(
                ins.opcode,
                opcodes::STOP | opcodes::RETURN | opcodes::REVERT | opcodes::INVALID
            );
            if terminator || ins.invalid {
                reachable = false;
            }
            here
        })
        .collect()
}

/// One evidence row per wanted mnemonic that occurs, offsets in stream
/// order. Result order follows `wanted`.
pub fn find_opcodes(instrs: &[Instruction], wanted: &[&str]) -> Vec<OpcodeEvidence> {
    let reach = reachable_guess(instrs);
    let mut out = Vec::new();
    for name in wanted {
        let mut offsets = Vec::new();
        let mut any_reachable = false;
        for (ins, reachable) in instrs.iter().zip(&reach) {
            if ins.mnemonic == *name {
                offsets.push(ins.offset);
                any_reachable |= *reachable;
            }
        }
        if !offsets.is_empty() {
            out.push(OpcodeEvidence {
                mnemonic: (*name).to_string(),
                offsets,
                reachable_guess: any_reachable,
            });
        }
    }
    out
}

/// Text listing, one instruction per line: offset in hex, mnemonic,
/// immediate hex when present.
pub fn format_listing(instrs: &[Instruction]) -> String {
    let mut text = String::new();
    for ins in instrs {
        text.push_str(&format!("{:08x}  {}", ins.offset, ins.mnemonic));
        if let Some(imm) = &ins.immediate {
            if !imm.is_empty() {
                text.push_str("  ");
                text.push_str(&hex::encode(imm));
            }
        }
        text.push('\n');
    }
    text
}
