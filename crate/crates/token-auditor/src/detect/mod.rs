//! The administrated-pattern catalog: a shared privilege-guard
//! detector plus five independent pattern detectors over the AST, with
//! an opcode-evidence path for bytecode-only artifacts.

pub mod guards;
pub mod patterns;

use serde::Serialize;

use crate::evm::OpcodeEvidence;
use crate::solidity::{AstUnit, SymbolTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Pattern {
    SelfDestruction,
    Deprecation,
    ChangeOfAddress,
    Minting,
    Burning,
}

impl Pattern {
    pub const ALL: [Pattern; 5] = [
        Pattern::SelfDestruction,
        Pattern::Deprecation,
        Pattern::ChangeOfAddress,
        Pattern::Minting,
        Pattern::Burning,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FindingSource {
    Ast,
    Bytecode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuardKind {
    ModifierBased,
    InlineRequire,
}

/// A caller restriction and the functions it covers. Always references
/// at least one function; unused modifiers are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrivilegeGuard {
    pub kind: GuardKind,
    /// Modifier name, or "inline@L<line>" for a require written
    /// directly in a function body.
    pub guard_name: String,
    /// Identifier the caller is compared against. Resolves to an
    /// address-typed state variable, or is unresolvable in the subset.
    pub privileged_identity: String,
    pub functions_guarded: Vec<String>,
    pub contract: String,
}

/// One detected pattern occurrence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub pattern: Pattern,
    pub contract: String,
    pub function: String,
    /// Source line for AST findings; None for bytecode findings, whose
    /// byte offsets live in the evidence text.
    pub line: Option<usize>,
    /// guard_name of the covering PrivilegeGuard, when any.
    pub guard: Option<String>,
    pub evidence: String,
    pub source: FindingSource,
}

pub use guards::detect_privilege_guards;
pub use patterns::{
    detect_address_change, detect_burn, detect_deprecation, detect_mint, detect_self_destruction,
};

/// Runs every detector, concatenating findings in catalog order.
pub fn detect_all(
    unit: &AstUnit,
    symbols: &SymbolTable,
    guards: &[PrivilegeGuard],
    opcode_evidence: Option<&[OpcodeEvidence]>,
) -> Vec<Finding> {
    let mut findings = detect_self_destruction(unit, guards, opcode_evidence);
    findings.extend(detect_deprecation(unit, symbols, guards));
    findings.extend(detect_address_change(unit, symbols, guards));
    findings.extend(detect_mint(unit, symbols, guards));
    findings.extend(detect_burn(unit, symbols, guards));
    findings
}
