//! The analysis pipeline: artifact to risk report, and parallel
//! corpus scans with deterministic, manifest-ordered output.

use rayon::prelude::*;

use crate::classify::{classify_with, featurize};
use crate::config::Weights;
use crate::corpus::manifest::{ContractArtifact, CorpusEntry, EntryKind};
use crate::corpus::report::{RiskReport, TOOL_VERSION};
use crate::detect::{detect_all, detect_privilege_guards, detect_self_destruction};
use crate::evm::{disassemble, find_opcodes, parse_hex};
use crate::solidity::{parse_source, resolve_symbols, AstUnit, ContractDecl};

#[derive(Debug, Clone, Default)]
pub struct AnalysisOptions {
    pub weights: Weights,
    /// Analyze this contract instead of the default target when a
    /// contract of that name exists in the unit.
    pub target_contract: Option<String>,
}

const ERC20_NAMES: [&str; 3] = ["transfer", "balanceOf", "totalSupply"];

fn declares_erc20(contract: &ContractDecl) -> bool {
    contract
        .functions
        .iter()
        .any(|f| ERC20_NAMES.contains(&f.name.as_str()))
        || contract
            .state_vars
            .iter()
            .any(|v| ERC20_NAMES.contains(&v.name.as_str()))
}

/// The analysis target: the requested contract when present, else the
/// last contract declaring an ERC-20 signature, else the last contract.
pub fn pick_target<'a>(unit: &'a AstUnit, requested: Option<&str>) -> Option<&'a ContractDecl> {
    if let Some(name) = requested {
        if let Some(contract) = unit.contracts.iter().rev().find(|c| c.name == name) {
            return Some(contract);
        }
    }
    unit.contracts
        .iter()
        .rev()
        .find(|c| declares_erc20(c))
        .or_else(|| unit.contracts.last())
}

/// Analyzes one artifact end to end. Never panics on malformed input:
/// fatal parses and undecodable bytecode yield a report with no
/// classification and the reason in `diagnostics`.
pub fn analyze_artifact(artifact: &ContractArtifact, opts: &AnalysisOptions) -> RiskReport {
    match artifact.kind {
        EntryKind::Source => analyze_source(artifact, opts),
        EntryKind::Bytecode => analyze_bytecode(artifact, opts),
    }
}

fn analyze_source(artifact: &ContractArtifact, opts: &AnalysisOptions) -> RiskReport {
    let (unit, diags) = parse_source(&artifact.content);
    if diags.fatal {
        return RiskReport {
            id: artifact.id.clone(),
            classification: None,
            findings: vec![],
            diagnostics: format!(
                "fatal: no contract declaration recognized; {} region(s) skipped",
                diags.recovered_regions
            ),
            tool_version: TOOL_VERSION.to_string(),
            digest: artifact.digest.clone(),
        };
    }
    let symbols = resolve_symbols(&unit);
    let all_guards = detect_privilege_guards(&unit, &symbols);
    let target = pick_target(&unit, opts.target_contract.as_deref())
        .expect("non-fatal parse has at least one contract");
    let findings: Vec<_> = detect_all(&unit, &symbols, &all_guards, None)
        .into_iter()
        .filter(|f| f.contract == target.name)
        .collect();
    let guards: Vec<_> = all_guards
        .iter()
        .filter(|g| g.contract == target.name)
        .cloned()
        .collect();
    let classification = classify_with(&featurize(&findings, &guards), &opts.weights);
    let mut diagnostics = format!(
        "target {}; {} contract(s) in unit; {} recovered region(s)",
        target.name,
        unit.contracts.len(),
        diags.recovered_regions
    );
    if let Some(requested) = opts.target_contract.as_deref() {
        if requested != target.name {
            diagnostics.push_str(&format!(
                "; requested contract {requested} not found, default target used"
            ));
        }
    }
    RiskReport {
        id: artifact.id.clone(),
        classification: Some(classification),
        findings,
        diagnostics,
        tool_version: TOOL_VERSION.to_string(),
        digest: artifact.digest.clone(),
    }
}

fn analyze_bytecode(artifact: &ContractArtifact, opts: &AnalysisOptions) -> RiskReport {
    let bytes = match parse_hex(&artifact.content) {
        Ok(bytes) => bytes,
        Err(e) => {
            return RiskReport {
                id: artifact.id.clone(),
                classification: None,
                findings: vec![],
                diagnostics: format!("bytecode not decodable: {e}"),
                tool_version: TOOL_VERSION.to_string(),
                digest: artifact.digest.clone(),
            }
        }
    };
    let instructions = disassemble(&bytes);
    let evidence = find_opcodes(&instructions, &["SELFDESTRUCT", "DELEGATECALL"]);
    let empty = AstUnit { contracts: vec![] };
    let findings = detect_self_destruction(&empty, &[], Some(&evidence));
    let classification = classify_with(&featurize(&findings, &[]), &opts.weights);
    let describe = |mnemonic: &str| {
        match evidence.iter().find(|e| e.mnemonic == mnemonic) {
            Some(e) => format!(
                "{mnemonic} x{} ({})",
                e.offsets.len(),
                if e.reachable_guess { "reachable" } else { "unreachable by linear scan" }
            ),
            None => format!("{mnemonic} absent"),
        }
    };
    let diagnostics = format!(
        "{} instruction(s); {}; {}",
        instructions.len(),
        describe("SELFDESTRUCT"),
        describe("DELEGATECALL"),
    );
    RiskReport {
        id: artifact.id.clone(),
        classification: Some(classification),
        findings,
        diagnostics,
        tool_version: TOOL_VERSION.to_string(),
        digest: artifact.digest.clone(),
    }
}

/// Report for an entry whose artifact never materialized.
fn unanalyzable_entry(entry_id: &str, message: &str) -> RiskReport {
    RiskReport {
        id: entry_id.to_string(),
        classification: None,
        findings: vec![],
        diagnostics: message.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        digest: String::new(),
    }
}

pub fn analyze_entry(entry: &CorpusEntry, opts: &AnalysisOptions) -> RiskReport {
    match &entry.artifact {
        Ok(artifact) => analyze_artifact(artifact, opts),
        Err(message) => unanalyzable_entry(&entry.entry.id, message),
    }
}

/// Analyzes every entry, in parallel, returning reports in manifest
/// order regardless of scheduling. `jobs` bounds the worker count;
/// None uses the default pool.
pub fn scan_corpus(
    entries: &[CorpusEntry],
    opts: &AnalysisOptions,
    jobs: Option<usize>,
) -> Vec<RiskReport> {
    let run = || {
        entries
            .par_iter()
            .map(|entry| analyze_entry(entry, opts))
            .collect()
    };
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    }
}
