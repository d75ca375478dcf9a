//! The five pattern detectors. Each is independent: it consumes the
//! AST, the symbol table, and the shared guard list, and produces
//! findings without consulting any other detector's output.

use std::collections::BTreeSet;

use crate::evm::OpcodeEvidence;
use crate::solidity::{
    AstUnit, ContractDecl, Expr, FunctionDecl, Statement, Symbol, SymbolTable,
};

use super::guards::guard_for;
use super::{Finding, FindingSource, Pattern, PrivilegeGuard};

/// Name used for contract and function on bytecode-only findings.
pub const BYTECODE_SCOPE: &str = "(bytecode)";

/// Guarded selfdestruct capability, plus reachable SELFDESTRUCT
/// opcodes when only bytecode evidence is available. One finding per
/// function containing a selfdestruct-call; unguarded occurrences are
/// reported too when the function is externally callable.
pub fn detect_self_destruction(
    unit: &AstUnit,
    guards: &[PrivilegeGuard],
    opcode_evidence: Option<&[OpcodeEvidence]>,
) -> Vec<Finding> {
    let mut findings = Vec::new();
    for contract in &unit.contracts {
        for function in bodies(contract) {
            let body = function.body.as_deref().unwrap_or_default();
            let mut first: Option<usize> = None;
            walk_statements(body, &mut |s| {
                if let Statement::SelfDestruct { line, .. } = s {
                    if first.is_none() {
                        first = Some(*line);
                    }
                }
            });
            let Some(line) = first else { continue };
            match guard_for(guards, &contract.name, &function.name) {
                Some(guard) => findings.push(Finding {
                    pattern: Pattern::SelfDestruction,
                    contract: contract.name.clone(),
                    function: function.name.clone(),
                    line: Some(line),
                    guard: Some(guard.guard_name.clone()),
                    evidence: format!(
                        "{}() invokes selfdestruct; restricted to {} by guard {}",
                        function.name, guard.privileged_identity, guard.guard_name
                    ),
                    source: FindingSource::Ast,
                }),
                None if function.is_externally_callable() => findings.push(Finding {
                    pattern: Pattern::SelfDestruction,
                    contract: contract.name.clone(),
                    function: function.name.clone(),
                    line: Some(line),
                    guard: None,
                    evidence: format!(
                        "{}() invokes selfdestruct unguarded: anyone may destroy the contract",
                        function.name
                    ),
                    source: FindingSource::Ast,
                }),
                None => {}
            }
        }
    }
    if unit.contracts.is_empty() {
        if let Some(evidence) = opcode_evidence {
            for ev in evidence {
                if ev.mnemonic == "SELFDESTRUCT" && !ev.offsets.is_empty() && ev.reachable_guess {
                    let offsets: Vec<String> =
                        ev.offsets.iter().map(|o| format!("{o:#06x}")).collect();
                    findings.push(Finding {
                        pattern: Pattern::SelfDestruction,
                        contract: BYTECODE_SCOPE.to_string(),
                        function: BYTECODE_SCOPE.to_string(),
                        line: None,
                        guard: None,
                        evidence: format!(
                            "SELFDESTRUCT opcode at byte offset {} judged reachable by linear scan",
                            offsets.join(", ")
                        ),
                        source: FindingSource::Bytecode,
                    });
                }
            }
        }
    }
    findings
}

/// Deprecation: a guard's function set both raises a boolean flag and
/// assigns a forwarding address, and some externally callable function
/// branches on the flag to forward through that address. One finding
/// per guard, attributed to the flag-raising function.
pub fn detect_deprecation(
    unit: &AstUnit,
    symbols: &SymbolTable,
    guards: &[PrivilegeGuard],
) -> Vec<Finding> {
    let mut findings = Vec::new();
    for contract in &unit.contracts {
        for guard in guards.iter().filter(|g| g.contract == contract.name) {
            let mut flag_sets: Vec<(String, String, usize)> = Vec::new();
            let mut addr_vars: Vec<String> = Vec::new();
            for fname in &guard.functions_guarded {
                let Some(function) = find_function(contract, fname) else { continue };
                let body = function.body.as_deref().unwrap_or_default();
                walk_statements(body, &mut |s| {
                    let Statement::Assign { target, value, line } = s else { return };
                    let Expr::Ident(var) = target else { return };
                    match symbols.resolve(&contract.name, Some(fname), var) {
                        Symbol::StateVar { type_name } if type_name == "bool" => {
                            if matches!(value, Expr::Ident(v) if v == "true") {
                                flag_sets.push((var.clone(), fname.clone(), *line));
                            }
                        }
                        Symbol::StateVar { type_name }
                            if (type_name == "address"
                                || type_name.starts_with("address "))
                                && !addr_vars.contains(var) =>
                        {
                            addr_vars.push(var.clone());
                        }
                        _ => {}
                    }
                });
            }
            'guard_done: for (flag, set_by, line) in &flag_sets {
                for addr in &addr_vars {
                    let Some(forwarder) = find_forwarder(contract, flag, addr) else {
                        continue;
                    };
                    findings.push(Finding {
                        pattern: Pattern::Deprecation,
                        contract: contract.name.clone(),
                        function: set_by.clone(),
                        line: Some(*line),
                        guard: Some(guard.guard_name.clone()),
                        evidence: format!(
                            "{set_by}() raises flag {flag} with forwarding address {addr}; \
                             {forwarder}() forwards through {addr} when {flag} is set"
                        ),
                        source: FindingSource::Ast,
                    });
                    break 'guard_done;
                }
            }
        }
    }
    findings
}

/// Change of address: a guarded function stores a parameter into an
/// address-typed state variable that is elsewhere used as a balance
/// key or as the target of a value transfer. One finding per redirected
/// variable per guard.
pub fn detect_address_change(
    unit: &AstUnit,
    symbols: &SymbolTable,
    guards: &[PrivilegeGuard],
) -> Vec<Finding> {
    let mut findings = Vec::new();
    for contract in &unit.contracts {
        for guard in guards.iter().filter(|g| g.contract == contract.name) {
            let mut seen: BTreeSet<String> = BTreeSet::new();
            for fname in &guard.functions_guarded {
                let Some(function) = find_function(contract, fname) else { continue };
                let body = function.body.as_deref().unwrap_or_default();
                let mut setters: Vec<(String, usize)> = Vec::new();
                walk_statements(body, &mut |s| {
                    let Statement::Assign { target, value, line } = s else { return };
                    let (Expr::Ident(var), Expr::Ident(param)) = (target, value) else { return };
                    let var_is_address = matches!(
                        symbols.resolve(&contract.name, Some(fname), var),
                        Symbol::StateVar { type_name }
                            if type_name == "address" || type_name.starts_with("address ")
                    );
                    let value_is_param = matches!(
                        symbols.resolve(&contract.name, Some(fname), param),
                        Symbol::Parameter { .. }
                    );
                    if var_is_address && value_is_param {
                        setters.push((var.clone(), *line));
                    }
                });
                for (var, line) in setters {
                    if !seen.insert(var.clone()) {
                        continue;
                    }
                    let Some((use_fn, use_line, how)) = find_use_site(contract, symbols, &var)
                    else {
                        continue;
                    };
                    findings.push(Finding {
                        pattern: Pattern::ChangeOfAddress,
                        contract: contract.name.clone(),
                        function: fname.clone(),
                        line: Some(line),
                        guard: Some(guard.guard_name.clone()),
                        evidence: format!(
                            "{fname}() redirects {var}; {how} in {use_fn}() at line {use_line}"
                        ),
                        source: FindingSource::Ast,
                    });
                }
            }
        }
    }
    findings
}

/// Minting: a function increases a supply variable or a balance entry
/// with no matching decrease anywhere in the same body. Guarded
/// occurrences are always reported; unguarded ones only when the
/// function is externally callable.
pub fn detect_mint(
    unit: &AstUnit,
    symbols: &SymbolTable,
    guards: &[PrivilegeGuard],
) -> Vec<Finding> {
    let mut findings = Vec::new();
    for contract in &unit.contracts {
        let supply = supply_vars(contract);
        for function in bodies(contract) {
            let deltas = collect_deltas(contract, symbols, &supply, function);
            let increases: Vec<&Delta> = deltas.iter().filter(|d| d.increase).collect();
            if increases.is_empty() || deltas.iter().any(|d| !d.increase) {
                continue;
            }
            let targets: Vec<String> = increases.iter().map(|d| d.describe()).collect();
            let line = increases[0].line;
            match guard_for(guards, &contract.name, &function.name) {
                Some(guard) => findings.push(Finding {
                    pattern: Pattern::Minting,
                    contract: contract.name.clone(),
                    function: function.name.clone(),
                    line: Some(line),
                    guard: Some(guard.guard_name.clone()),
                    evidence: format!(
                        "{}() increases {} with no matching decrease; restricted to {}",
                        function.name,
                        targets.join(" and "),
                        guard.privileged_identity
                    ),
                    source: FindingSource::Ast,
                }),
                None if function.is_externally_callable() => findings.push(Finding {
                    pattern: Pattern::Minting,
                    contract: contract.name.clone(),
                    function: function.name.clone(),
                    line: Some(line),
                    guard: None,
                    evidence: format!(
                        "{}() increases {} with no matching decrease; unguarded: anyone may mint",
                        function.name,
                        targets.join(" and ")
                    ),
                    source: FindingSource::Ast,
                }),
                None => {}
            }
        }
    }
    findings
}

/// Burning: a function decreases a balance entry keyed by one of its
/// own parameters (never msg.sender) with no increase to any supply or
/// balance target in the same body. The pairing condition keeps
/// guarded transfer-style helpers out.
pub fn detect_burn(
    unit: &AstUnit,
    symbols: &SymbolTable,
    guards: &[PrivilegeGuard],
) -> Vec<Finding> {
    let mut findings = Vec::new();
    for contract in &unit.contracts {
        let supply = supply_vars(contract);
        for function in bodies(contract) {
            let deltas = collect_deltas(contract, symbols, &supply, function);
            if deltas.iter().any(|d| d.increase) {
                continue;
            }
            let victim = deltas.iter().find(|d| {
                if d.increase {
                    return false;
                }
                let DeltaTarget::Balance { key, .. } = &d.target else {
                    return false;
                };
                let Expr::Ident(k) = key else { return false };
                matches!(
                    symbols.resolve(&contract.name, Some(&function.name), k),
                    Symbol::Parameter { .. }
                )
            });
            let Some(victim) = victim else { continue };
            let described = victim.describe();
            match guard_for(guards, &contract.name, &function.name) {
                Some(guard) => findings.push(Finding {
                    pattern: Pattern::Burning,
                    contract: contract.name.clone(),
                    function: function.name.clone(),
                    line: Some(victim.line),
                    guard: Some(guard.guard_name.clone()),
                    evidence: format!(
                        "{}() decreases {} for a caller-chosen holder; restricted to {}",
                        function.name, described, guard.privileged_identity
                    ),
                    source: FindingSource::Ast,
                }),
                None if function.is_externally_callable() => findings.push(Finding {
                    pattern: Pattern::Burning,
                    contract: contract.name.clone(),
                    function: function.name.clone(),
                    line: Some(victim.line),
                    guard: None,
                    evidence: format!(
                        "{}() decreases {} for a caller-chosen holder; unguarded: anyone may burn",
                        function.name, described
                    ),
                    source: FindingSource::Ast,
                }),
                None => {}
            }
        }
    }
    findings
}

fn bodies(contract: &ContractDecl) -> impl Iterator<Item = &FunctionDecl> {
    contract
        .functions
        .iter()
        .filter(|f| !f.is_constructor && f.body.is_some())
}

fn find_function<'a>(contract: &'a ContractDecl, name: &str) -> Option<&'a FunctionDecl> {
    contract.functions.iter().find(|f| f.name == name)
}

fn walk_statements<'a>(body: &'a [Statement], visit: &mut dyn FnMut(&'a Statement)) {
    for stmt in body {
        visit(stmt);
        if let Statement::If { then_branch, else_branch, .. } = stmt {
            walk_statements(then_branch, visit);
            walk_statements(else_branch, visit);
        }
    }
}

fn any_subexpr(expr: &Expr, pred: &dyn Fn(&Expr) -> bool) -> bool {
    if pred(expr) {
        return true;
    }
    match expr {
        Expr::Member { base, .. } => any_subexpr(base, pred),
        Expr::Index { base, index } => any_subexpr(base, pred) || any_subexpr(index, pred),
        Expr::Call { callee, args } => {
            any_subexpr(callee, pred) || args.iter().any(|a| any_subexpr(a, pred))
        }
        Expr::Binary { lhs, rhs, .. } => any_subexpr(lhs, pred) || any_subexpr(rhs, pred),
        Expr::Unary { operand, .. } => any_subexpr(operand, pred),
        Expr::Tuple(items) => items.iter().any(|e| any_subexpr(e, pred)),
        _ => false,
    }
}

fn statement_exprs(stmt: &Statement) -> Vec<&Expr> {
    match stmt {
        Statement::Require { condition, .. } => vec![condition],
        Statement::Assign { target, value, .. } => vec![target, value],
        Statement::CompoundAssign { target, value, .. } => vec![target, value],
        Statement::Call { args, .. } => args.iter().collect(),
        Statement::MemberCall { callee, args, .. } => {
            let mut v = vec![callee];
            v.extend(args.iter());
            v
        }
        Statement::If { condition, .. } => vec![condition],
        Statement::Return { value, .. } => value.iter().collect(),
        Statement::Emit { args, .. } => args.iter().collect(),
        Statement::SelfDestruct { args, .. } => args.iter().collect(),
        Statement::Opaque { .. } => vec![],
    }
}

/// True when the expression contains a member call whose overall call
/// expression mentions `addr`: the forwarding shape
/// `Other(addr).method(...)` or `addr.method(...)`.
fn expr_forwards_through(expr: &Expr, addr: &str) -> bool {
    any_subexpr(expr, &|e| {
        matches!(e, Expr::Call { callee, .. }
            if matches!(callee.as_ref(), Expr::Member { .. }) && e.mentions(addr))
    })
}

fn branch_forwards(branch: &[Statement], addr: &str) -> bool {
    let mut found = false;
    walk_statements(branch, &mut |s| {
        if found {
            return;
        }
        if let Statement::Opaque { text, .. } = s {
            if text.contains(addr) {
                found = true;
                return;
            }
        }
        if let Statement::MemberCall { callee, args, .. } = s {
            if callee.mentions(addr) || args.iter().any(|a| a.mentions(addr)) {
                found = true;
                return;
            }
        }
        if statement_exprs(s).iter().any(|e| expr_forwards_through(e, addr)) {
            found = true;
        }
    });
    found
}

/// Finds an externally callable function that branches on `flag` and
/// forwards through `addr` inside the flagged branch.
fn find_forwarder(contract: &ContractDecl, flag: &str, addr: &str) -> Option<String> {
    for function in bodies(contract) {
        if !function.is_externally_callable() {
            continue;
        }
        let body = function.body.as_deref().unwrap_or_default();
        let mut hit = false;
        walk_statements(body, &mut |s| {
            if hit {
                return;
            }
            if let Statement::If { condition, then_branch, else_branch, .. } = s {
                if condition.mentions(flag)
                    && (branch_forwards(then_branch, addr) || branch_forwards(else_branch, addr))
                {
                    hit = true;
                }
            }
        });
        if hit {
            return Some(function.name.clone());
        }
    }
    None
}

/// Use site for a redirected address variable: written as a balance
/// key, or flowing through a value-transfer member call.
fn find_use_site(
    contract: &ContractDecl,
    symbols: &SymbolTable,
    var: &str,
) -> Option<(String, usize, String)> {
    const TRANSFER_MEMBERS: [&str; 3] = ["transfer", "send", "call"];
    let is_transfer_call = |e: &Expr| {
        matches!(e, Expr::Call { callee, args }
            if matches!(callee.as_ref(), Expr::Member { base, member }
                if TRANSFER_MEMBERS.contains(&member.as_str())
                    && (base.mentions(var) || args.iter().any(|a| a.mentions(var)))))
    };
    for function in bodies(contract) {
        // A same-named parameter shadows the state variable here.
        let refers_to_state = matches!(
            symbols.resolve(&contract.name, Some(&function.name), var),
            Symbol::StateVar { .. } | Symbol::Unknown
        );
        if !refers_to_state {
            continue;
        }
        let body = function.body.as_deref().unwrap_or_default();
        let mut site: Option<(usize, String)> = None;
        walk_statements(body, &mut |s| {
            if site.is_some() {
                return;
            }
            if let Statement::Assign { target, .. } | Statement::CompoundAssign { target, .. } = s
            {
                if let Expr::Index { base, index } = target {
                    if let Expr::Ident(map) = base.as_ref() {
                        if is_balances_map(contract, symbols, &function.name, map)
                            && index.mentions(var)
                        {
                            site = Some((s.line(), format!("balance entry {map}[{var}] written")));
                            return;
                        }
                    }
                }
            }
            if let Statement::MemberCall { callee, method, args, .. } = s {
                if TRANSFER_MEMBERS.contains(&method.as_str())
                    && (callee.mentions(var) || args.iter().any(|a| a.mentions(var)))
                {
                    site = Some((s.line(), format!("value transfer through {var}")));
                    return;
                }
            }
            if statement_exprs(s).iter().any(|e| any_subexpr(e, &is_transfer_call)) {
                site = Some((s.line(), format!("value transfer through {var}")));
            }
        });
        if let Some((line, how)) = site {
            return Some((function.name.clone(), line, how));
        }
    }
    None
}

/// State variables that carry total supply: any whose lowercase name
/// contains "supply", plus the variable returned by a totalSupply()
/// accessor when one exists.
fn supply_vars(contract: &ContractDecl) -> BTreeSet<String> {
    let mut vars: BTreeSet<String> = contract
        .state_vars
        .iter()
        .filter(|v| v.name.to_lowercase().contains("supply"))
        .map(|v| v.name.clone())
        .collect();
    if let Some(accessor) = find_function(contract, "totalSupply") {
        if let Some(body) = &accessor.body {
            walk_statements(body, &mut |s| {
                if let Statement::Return { value: Some(Expr::Ident(v)), .. } = s {
                    if contract.state_vars.iter().any(|sv| &sv.name == v) {
                        vars.insert(v.clone());
                    }
                }
            });
        }
    }
    vars
}

fn is_balances_map(
    contract: &ContractDecl,
    symbols: &SymbolTable,
    scope: &str,
    name: &str,
) -> bool {
    if !name.to_lowercase().contains("balance") {
        return false;
    }
    matches!(
        symbols.resolve(&contract.name, Some(scope), name),
        Symbol::StateVar { type_name } if type_name.starts_with("mapping(address")
    )
}

#[derive(Debug)]
enum DeltaTarget {
    Supply(String),
    Balance { map: String, key: Expr },
}

#[derive(Debug)]
struct Delta {
    target: DeltaTarget,
    increase: bool,
    line: usize,
}

impl Delta {
    fn describe(&self) -> String {
        match &self.target {
            DeltaTarget::Supply(v) => v.clone(),
            DeltaTarget::Balance { map, key } => format!("{map}[{}]", expr_text(key)),
        }
    }
}

fn expr_text(expr: &Expr) -> String {
    match expr {
        Expr::Ident(s) | Expr::Number(s) => s.clone(),
        Expr::Str(s) => format!("{s:?}"),
        Expr::Member { base, member } => format!("{}.{member}", expr_text(base)),
        Expr::Index { base, index } => format!("{}[{}]", expr_text(base), expr_text(index)),
        Expr::Call { callee, .. } => format!("{}(..)", expr_text(callee)),
        _ => "..".to_string(),
    }
}

/// Collects increases and decreases of supply variables and balance
/// entries in a function body. Compound assignment counts directly;
/// plain assignment counts when the right side is `target + x` or
/// `target - x`.
fn collect_deltas(
    contract: &ContractDecl,
    symbols: &SymbolTable,
    supply: &BTreeSet<String>,
    function: &FunctionDecl,
) -> Vec<Delta> {
    let scope = &function.name;
    let classify_target = |target: &Expr| -> Option<DeltaTarget> {
        match target {
            Expr::Ident(v) => {
                if supply.contains(v)
                    && matches!(
                        symbols.resolve(&contract.name, Some(scope), v),
                        Symbol::StateVar { .. }
                    )
                {
                    Some(DeltaTarget::Supply(v.clone()))
                } else {
                    None
                }
            }
            Expr::Index { base, index } => {
                let Expr::Ident(map) = base.as_ref() else { return None };
                if is_balances_map(contract, symbols, scope, map) {
                    Some(DeltaTarget::Balance {
                        map: map.clone(),
                        key: index.as_ref().clone(),
                    })
                } else {
                    None
                }
            }
            _ => None,
        }
    };
    let mut deltas = Vec::new();
    let body = function.body.as_deref().unwrap_or_default();
    walk_statements(body, &mut |s| match s {
        Statement::CompoundAssign { target, op, line, .. } => {
            let increase = match op.as_str() {
                "+=" => true,
                "-=" => false,
                _ => return,
            };
            if let Some(t) = classify_target(target) {
                deltas.push(Delta { target: t, increase, line: *line });
            }
        }
        Statement::Assign { target, value, line } => {
            let Expr::Binary { op, lhs, rhs } = value else { return };
            let increase = match op.as_str() {
                "+" if lhs.as_ref() == target || rhs.as_ref() == target => true,
                "-" if lhs.as_ref() == target => false,
                _ => return,
            };
            if let Some(t) = classify_target(target) {
                deltas.push(Delta { target: t, increase, line: *line });
            }
        }
        _ => {}
    });
    deltas
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{detect_all, detect_privilege_guards};
    use crate::evm::{disassemble, find_opcodes, parse_hex};
    use crate::solidity::{parse_source, resolve_symbols};

    fn findings_of(source: &str) -> Vec<Finding> {
        let (unit, diags) = parse_source(source);
        assert!(!diags.fatal);
        let symbols = resolve_symbols(&unit);
        let guards = detect_privilege_guards(&unit, &symbols);
        detect_all(&unit, &symbols, &guards, None)
    }

    fn single(source: &str, pattern: Pattern) -> Finding {
        let findings = findings_of(source);
        assert_eq!(findings.len(), 1, "expected one finding, got {findings:?}");
        assert_eq!(findings[0].pattern, pattern);
        findings.into_iter().next().unwrap()
    }

    #[test]
    fn issue_function_is_minting() {
        let f = single(include_str!("../../fixtures/usdt_issue.sol"), Pattern::Minting);
        assert_eq!(f.contract, "StableToken");
        assert_eq!(f.function, "issue");
        assert_eq!(f.guard.as_deref(), Some("onlyOwner"));
        assert!(f.evidence.contains("balances[owner]"));
        assert!(f.evidence.contains("_totalSupply"));
        assert_eq!(f.source, FindingSource::Ast);
        assert!(f.line.is_some());
    }

    #[test]
    fn plain_assignment_mint_is_detected() {
        let f = single(include_str!("../../fixtures/issue_assign.sol"), Pattern::Minting);
        assert_eq!(f.function, "issue");
        assert_eq!(f.guard.as_deref(), Some("onlyOwner"));
    }

    #[test]
    fn kill_switch_is_self_destruction() {
        let f = single(include_str!("../../fixtures/kill_switch.sol"), Pattern::SelfDestruction);
        assert_eq!(f.contract, "KillableToken");
        assert_eq!(f.function, "kill");
        assert_eq!(f.guard.as_deref(), Some("onlyOwner"));
        assert!(f.evidence.contains("owner"));
    }

    #[test]
    fn suicide_alias_is_self_destruction() {
        let f = single(include_str!("../../fixtures/suicide_legacy.sol"), Pattern::SelfDestruction);
        assert_eq!(f.function, "shutdown");
        assert_eq!(f.guard.as_deref(), Some("onlyOwner"));
    }

    #[test]
    fn deprecate_with_forwarding_is_deprecation() {
        let f = single(include_str!("../../fixtures/deprecatable.sol"), Pattern::Deprecation);
        assert_eq!(f.contract, "DeprecatableToken");
        assert_eq!(f.function, "deprecate");
        assert!(f.evidence.contains("deprecated"));
        assert!(f.evidence.contains("upgradedAddress"));
        assert!(f.evidence.contains("transfer()"));
    }

    #[test]
    fn staged_deprecation_across_two_functions() {
        let f = single(include_str!("../../fixtures/deprecation_split.sol"), Pattern::Deprecation);
        assert_eq!(f.function, "retire");
        assert!(f.evidence.contains("successor"));
    }

    #[test]
    fn fee_collector_redirect_is_change_of_address() {
        let f = single(include_str!("../../fixtures/fee_redirect.sol"), Pattern::ChangeOfAddress);
        assert_eq!(f.function, "setFeeCollector");
        assert_eq!(f.guard.as_deref(), Some("onlyOwner"));
        assert!(f.evidence.contains("feeCollector"));
        assert!(f.evidence.contains("transfer()"));
    }

    #[test]
    fn inline_guarded_setter_is_change_of_address() {
        let f = single(include_str!("../../fixtures/fee_inline.sol"), Pattern::ChangeOfAddress);
        assert_eq!(f.function, "setSink");
        let guard = f.guard.expect("inline guard");
        assert!(guard.starts_with("inline@L"));
    }

    #[test]
    fn treasury_token_mints_and_burns() {
        let findings = findings_of(include_str!("../../fixtures/mint_burn.sol"));
        assert_eq!(findings.len(), 2);
        let mint = findings.iter().find(|f| f.pattern == Pattern::Minting).unwrap();
        let burn = findings.iter().find(|f| f.pattern == Pattern::Burning).unwrap();
        assert_eq!(mint.function, "mint");
        assert_eq!(burn.function, "confiscate");
        assert_eq!(burn.guard.as_deref(), Some("onlyIssuer"));
        assert!(burn.evidence.contains("balances[holder]"));
    }

    #[test]
    fn negative_fixtures_produce_no_findings() {
        for (name, source) in [
            ("plain_erc20", include_str!("../../fixtures/plain_erc20.sol")),
            ("symbolic_owner", include_str!("../../fixtures/symbolic_owner.sol")),
            ("paired_transfer", include_str!("../../fixtures/paired_transfer.sol")),
            ("pause_only", include_str!("../../fixtures/pause_only.sol")),
            ("self_burn_only", include_str!("../../fixtures/self_burn_only.sol")),
            ("empty", include_str!("../../fixtures/empty.sol")),
        ] {
            let findings = findings_of(source);
            assert!(findings.is_empty(), "{name} produced {findings:?}");
        }
    }

    #[test]
    fn paired_decrement_is_not_burning() {
        let (unit, _) = parse_source(include_str!("../../fixtures/paired_transfer.sol"));
        let symbols = resolve_symbols(&unit);
        let guards = detect_privilege_guards(&unit, &symbols);
        assert_eq!(guards.len(), 1, "rescue must be guarded for this test to bite");
        assert!(detect_burn(&unit, &symbols, &guards).is_empty());
    }

    #[test]
    fn transfer_from_is_not_burning() {
        let (unit, _) = parse_source(include_str!("../../fixtures/plain_erc20.sol"));
        let symbols = resolve_symbols(&unit);
        assert!(detect_burn(&unit, &symbols, &[]).is_empty());
    }

    #[test]
    fn unguarded_faucet_is_reported_as_unguarded_mint() {
        let source = "contract Faucet {\n\
             uint256 public totalSupply;\n\
             mapping(address => uint256) public balances;\n\
             function drip() public {\n\
                 balances[msg.sender] += 100;\n\
                 totalSupply += 100;\n\
             }\n\
         }";
        let findings = findings_of(source);
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].pattern, Pattern::Minting);
        assert_eq!(findings[0].guard, None);
        assert!(findings[0].evidence.contains("unguarded"));
    }

    #[test]
    fn unguarded_selfdestruct_is_reported_as_unguarded() {
        let source = "contract Bomb { function boom() public { selfdestruct(msg.sender); } }";
        let findings = findings_of(source);
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].pattern, Pattern::SelfDestruction);
        assert!(findings[0].evidence.contains("unguarded"));
    }

    #[test]
    fn internal_unguarded_helpers_are_not_reported() {
        let source = "contract T {\n\
             uint256 totalSupply;\n\
             mapping(address => uint256) balances;\n\
             function grow(address who, uint256 n) internal { balances[who] += n; totalSupply += n; }\n\
         }";
        assert!(findings_of(source).is_empty());
    }

    #[test]
    fn bytecode_selfdestruct_yields_finding() {
        let bytes = parse_hex("33ff").unwrap();
        let instrs = disassemble(&bytes);
        let evidence = find_opcodes(&instrs, &["SELFDESTRUCT"]);
        let unit = AstUnit { contracts: vec![] };
        let findings = detect_self_destruction(&unit, &[], Some(&evidence));
        assert_eq!(findings.len(), 1);
        let f = &findings[0];
        assert_eq!(f.source, FindingSource::Bytecode);
        assert_eq!(f.line, None);
        assert_eq!(f.contract, BYTECODE_SCOPE);
        assert!(f.evidence.contains("0x0001"));
    }

    #[test]
    fn unreachable_bytecode_selfdestruct_is_not_a_finding() {
        let bytes = parse_hex("00ff").unwrap();
        let instrs = disassemble(&bytes);
        let evidence = find_opcodes(&instrs, &["SELFDESTRUCT"]);
        let unit = AstUnit { contracts: vec![] };
        assert!(detect_self_destruction(&unit, &[], Some(&evidence)).is_empty());
    }

    #[test]
    fn detectors_are_independent_of_each_other() {
        let source = include_str!("../../fixtures/mint_burn.sol");
        let (unit, _) = parse_source(source);
        let symbols = resolve_symbols(&unit);
        let guards = detect_privilege_guards(&unit, &symbols);
        let mint_alone = detect_mint(&unit, &symbols, &guards);
        let all = detect_all(&unit, &symbols, &guards, None);
        let mint_in_all: Vec<&Finding> =
            all.iter().filter(|f| f.pattern == Pattern::Minting).collect();
        assert_eq!(mint_alone.len(), mint_in_all.len());
        assert_eq!(&mint_alone[0], mint_in_all[0]);
    }

    #[test]
    fn every_guarded_finding_references_a_covering_guard() {
        for source in [
            include_str!("../../fixtures/usdt_issue.sol"),
            include_str!("../../fixtures/kill_switch.sol"),
            include_str!("../../fixtures/deprecatable.sol"),
            include_str!("../../fixtures/fee_redirect.sol"),
            include_str!("../../fixtures/mint_burn.sol"),
            include_str!("../../fixtures/deprecation_split.sol"),
            include_str!("../../fixtures/fee_inline.sol"),
            include_str!("../../fixtures/suicide_legacy.sol"),
            include_str!("../../fixtures/issue_assign.sol"),
        ] {
            let (unit, _) = parse_source(source);
            let symbols = resolve_symbols(&unit);
            let guards = detect_privilege_guards(&unit, &symbols);
            for finding in detect_all(&unit, &symbols, &guards, None) {
                let Some(guard_name) = &finding.guard else { continue };
                let guard = guards
                    .iter()
                    .find(|g| &g.guard_name == guard_name && g.contract == finding.contract)
                    .expect("finding references a known guard");
                assert!(guard.functions_guarded.contains(&finding.function));
            }
        }
    }

    #[test]
    fn appending_unrelated_contract_preserves_findings() {
        let base = include_str!("../../fixtures/usdt_issue.sol");
        let extended = format!("{base}\ncontract Unrelated {{ uint256 x; }}");
        let original = findings_of(base);
        let with_extra: Vec<Finding> = findings_of(&extended)
            .into_iter()
            .filter(|f| f.contract == "StableToken")
            .collect();
        assert_eq!(original, with_extra);
    }
}
