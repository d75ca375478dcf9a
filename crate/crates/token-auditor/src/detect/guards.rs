//! Privilege-guard recognition. A guard is either a modifier whose
//! body compares msg.sender against a privileged identity, or a
//! require doing the same at the top level of a function body.

use crate::solidity::{
    AstUnit, ContractDecl, Expr, Statement, Symbol, SymbolTable,
};

use super::{GuardKind, PrivilegeGuard};

/// Finds every privilege guard in the unit. Modifier guards list all
/// functions that invoke the modifier; modifiers applied to no
/// function are dropped. Inline guards cover exactly one function.
/// Constructors never count as guarded functions.
pub fn detect_privilege_guards(unit: &AstUnit, symbols: &SymbolTable) -> Vec<PrivilegeGuard> {
    let mut guards = Vec::new();
    for contract in &unit.contracts {
        for modifier in &contract.modifiers {
            let identity = match guard_identity(&modifier.body, contract, &modifier.name, symbols)
            {
                Some(id) => id,
                None => continue,
            };
            let functions: Vec<String> = contract
                .functions
                .iter()
                .filter(|f| !f.is_constructor && f.modifiers.iter().any(|m| m == &modifier.name))
                .map(|f| f.name.clone())
                .collect();
            if functions.is_empty() {
                continue;
            }
            guards.push(PrivilegeGuard {
                kind: GuardKind::ModifierBased,
                guard_name: modifier.name.clone(),
                privileged_identity: identity,
                functions_guarded: functions,
                contract: contract.name.clone(),
            });
        }
        for function in &contract.functions {
            if function.is_constructor {
                continue;
            }
            let body = match &function.body {
                Some(b) => b,
                None => continue,
            };
            for stmt in body {
                if let Statement::Require { condition, line } = stmt {
                    if let Some(identity) =
                        equality_identity(condition, contract, &function.name, symbols)
                    {
                        guards.push(PrivilegeGuard {
                            kind: GuardKind::InlineRequire,
                            guard_name: format!("inline@L{line}"),
                            privileged_identity: identity,
                            functions_guarded: vec![function.name.clone()],
                            contract: contract.name.clone(),
                        });
                        break;
                    }
                }
            }
        }
    }
    guards
}

/// Looks up the guard covering `function` in `contract`, if any.
pub fn guard_for<'a>(
    guards: &'a [PrivilegeGuard],
    contract: &str,
    function: &str,
) -> Option<&'a PrivilegeGuard> {
    guards
        .iter()
        .find(|g| g.contract == contract && g.functions_guarded.iter().any(|f| f == function))
}

/// Extracts the privileged identity from a modifier body. Accepts
/// `require(msg.sender == X)` at the top level, or the legacy shape
/// `if (msg.sender != X) revert()` / `throw`.
fn guard_identity(
    body: &[Statement],
    contract: &ContractDecl,
    scope: &str,
    symbols: &SymbolTable,
) -> Option<String> {
    for stmt in body {
        match stmt {
            Statement::Require { condition, .. } => {
                if let Some(id) = equality_identity(condition, contract, scope, symbols) {
                    return Some(id);
                }
            }
            Statement::If {
                condition,
                then_branch,
                ..
            } => {
                let rejects = then_branch.iter().any(|s| match s {
                    Statement::Call { callee, .. } => callee == "revert" || callee == "throw",
                    Statement::Opaque { text, .. } => text.contains("revert"),
                    _ => false,
                });
                if !rejects {
                    continue;
                }
                if let Some(id) = inequality_identity(condition, contract, scope, symbols) {
                    return Some(id);
                }
            }
            _ => {}
        }
    }
    None
}

fn equality_identity(
    condition: &Expr,
    contract: &ContractDecl,
    scope: &str,
    symbols: &SymbolTable,
) -> Option<String> {
    comparison_identity(condition, "==", contract, scope, symbols)
}

fn inequality_identity(
    condition: &Expr,
    contract: &ContractDecl,
    scope: &str,
    symbols: &SymbolTable,
) -> Option<String> {
    comparison_identity(condition, "!=", contract, scope, symbols)
}

/// The comparison must pit msg.sender against a plain identifier that
/// resolves, within `scope`, to an address-typed state variable or to
/// nothing at all (inherited identities stay usable as unresolved
/// names). Parameters and non-address variables are rejected.
fn comparison_identity(
    condition: &Expr,
    op: &str,
    contract: &ContractDecl,
    scope: &str,
    symbols: &SymbolTable,
) -> Option<String> {
    let Expr::Binary { op: bin_op, lhs, rhs } = condition else {
        return None;
    };
    if bin_op != op {
        return None;
    }
    let other = if lhs.is_msg_sender() {
        rhs
    } else if rhs.is_msg_sender() {
        lhs
    } else {
        return None;
    };
    let Expr::Ident(name) = other.as_ref() else {
        return None;
    };
    match symbols.resolve(&contract.name, Some(scope), name) {
        Symbol::StateVar { type_name } => {
            if type_name == "address" || type_name.starts_with("address ") {
                Some(name.clone())
            } else {
                None
            }
        }
        Symbol::Unknown => Some(name.clone()),
        _ => None,
    }
}
