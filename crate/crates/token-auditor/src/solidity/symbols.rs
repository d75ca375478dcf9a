use std::collections::BTreeMap;

use super::ast::{AstUnit, ContractDecl, Param};

/// What an identifier names within a contract, innermost scope first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Symbol {
    StateVar { type_name: String },
    Function,
    Modifier,
    Parameter { type_name: String },
    /// Unresolved names map here rather than failing; real sources
    /// reference inherited and library members the subset cannot see.
    Unknown,
}

#[derive(Debug, Default)]
struct ContractSymbols {
    state_vars: BTreeMap<String, String>,
    functions: Vec<String>,
    modifiers: Vec<String>,
    /// Parameters per function or modifier name.
    params: BTreeMap<String, Vec<Param>>,
}

#[derive(Debug, Default)]
pub struct SymbolTable {
    contracts: BTreeMap<String, ContractSymbols>,
}

/// Builds the lookup table for every contract of the unit.
pub fn resolve_symbols(unit: &AstUnit) -> SymbolTable {
    let mut table = SymbolTable::default();
    for contract in &unit.contracts {
        table
            .contracts
            .insert(contract.name.clone(), contract_symbols(contract));
    }
    table
}

fn contract_symbols(contract: &ContractDecl) -> ContractSymbols {
    let mut syms = ContractSymbols::default();
    for v in &contract.state_vars {
        syms.state_vars.insert(v.name.clone(), v.type_name.clone());
    }
    for f in &contract.functions {
        syms.functions.push(f.name.clone());
        syms.params.insert(f.name.clone(), f.params.clone());
    }
    for m in &contract.modifiers {
        syms.modifiers.push(m.name.clone());
        syms.params.insert(m.name.clone(), m.params.clone());
    }
    syms
}

impl SymbolTable {
    /// Resolves `name` as seen from inside `within` (a function or
    /// modifier of `contract`), or from contract scope when `within` is
    /// None. Parameters shadow contract members.
    pub fn resolve(&self, contract: &str, within: Option<&str>, name: &str) -> Symbol {
        let Some(syms) = self.contracts.get(contract) else {
            return Symbol::Unknown;
        };
        if let Some(scope) = within {
            if let Some(params) = syms.params.get(scope) {
                if let Some(p) = params.iter().find(|p| p.name == name) {
                    return Symbol::Parameter { type_name: p.type_name.clone() };
                }
            }
        }
        if let Some(ty) = syms.state_vars.get(name) {
            return Symbol::StateVar { type_name: ty.clone() };
        }
        if syms.functions.iter().any(|f| f == name) {
            return Symbol::Function;
        }
        if syms.modifiers.iter().any(|m| m == name) {
            return Symbol::Modifier;
        }
        Symbol::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solidity::parser::parse_source;

    fn table_for(src: &str) -> SymbolTable {
        let (unit, diags) = parse_source(src);
        assert!(!diags.fatal);
        resolve_symbols(&unit)
    }

    #[test]
    fn state_variable_resolves_with_type() {
        let t = table_for(
            "contract T { address owner; function f() public { owner = msg.sender; } }",
        );
        assert_eq!(
            t.resolve("T", Some("f"), "owner"),
            Symbol::StateVar { type_name: "address".into() }
        );
        assert_eq!(
            t.resolve("T", None, "owner"),
            Symbol::StateVar { type_name: "address".into() }
        );
    }

    #[test]
    fn parameter_shadows_state_variable() {
        let t = table_for(
            "contract T { address owner; function f(address owner) public { } function g() public { } }",
        );
        assert_eq!(
            t.resolve("T", Some("f"), "owner"),
            Symbol::Parameter { type_name: "address".into() }
        );
        assert_eq!(
            t.resolve("T", Some("g"), "owner"),
            Symbol::StateVar { type_name: "address".into() }
        );
    }

    #[test]
    fn modifier_parameters_participate_in_shadowing() {
        let t = table_for(
            "contract T { address admin; modifier onlyBy(address who) { require(msg.sender == who); _; } }",
        );
        assert_eq!(
            t.resolve("T", Some("onlyBy"), "who"),
            Symbol::Parameter { type_name: "address".into() }
        );
        assert_eq!(t.resolve("T", Some("onlyBy"), "admin"),
            Symbol::StateVar { type_name: "address".into() });
    }

    #[test]
    fn functions_modifiers_and_unknowns() {
        let t = table_for(
            "contract T { modifier m() { _; } function f() public { } }",
        );
        assert_eq!(t.resolve("T", None, "f"), Symbol::Function);
        assert_eq!(t.resolve("T", None, "m"), Symbol::Modifier);
        assert_eq!(t.resolve("T", None, "nope"), Symbol::Unknown);
        assert_eq!(t.resolve("Missing", None, "f"), Symbol::Unknown);
    }
}
