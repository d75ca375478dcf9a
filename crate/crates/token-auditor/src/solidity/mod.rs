//! Tolerant frontend for a pragmatic Solidity subset: a total
//! tokenizer, a recursive-descent parser with statement-level error
//! recovery, and per-contract symbol resolution. Rich enough to
//! represent guard idioms, balance arithmetic, selfdestruct calls, and
//! call forwarding; everything else degrades to opaque statements.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod symbols;

pub use ast::{
    AstUnit, ContractDecl, ContractKind, EventDecl, Expr, FunctionDecl, ModifierDecl, Param,
    ParseDiagnostics, Statement, StateVar, Visibility,
};
pub use lexer::{tokenize, SourceToken, TokenKind};
pub use parser::{parse, parse_source};
pub use symbols::{resolve_symbols, Symbol, SymbolTable};
