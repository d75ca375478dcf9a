use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Expr {
    Ident(String),
    Number(String),
    Str(String),
    Member { base: Box<Expr>, member: String },
    Index { base: Box<Expr>, index: Box<Expr> },
    Call { callee: Box<Expr>, args: Vec<Expr> },
    Binary { op: String, lhs: Box<Expr>, rhs: Box<Expr> },
    Unary { op: String, operand: Box<Expr> },
    Tuple(Vec<Expr>),
    /// Expression text the subset grammar could not shape.
    Opaque(String),
}

impl Expr {
    /// True when `name` occurs as an identifier anywhere in the tree,
    /// including opaque text (substring match there).
    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Expr::Ident(s) => s == name,
            Expr::Number(_) | Expr::Str(_) => false,
            Expr::Member { base, .. } => base.mentions(name),
            Expr::Index { base, index } => base.mentions(name) || index.mentions(name),
            Expr::Call { callee, args } => {
                callee.mentions(name) || args.iter().any(|a| a.mentions(name))
            }
            Expr::Binary { lhs, rhs, .. } => lhs.mentions(name) || rhs.mentions(name),
            Expr::Unary { operand, .. } => operand.mentions(name),
            Expr::Tuple(items) => items.iter().any(|e| e.mentions(name)),
            Expr::Opaque(text) => text.contains(name),
        }
    }

    /// True for the exact expression `msg.sender`.
    pub fn is_msg_sender(&self) -> bool {
        matches!(self, Expr::Member { base, member }
            if member == "sender" && matches!(base.as_ref(), Expr::Ident(b) if b == "msg"))
    }
}

/// The ten statement shapes of the subset. Anything else is `Opaque`,
/// produced by error recovery with its raw text span preserved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Statement {
    Require { condition: Expr, line: usize },
    Assign { target: Expr, value: Expr, line: usize },
    CompoundAssign { target: Expr, op: String, value: Expr, line: usize },
    Call { callee: String, args: Vec<Expr>, line: usize },
    MemberCall { callee: Expr, method: String, args: Vec<Expr>, line: usize },
    If { condition: Expr, then_branch: Vec<Statement>, else_branch: Vec<Statement>, line: usize },
    Return { value: Option<Expr>, line: usize },
    Emit { event: String, args: Vec<Expr>, line: usize },
    SelfDestruct { args: Vec<Expr>, line: usize },
    Opaque { text: String, line: usize },
}

impl Statement {
    pub fn line(&self) -> usize {
        match self {
            Statement::Require { line, .. }
            | Statement::Assign { line, .. }
            | Statement::CompoundAssign { line, .. }
            | Statement::Call { line, .. }
            | Statement::MemberCall { line, .. }
            | Statement::If { line, .. }
            | Statement::Return { line, .. }
            | Statement::Emit { line, .. }
            | Statement::SelfDestruct { line, .. }
            | Statement::Opaque { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    External,
    Internal,
    Private,
    /// No visibility keyword present (treated as public for detection:
    /// pre-0.5 sources default to public).
    Default,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ContractKind {
    Contract,
    Interface,
    Library,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Param {
    pub name: String,
    pub type_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateVar {
    pub name: String,
    pub type_name: String,
    pub visibility: Visibility,
    pub line: usize,
}

impl StateVar {
    pub fn is_address(&self) -> bool {
        self.type_name == "address" || self.type_name.starts_with("address ")
    }

    /// Mapping whose key type is address, e.g. balances ledgers.
    pub fn is_mapping_from_address(&self) -> bool {
        self.type_name.starts_with("mapping(address")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModifierDecl {
    pub name: String,
    pub params: Vec<Param>,
    pub body: Vec<Statement>,
    pub line: usize,
    pub end_line: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionDecl {
    pub name: String,
    pub params: Vec<Param>,
    pub visibility: Visibility,
    /// Invoked modifier names from the header, in order. Visibility and
    /// mutability keywords are not included.
    pub modifiers: Vec<String>,
    /// None for bodyless declarations (interface members).
    pub body: Option<Vec<Statement>>,
    pub is_constructor: bool,
    pub line: usize,
    pub end_line: usize,
}

impl FunctionDecl {
    /// Callable from outside the contract under pre-0.5 defaults.
    pub fn is_externally_callable(&self) -> bool {
        matches!(
            self.visibility,
            Visibility::Public | Visibility::External | Visibility::Default
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventDecl {
    pub name: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractDecl {
    pub name: String,
    pub kind: ContractKind,
    pub inherits: Vec<String>,
    pub state_vars: Vec<StateVar>,
    pub modifiers: Vec<ModifierDecl>,
    pub functions: Vec<FunctionDecl>,
    pub events: Vec<EventDecl>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AstUnit {
    pub contracts: Vec<ContractDecl>,
}

/// Parse outcome bookkeeping. `recovered_regions` always equals
/// `skipped_spans.len()`; spans are inclusive (start, end) line ranges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostics {
    pub recovered_regions: usize,
    pub skipped_spans: Vec<(usize, usize)>,
    pub fatal: bool,
}
