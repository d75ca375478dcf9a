use super::ast::{
    AstUnit, ContractDecl, ContractKind, EventDecl, Expr, FunctionDecl, ModifierDecl, Param,
    ParseDiagnostics, Statement, StateVar, Visibility,
};
use super::lexer::{tokenize, SourceToken, TokenKind};

/// Parses source text. Opaque statements produced by recovery keep
/// their exact raw span.
pub fn parse_source(source: &str) -> (AstUnit, ParseDiagnostics) {
    let tokens = tokenize(source);
    parse_with_source(&tokens, Some(source))
}

/// Parses a pre-tokenized stream. Without the original text, opaque
/// spans are reconstructed by joining token texts with single spaces.
pub fn parse(tokens: &[SourceToken]) -> (AstUnit, ParseDiagnostics) {
    parse_with_source(tokens, None)
}

fn parse_with_source(tokens: &[SourceToken], source: Option<&str>) -> (AstUnit, ParseDiagnostics) {
    let toks: Vec<SourceToken> = tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Comment)
        .cloned()
        .collect();
    let mut p = Parser {
        toks,
        pos: 0,
        source: source.map(str::to_string),
        diags: ParseDiagnostics::default(),
    };
    let unit = p.parse_unit();
    p.diags.fatal = unit.contracts.is_empty();
    p.diags.recovered_regions = p.diags.skipped_spans.len();
    (unit, p.diags)
}

struct Fail;

const BINARY_LEVELS: &[&[&str]] = &[
    &["||"],
    &["&&"],
    &["|"],
    &["^"],
    &["&"],
    &["==", "!="],
    &["<", ">", "<=", ">="],
    &["<<", ">>"],
    &["+", "-"],
    &["*", "/", "%"],
    &["**"],
];

const TYPE_WORDS: &[&str] = &[
    "address", "bool", "string", "bytes", "bytes32", "uint", "uint256", "uint8",
];

fn is_builtin_type_word(text: &str) -> bool {
    if TYPE_WORDS.contains(&text) {
        return true;
    }
    for prefix in ["uint", "int", "bytes"] {
        if let Some(rest) = text.strip_prefix(prefix) {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                return true;
            }
        }
    }
    false
}

struct Parser {
    toks: Vec<SourceToken>,
    pos: usize,
    source: Option<String>,
    diags: ParseDiagnostics,
}

impl Parser {
    fn eof(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn text(&self) -> &str {
        self.toks.get(self.pos).map_or("", |t| t.text.as_str())
    }

    fn text_ahead(&self, n: usize) -> &str {
        self.toks.get(self.pos + n).map_or("", |t| t.text.as_str())
    }

    fn kind(&self) -> Option<TokenKind> {
        self.toks.get(self.pos).map(|t| t.kind)
    }

    fn at(&self, s: &str) -> bool {
        self.text() == s
    }

    fn line_here(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.line)
    }

    fn prev_line(&self) -> usize {
        if self.pos == 0 {
            1
        } else {
            self.toks[self.pos - 1].line
        }
    }

    fn bump(&mut self) -> String {
        let t = self.text().to_string();
        if !self.eof() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.at(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), Fail> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(Fail)
        }
    }

    /// Identifier or keyword token text; punctuation and literals fail.
    fn expect_word(&mut self) -> Result<String, Fail> {
        match self.kind() {
            Some(TokenKind::Identifier) | Some(TokenKind::Keyword) => Ok(self.bump()),
            _ => Err(Fail),
        }
    }

    fn expect_identifier(&mut self) -> Result<String, Fail> {
        match self.kind() {
            Some(TokenKind::Identifier) => Ok(self.bump()),
            _ => Err(Fail),
        }
    }

    fn span_text(&self, start_pos: usize, end_pos: usize) -> String {
        if start_pos >= end_pos || start_pos >= self.toks.len() {
            return String::new();
        }
        let end_pos = end_pos.min(self.toks.len());
        let last = &self.toks[end_pos - 1];
        match &self.source {
            Some(src) => src[self.toks[start_pos].offset..last.offset + last.text.len()].to_string(),
            None => self.toks[start_pos..end_pos]
                .iter()
                .map(|t| t.text.as_str())
                .collect::<Vec<_>>()
                .join(" "),
        }
    }

    /// Consumes a balanced bracket group. The current token must be the
    /// opener; nesting tracks only that bracket pair.
    fn skip_balanced(&mut self, open: &str, close: &str) {
        debug_assert!(self.at(open));
        let mut depth = 0usize;
        while !self.eof() {
            if self.at(open) {
                depth += 1;
            } else if self.at(close) {
                depth -= 1;
                if depth == 0 {
                    self.pos += 1;
                    return;
                }
            }
            self.pos += 1;
        }
    }

    fn skip_past_semi(&mut self) {
        while !self.eof() {
            if self.bump() == ";" {
                return;
            }
        }
    }

    /// Error-recovery skip: consumes up to and including a `;` at the
    /// current nesting depth, or a `}` closing a brace opened during the
    /// skip. A `}` belonging to the enclosing block is left in place.
    fn skip_statement_span(&mut self) {
        let mut stack: Vec<char> = Vec::new();
        while !self.eof() {
            let t = self.text();
            match t {
                "{" | "(" | "[" => stack.push(t.chars().next().unwrap()),
                "}" | ")" | "]" => {
                    if stack.is_empty() {
                        if t == "}" {
                            return; // enclosing block's closer
                        }
                    } else {
                        stack.pop();
                        if stack.is_empty() && t == "}" {
                            self.pos += 1;
                            return; // brace'd construct fully skipped
                        }
                    }
                }
                ";" if stack.is_empty() => {
                    self.pos += 1;
                    return;
                }
                _ => {}
            }
            self.pos += 1;
        }
    }

    fn recover_statement(&mut self, start_pos: usize, start_line: usize) -> Statement {
        self.pos = start_pos;
        self.skip_statement_span();
        let end_line = self.prev_line().max(start_line);
        self.diags.skipped_spans.push((start_line, end_line));
        Statement::Opaque {
            text: self.span_text(start_pos, self.pos),
            line: start_line,
        }
    }

    fn recover_member(&mut self, start_pos: usize, start_line: usize) {
        self.pos = start_pos;
        if self.pos < self.toks.len() && !self.at("}") {
            // Guarantee progress even when the first token is a closer
            // of some other kind.
            if self.at(")") || self.at("]") {
                self.pos += 1;
            }
            self.skip_statement_span();
        }
        let end_line = self.prev_line().max(start_line);
        self.diags.skipped_spans.push((start_line, end_line));
    }

    fn parse_unit(&mut self) -> AstUnit {
        let mut contracts = Vec::new();
        while !self.eof() {
            if self.at("pragma") || self.at("import") {
                // Skipped by design, not counted as recovery.
                self.skip_past_semi();
            } else if self.at("contract") || self.at("interface") || self.at("library") {
                if let Some(c) = self.parse_contract() {
                    contracts.push(c);
                }
            } else {
                let start_line = self.line_here();
                let mut end_line = start_line;
                while !self.eof()
                    && !["pragma", "import", "contract", "interface", "library"]
                        .contains(&self.text())
                {
                    end_line = self.toks[self.pos].line;
                    self.pos += 1;
                }
                self.diags.skipped_spans.push((start_line, end_line));
            }
        }
        AstUnit { contracts }
    }

    fn parse_contract(&mut self) -> Option<ContractDecl> {
        let line = self.line_here();
        let kind = match self.bump().as_str() {
            "interface" => ContractKind::Interface,
            "library" => ContractKind::Library,
            _ => ContractKind::Contract,
        };
        let name = match self.expect_word() {
            Ok(n) => n,
            Err(Fail) => {
                let start_line = self.line_here();
                while !self.eof() && !self.at("{") {
                    self.pos += 1;
                }
                if self.at("{") {
                    self.skip_balanced("{", "}");
                }
                let end_line = self.prev_line().max(start_line);
                self.diags.skipped_spans.push((start_line, end_line));
                return None;
            }
        };
        let mut inherits = Vec::new();
        if self.eat("is") {
            while let Ok(base) = self.expect_word() {
                inherits.push(base);
                if self.at("(") {
                    self.skip_balanced("(", ")");
                }
                if !self.eat(",") {
                    break;
                }
            }
        }
        if self.expect("{").is_err() {
            self.diags.skipped_spans.push((line, self.line_here()));
            self.skip_past_semi();
            return None;
        }

        let mut decl = ContractDecl {
            name,
            kind,
            inherits,
            state_vars: Vec::new(),
            modifiers: Vec::new(),
            functions: Vec::new(),
            events: Vec::new(),
            line,
        };

        while !self.eof() && !self.at("}") {
            let start = self.pos;
            let start_line = self.line_here();
            let head = self.text().to_string();
            let ok = match head.as_str() {
                "function" => self.parse_function(false).map(|f| decl.functions.push(f)),
                "constructor" => self.parse_function(true).map(|f| decl.functions.push(f)),
                "modifier" => self.parse_modifier().map(|m| decl.modifiers.push(m)),
                "event" => self.parse_event().map(|e| decl.events.push(e)),
                "using" | "struct" | "enum" => Err(Fail),
                _ => self.parse_state_var().map(|v| decl.state_vars.push(v)),
            };
            if ok.is_err() {
                self.recover_member(start, start_line);
            }
        }
        self.eat("}");

        for f in &mut decl.functions {
            if f.name == decl.name {
                f.is_constructor = true;
            }
        }
        Some(decl)
    }

    fn parse_state_var(&mut self) -> Result<StateVar, Fail> {
        let line = self.line_here();
        let type_name = self.parse_type()?;
        let mut visibility = Visibility::Default;
        loop {
            match self.text() {
                "public" => visibility = Visibility::Public,
                "private" => visibility = Visibility::Private,
                "internal" => visibility = Visibility::Internal,
                "constant" | "immutable" => {}
                _ => break,
            }
            self.pos += 1;
        }
        let name = self.expect_identifier()?;
        if self.eat("=") {
            self.parse_expr()?;
        }
        self.expect(";")?;
        Ok(StateVar { name, type_name, visibility, line })
    }

    fn parse_type(&mut self) -> Result<String, Fail> {
        if self.at("mapping") {
            self.pos += 1;
            self.expect("(")?;
            let key = self.parse_type()?;
            self.expect("=>")?;
            let value = self.parse_type()?;
            self.expect(")")?;
            return Ok(format!("mapping({key} => {value})"));
        }
        match self.kind() {
            Some(TokenKind::Identifier) | Some(TokenKind::Keyword) => {}
            _ => return Err(Fail),
        }
        let mut name = self.bump();
        loop {
            if self.at(".") && matches!(
                self.toks.get(self.pos + 1).map(|t| t.kind),
                Some(TokenKind::Identifier) | Some(TokenKind::Keyword)
            ) {
                self.pos += 1;
                name.push('.');
                name.push_str(&self.bump());
            } else if self.at("[") {
                self.skip_balanced("[", "]");
                name.push_str("[]");
            } else if self.at("payable") && name == "address" {
                self.pos += 1;
                name.push_str(" payable");
            } else {
                break;
            }
        }
        Ok(name)
    }

    fn parse_params(&mut self) -> Result<Vec<Param>, Fail> {
        let mut params = Vec::new();
        if self.eat(")") {
            return Ok(params);
        }
        loop {
            let type_name = self.parse_type()?;
            while matches!(self.text(), "memory" | "storage" | "calldata" | "indexed") {
                self.pos += 1;
            }
            let name = match self.kind() {
                Some(TokenKind::Identifier) => self.bump(),
                _ => String::new(),
            };
            params.push(Param { name, type_name });
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(params)
    }

    fn parse_function(&mut self, constructor_keyword: bool) -> Result<FunctionDecl, Fail> {
        let line = self.line_here();
        self.pos += 1; // function | constructor
        let name = if constructor_keyword {
            "constructor".to_string()
        } else if self.at("(") {
            String::new() // fallback function
        } else {
            self.expect_word()?
        };
        self.expect("(")?;
        let params = self.parse_params()?;

        let mut visibility = Visibility::Default;
        let mut modifiers = Vec::new();
        while !self.eof() && !self.at("{") && !self.at(";") {
            let head = self.text().to_string();
            match head.as_str() {
                "public" => {
                    visibility = Visibility::Public;
                    self.pos += 1;
                }
                "external" => {
                    visibility = Visibility::External;
                    self.pos += 1;
                }
                "internal" => {
                    visibility = Visibility::Internal;
                    self.pos += 1;
                }
                "private" => {
                    visibility = Visibility::Private;
                    self.pos += 1;
                }
                "view" | "pure" | "constant" | "payable" | "virtual" => {
                    self.pos += 1;
                }
                "returns" | "override" => {
                    self.pos += 1;
                    if self.at("(") {
                        self.skip_balanced("(", ")");
                    }
                }
                _ => match self.kind() {
                    Some(TokenKind::Identifier) => {
                        modifiers.push(self.bump());
                        if self.at("(") {
                            self.skip_balanced("(", ")");
                        }
                    }
                    _ => {
                        self.pos += 1;
                    }
                },
            }
        }

        let body = if self.eat(";") {
            None
        } else if self.eat("{") {
            Some(self.parse_block_body())
        } else {
            None
        };
        Ok(FunctionDecl {
            name,
            params,
            visibility,
            modifiers,
            body,
            is_constructor: constructor_keyword,
            line,
            end_line: self.prev_line(),
        })
    }

    fn parse_modifier(&mut self) -> Result<ModifierDecl, Fail> {
        let line = self.line_here();
        self.pos += 1; // modifier
        let name = self.expect_word()?;
        let params = if self.eat("(") {
            self.parse_params()?
        } else {
            Vec::new()
        };
        while !self.eof() && !self.at("{") && !self.at(";") {
            self.pos += 1;
        }
        self.expect("{")?;
        let body = self.parse_block_body();
        Ok(ModifierDecl { name, params, body, line, end_line: self.prev_line() })
    }

    fn parse_event(&mut self) -> Result<EventDecl, Fail> {
        let line = self.line_here();
        self.pos += 1; // event
        let name = self.expect_word()?;
        if self.at("(") {
            self.skip_balanced("(", ")");
        }
        self.eat("anonymous");
        self.expect(";")?;
        Ok(EventDecl { name, line })
    }

    /// Body of a `{ ... }` block whose opener is already consumed.
    fn parse_block_body(&mut self) -> Vec<Statement> {
        let mut stmts = Vec::new();
        while !self.eof() && !self.at("}") {
            let start = self.pos;
            let line = self.line_here();
            match self.parse_statement() {
                Ok(mut s) => stmts.append(&mut s),
                Err(Fail) => stmts.push(self.recover_statement(start, line)),
            }
        }
        self.eat("}");
        stmts
    }

    fn parse_branch(&mut self) -> Result<Vec<Statement>, Fail> {
        if self.eat("{") {
            Ok(self.parse_block_body())
        } else {
            self.parse_statement()
        }
    }

    fn parse_statement(&mut self) -> Result<Vec<Statement>, Fail> {
        let line = self.line_here();
        let head = self.text().to_string();
        match head.as_str() {
            "{" => {
                self.pos += 1;
                Ok(self.parse_block_body())
            }
            "if" => {
                self.pos += 1;
                self.expect("(")?;
                let condition = self.parse_expr()?;
                self.expect(")")?;
                let then_branch = self.parse_branch()?;
                let else_branch = if self.eat("else") {
                    self.parse_branch()?
                } else {
                    Vec::new()
                };
                Ok(vec![Statement::If { condition, then_branch, else_branch, line }])
            }
            "return" => {
                self.pos += 1;
                let value = if self.at(";") {
                    None
                } else {
                    Some(self.parse_expr()?)
                };
                self.expect(";")?;
                Ok(vec![Statement::Return { value, line }])
            }
            "emit" => {
                self.pos += 1;
                let event = self.expect_word()?;
                let args = if self.at("(") {
                    self.parse_call_args()?
                } else {
                    Vec::new()
                };
                self.expect(";")?;
                Ok(vec![Statement::Emit { event, args, line }])
            }
            "require" | "assert" => {
                self.pos += 1;
                self.expect("(")?;
                let mut args = vec![self.parse_expr()?];
                while self.eat(",") {
                    args.push(self.parse_expr()?);
                }
                self.expect(")")?;
                self.expect(";")?;
                Ok(vec![Statement::Require { condition: args.swap_remove(0), line }])
            }
            "selfdestruct" | "suicide" => {
                self.pos += 1;
                let args = if self.at("(") {
                    self.parse_call_args()?
                } else {
                    return Err(Fail);
                };
                self.expect(";")?;
                Ok(vec![Statement::SelfDestruct { args, line }])
            }
            "throw" => {
                self.pos += 1;
                self.expect(";")?;
                Ok(vec![Statement::Call { callee: "throw".into(), args: Vec::new(), line }])
            }
            "assembly" => {
                let start = self.pos;
                self.pos += 1;
                if self.kind() == Some(TokenKind::StringLiteral) {
                    self.pos += 1;
                }
                if !self.at("{") {
                    return Err(Fail);
                }
                self.skip_balanced("{", "}");
                let end_line = self.prev_line();
                self.diags.skipped_spans.push((line, end_line));
                Ok(vec![Statement::Opaque { text: self.span_text(start, self.pos), line }])
            }
            "_" if self.text_ahead(1) == ";" => {
                // Modifier placeholder: opaque, but not a recovery.
                self.pos += 2;
                Ok(vec![Statement::Opaque { text: "_".into(), line }])
            }
            "delete" | "for" | "while" | "do" => Err(Fail),
            _ => self.parse_declaration_or_expr_statement(line),
        }
    }

    fn parse_declaration_or_expr_statement(&mut self, line: usize) -> Result<Vec<Statement>, Fail> {
        let start = self.pos;
        // `uint256 x = ...` by type keyword, `Other o = ...` by the
        // identifier-identifier adjacency that expressions never have.
        let user_type_decl = self.kind() == Some(TokenKind::Identifier)
            && self.toks.get(self.pos + 1).map(|t| t.kind) == Some(TokenKind::Identifier);
        let looks_like_declaration =
            is_builtin_type_word(self.text()) || self.at("mapping") || user_type_decl;

        if looks_like_declaration {
            let type_name = self.parse_type()?;
            while matches!(self.text(), "memory" | "storage" | "calldata") {
                self.pos += 1;
            }
            let name = self.expect_identifier()?;
            if self.eat("=") {
                let value = self.parse_expr()?;
                self.expect(";")?;
                return Ok(vec![Statement::Assign {
                    target: Expr::Ident(name),
                    value,
                    line,
                }]);
            }
            self.expect(";")?;
            // Uninitialized local: parsed fine, nothing to detect on.
            return Ok(vec![Statement::Opaque {
                text: format!("{type_name} {name}"),
                line,
            }]);
        }

        let target = self.parse_expr()?;
        if self.eat("=") {
            let value = self.parse_expr()?;
            self.expect(";")?;
            return Ok(vec![Statement::Assign { target, value, line }]);
        }
        if self.at("+=") || self.at("-=") {
            let op = self.bump();
            let value = self.parse_expr()?;
            self.expect(";")?;
            return Ok(vec![Statement::CompoundAssign { target, op, value, line }]);
        }
        if self.eat(";") {
            let end = self.pos;
            return Ok(vec![match target {
                Expr::Call { callee, args } => match *callee {
                    Expr::Ident(name) => Statement::Call { callee: name, args, line },
                    Expr::Member { base, member } => Statement::MemberCall {
                        callee: *base,
                        method: member,
                        args,
                        line,
                    },
                    _ => Statement::Opaque { text: self.span_text(start, end), line },
                },
                _ => Statement::Opaque { text: self.span_text(start, end), line },
            }]);
        }
        Err(Fail)
    }

    fn parse_call_args(&mut self) -> Result<Vec<Expr>, Fail> {
        self.expect("(")?;
        let mut args = Vec::new();
        if self.eat(")") {
            return Ok(args);
        }
        loop {
            args.push(self.parse_expr()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn parse_expr(&mut self) -> Result<Expr, Fail> {
        self.parse_binary(0)
    }

    fn parse_binary(&mut self, level: usize) -> Result<Expr, Fail> {
        if level >= BINARY_LEVELS.len() {
            return self.parse_unary();
        }
        let mut lhs = self.parse_binary(level + 1)?;
        while BINARY_LEVELS[level].contains(&self.text())
            && self.kind() == Some(TokenKind::Punctuation)
        {
            let op = self.bump();
            let rhs = self.parse_binary(level + 1)?;
            lhs = Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expr, Fail> {
        if matches!(self.text(), "!" | "-" | "+" | "~")
            && self.kind() == Some(TokenKind::Punctuation)
        {
            let op = self.bump();
            let operand = self.parse_unary()?;
            return Ok(Expr::Unary { op, operand: Box::new(operand) });
        }
        if self.at("new") {
            self.pos += 1;
            let operand = self.parse_unary()?;
            return Ok(Expr::Unary { op: "new".into(), operand: Box::new(operand) });
        }
        self.parse_postfix()
    }

    fn parse_postfix(&mut self) -> Result<Expr, Fail> {
        let mut expr = self.parse_primary()?;
        loop {
            if self.at(".") {
                self.pos += 1;
                let member = self.expect_word()?;
                expr = Expr::Member { base: Box::new(expr), member };
            } else if self.at("[") {
                self.pos += 1;
                let index = self.parse_expr()?;
                self.expect("]")?;
                expr = Expr::Index { base: Box::new(expr), index: Box::new(index) };
            } else if self.at("(") {
                let args = self.parse_call_args()?;
                expr = Expr::Call { callee: Box::new(expr), args };
            } else {
                break;
            }
        }
        Ok(expr)
    }

    fn parse_primary(&mut self) -> Result<Expr, Fail> {
        match self.kind() {
            Some(TokenKind::NumberLiteral) => Ok(Expr::Number(self.bump())),
            Some(TokenKind::StringLiteral) => Ok(Expr::Str(self.bump())),
            Some(TokenKind::Identifier) => Ok(Expr::Ident(self.bump())),
            Some(TokenKind::Keyword) => {
                // Type names and literal keywords may appear in
                // expressions (casts like address(0), payable(x)).
                if is_builtin_type_word(self.text())
                    || matches!(self.text(), "payable" | "true" | "false" | "this")
                {
                    Ok(Expr::Ident(self.bump()))
                } else {
                    Err(Fail)
                }
            }
            Some(TokenKind::Punctuation) if self.at("(") => {
                self.pos += 1;
                if self.eat(")") {
                    return Ok(Expr::Tuple(Vec::new()));
                }
                let first = self.parse_expr()?;
                if self.at(",") {
                    let mut items = vec![first];
                    while self.eat(",") {
                        items.push(self.parse_expr()?);
                    }
                    self.expect(")")?;
                    return Ok(Expr::Tuple(items));
                }
                self.expect(")")?;
                Ok(first)
            }
            _ => Err(Fail),
        }
    }
}
