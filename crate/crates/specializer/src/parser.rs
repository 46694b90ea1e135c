//! Text format reader.
//!
//! A program is an index declaration followed by fn and extern forms.
//! `;` starts a comment running to end of line. Parsing validates
//! structure: name legality, idx placement, match-idx totality, and
//! indexed-ness/arity of calls whose callee is declared in the same
//! program. Calls to unknown names are left for later passes to reject.

use crate::ast::{Attribute, BinOp, ExternDecl, IrExpr, IrFunction, IrProgram};
use crate::error::SpecError;

const KEYWORDS: [&str; 10] = [
    "fn",
    "extern",
    "index",
    "let",
    "call",
    "ifz",
    "match-idx",
    "specialize",
    "eliminate",
    "idx",
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Atom(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Vec<Token> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            _ if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' | ')' | '[' | ']' => {
                chars.next();
                col += 1;
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    _ => Tok::RBracket,
                };
                toks.push(Token { tok, line: tl, col: tc });
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | ';') {
                        break;
                    }
                    s.push(c);
                    chars.next();
                    col += 1;
                }
                toks.push(Token {
                    tok: Tok::Atom(s),
                    line: tl,
                    col: tc,
                });
            }
        }
    }
    toks
}

fn end_pos(src: &str) -> (usize, usize) {
    let line = 1 + src.chars().filter(|&c| c == '\n').count();
    let col = 1 + src.split('\n').next_back().unwrap_or("").chars().count();
    (line, col)
}

/// Call site noted during parsing, checked once all declarations are known.
struct CallSite {
    callee: String,
    indexed: bool,
    argc: usize,
    line: usize,
    col: usize,
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: (usize, usize),
    index: Vec<String>,
    calls: Vec<CallSite>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<&'a Token, SpecError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(SpecError::syntax(
                self.end.0,
                self.end.1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<&'a Token, SpecError> {
        let t = self.next(what)?;
        if t.tok == tok {
            Ok(t)
        } else {
            Err(SpecError::syntax(
                t.line,
                t.col,
                format!("expected {what}"),
            ))
        }
    }

    fn atom(&mut self, what: &str) -> Result<(&'a str, usize, usize), SpecError> {
        let t = self.next(what)?;
        match &t.tok {
            Tok::Atom(s) => Ok((s, t.line, t.col)),
            _ => Err(SpecError::syntax(
                t.line,
                t.col,
                format!("expected {what}"),
            )),
        }
    }

    fn name(&mut self, what: &str) -> Result<(String, usize, usize), SpecError> {
        let (s, line, col) = self.atom(what)?;
        check_name(s, line, col)?;
        Ok((s.to_string(), line, col))
    }

    fn index_decl(&mut self) -> Result<(), SpecError> {
        self.expect(Tok::LParen, "index declaration")?;
        let (head, line, col) = self.atom("index declaration")?;
        if head != "index" {
            return Err(SpecError::syntax(line, col, "program must start with an index declaration"));
        }
        loop {
            let t = self.next("index symbol or )")?;
            match &t.tok {
                Tok::RParen => break,
                Tok::Atom(s) => {
                    check_name(s, t.line, t.col)?;
                    if self.index.iter().any(|have| have == s) {
                        return Err(SpecError::DuplicateName(s.clone()));
                    }
                    self.index.push(s.clone());
                }
                _ => return Err(SpecError::syntax(t.line, t.col, "expected index symbol or )")),
            }
        }
        Ok(())
    }

    fn attribute(&mut self) -> Result<Option<(Attribute, usize, usize)>, SpecError> {
        match self.peek() {
            Some(t) if t.tok == Tok::LBracket => {
                self.pos += 1;
                let (s, line, col) = self.atom("attribute")?;
                let attr = match s {
                    "specialize" => Attribute::Specialize,
                    "eliminate" => Attribute::Eliminate,
                    _ => {
                        return Err(SpecError::syntax(
                            line,
                            col,
                            "expected specialize or eliminate",
                        ))
                    }
                };
                self.expect(Tok::RBracket, "]")?;
                Ok(Some((attr, line, col)))
            }
            _ => Ok(None),
        }
    }

    fn fn_form(&mut self) -> Result<IrFunction, SpecError> {
        let (name, _, _) = self.name("function name")?;
        let attr = self.attribute()?;
        self.expect(Tok::LParen, "parameter list")?;
        let mut indexed = false;
        let mut params: Vec<String> = Vec::new();
        let mut first = true;
        loop {
            let t = self.next("parameter or )")?;
            match &t.tok {
                Tok::RParen => break,
                Tok::Atom(s) if s == "idx" => {
                    if !first {
                        return Err(SpecError::syntax(
                            t.line,
                            t.col,
                            "idx must be the first parameter",
                        ));
                    }
                    indexed = true;
                }
                Tok::Atom(s) => {
                    check_name(s, t.line, t.col)?;
                    params.push(s.clone());
                }
                _ => return Err(SpecError::syntax(t.line, t.col, "expected parameter or )")),
            }
            first = false;
        }
        if let Some((Attribute::Eliminate, line, col)) = attr {
            if !indexed {
                return Err(SpecError::syntax(
                    line,
                    col,
                    "eliminate requires an indexed function",
                ));
            }
        }
        let body = self.expr(indexed)?;
        self.expect(Tok::RParen, ")")?;
        Ok(IrFunction {
            name,
            attr: attr.map_or(Attribute::Specialize, |(a, _, _)| a),
            indexed,
            params,
            body,
        })
    }

    fn extern_form(&mut self) -> Result<ExternDecl, SpecError> {
        let (name, _, _) = self.name("extern name")?;
        if let Some((Attribute::Eliminate, line, col)) = self.attribute()? {
            return Err(SpecError::syntax(
                line,
                col,
                "an extern cannot be eliminated",
            ));
        }
        let (s, line, col) = self.atom("extern arity")?;
        let arity: usize = s
            .parse()
            .map_err(|_| SpecError::syntax(line, col, "expected a non-negative arity"))?;
        self.expect(Tok::RParen, ")")?;
        Ok(ExternDecl { name, arity })
    }

    fn expr(&mut self, indexed: bool) -> Result<IrExpr, SpecError> {
        let t = self.next("expression")?;
        match &t.tok {
            Tok::Atom(s) if s == "idx" => Err(SpecError::syntax(
                t.line,
                t.col,
                "idx may only appear as the first argument of an indexed call",
            )),
            Tok::Atom(s) if looks_like_int(s) => match s.parse::<i64>() {
                Ok(v) => Ok(IrExpr::Int(v)),
                Err(_) => Err(SpecError::syntax(t.line, t.col, "integer literal out of range")),
            },
            Tok::Atom(s) => {
                check_name(s, t.line, t.col)?;
                Ok(IrExpr::Var(s.clone()))
            }
            Tok::LParen => {
                let (head, line, col) = self.atom("operator")?;
                let e = match head {
                    "let" => {
                        let (name, _, _) = self.name("let binder")?;
                        let value = Box::new(self.expr(indexed)?);
                        let body = Box::new(self.expr(indexed)?);
                        IrExpr::Let { name, value, body }
                    }
                    "+" | "-" | "*" => {
                        let op = match head {
                            "+" => BinOp::Add,
                            "-" => BinOp::Sub,
                            _ => BinOp::Mul,
                        };
                        let lhs = Box::new(self.expr(indexed)?);
                        let rhs = Box::new(self.expr(indexed)?);
                        IrExpr::Bin { op, lhs, rhs }
                    }
                    "ifz" => {
                        let cond = Box::new(self.expr(indexed)?);
                        let zero = Box::new(self.expr(indexed)?);
                        let nonzero = Box::new(self.expr(indexed)?);
                        IrExpr::Ifz { cond, zero, nonzero }
                    }
                    "call" => return self.call_expr(indexed),
                    "match-idx" => return self.match_expr(indexed, line, col),
                    _ => return Err(SpecError::syntax(line, col, format!("unknown form {head}"))),
                };
                self.expect(Tok::RParen, ")")?;
                Ok(e)
            }
            _ => Err(SpecError::syntax(t.line, t.col, "expected expression")),
        }
    }

    fn call_expr(&mut self, indexed: bool) -> Result<IrExpr, SpecError> {
        let (callee, cline, ccol) = self.name("callee")?;
        let pass_idx = matches!(self.peek(), Some(t) if t.tok == Tok::Atom("idx".into()));
        if pass_idx {
            if !indexed {
                let t = self.peek().unwrap();
                return Err(SpecError::syntax(
                    t.line,
                    t.col,
                    "idx is not in scope in a non-indexed function",
                ));
            }
            self.pos += 1;
        }
        let mut args = Vec::new();
        while !matches!(self.peek(), Some(t) if t.tok == Tok::RParen) {
            args.push(self.expr(indexed)?);
        }
        self.expect(Tok::RParen, ")")?;
        self.calls.push(CallSite {
            callee: callee.clone(),
            indexed: pass_idx,
            argc: args.len(),
            line: cline,
            col: ccol,
        });
        Ok(IrExpr::Call {
            callee,
            indexed: pass_idx,
            args,
        })
    }

    fn match_expr(&mut self, indexed: bool, line: usize, col: usize) -> Result<IrExpr, SpecError> {
        if !indexed {
            return Err(SpecError::syntax(
                line,
                col,
                "match-idx requires an indexed function",
            ));
        }
        let mut arms: Vec<(String, IrExpr)> = Vec::new();
        loop {
            let t = self.next("match arm or )")?;
            match &t.tok {
                Tok::RParen => break,
                Tok::LParen => {
                    let (sym, _, _) = self.name("index symbol")?;
                    if !self.index.contains(&sym) {
                        return Err(SpecError::UnknownIndexSymbol(sym));
                    }
                    if arms.iter().any(|(s, _)| *s == sym) {
                        return Err(SpecError::DuplicateName(sym));
                    }
                    let e = self.expr(indexed)?;
                    self.expect(Tok::RParen, ")")?;
                    arms.push((sym, e));
                }
                _ => return Err(SpecError::syntax(t.line, t.col, "expected match arm or )")),
            }
        }
        if arms.is_empty() {
            return Err(SpecError::syntax(line, col, "match-idx needs at least one arm"));
        }
        let missing: Vec<String> = self
            .index
            .iter()
            .filter(|s| !arms.iter().any(|(have, _)| have == *s))
            .cloned()
            .collect();
        if !missing.is_empty() {
            return Err(SpecError::NonTotalIndexMatch { missing });
        }
        // Normalize arms to index declaration order so round-trips are stable.
        let mut ordered = Vec::with_capacity(arms.len());
        for sym in &self.index {
            let at = arms.iter().position(|(s, _)| s == sym).unwrap();
            ordered.push(arms.remove(at));
        }
        Ok(IrExpr::MatchIdx { arms: ordered })
    }
}

fn looks_like_int(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
}

fn check_name(s: &str, line: usize, col: usize) -> Result<(), SpecError> {
    if KEYWORDS.contains(&s) {
        return Err(SpecError::syntax(line, col, format!("reserved word {s}")));
    }
    let mut chars = s.chars();
    let head_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    if !head_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(SpecError::syntax(line, col, format!("invalid name {s}")));
    }
    Ok(())
}

pub fn parse_ir(src: &str) -> Result<IrProgram, SpecError> {
    let toks = lex(src);
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: end_pos(src),
        index: Vec::new(),
        calls: Vec::new(),
    };
    p.index_decl()?;
    let mut program = IrProgram::default();
    while p.peek().is_some() {
        p.expect(Tok::LParen, "fn or extern form")?;
        let (head, line, col) = p.atom("fn or extern")?;
        match head {
            "fn" => {
                let f = p.fn_form()?;
                program.functions.push(f);
            }
            "extern" => {
                let e = p.extern_form()?;
                program.externs.push(e);
            }
            _ => return Err(SpecError::syntax(line, col, "expected fn or extern")),
        }
    }
    program.index = std::mem::take(&mut p.index);
    let calls = std::mem::take(&mut p.calls);
    validate(&program, &calls)?;
    Ok(program)
}

/// Whole-program checks once every declaration is known.
fn validate(program: &IrProgram, calls: &[CallSite]) -> Result<(), SpecError> {
    let mut seen: Vec<&str> = Vec::new();
    for name in program.top_level_names() {
        if seen.contains(&name) {
            return Err(SpecError::DuplicateName(name.to_string()));
        }
        seen.push(name);
    }
    for f in &program.functions {
        for (i, param) in f.params.iter().enumerate() {
            if f.params[..i].contains(param) || seen.contains(&param.as_str()) {
                return Err(SpecError::DuplicateName(param.clone()));
            }
        }
    }
    for c in calls {
        let Some(callee) = program.resolve(&c.callee) else {
            continue;
        };
        if callee.indexed() != c.indexed {
            let msg = if c.indexed {
                format!("{} is not indexed, drop the idx argument", c.callee)
            } else {
                format!("{} is indexed, pass idx as the first argument", c.callee)
            };
            return Err(SpecError::syntax(c.line, c.col, msg));
        }
        if callee.arity() != c.argc {
            return Err(SpecError::syntax(
                c.line,
                c.col,
                format!(
                    "{} takes {} value arguments, got {}",
                    c.callee,
                    callee.arity(),
                    c.argc
                ),
            ));
        }
    }
    Ok(())
}
