use crate::iface::{SimpleType, SimpleValue, World};

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::SyntaxError;

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    pub fn new(toks: Vec<Token>) -> Parser {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(SyntaxError {
            span: self.span(),
            message: format!("expected {expected}, found {}", self.peek()),
        })
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Kw(q) if *q == k)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if self.is_kw(k) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.error(&format!("`{p}`"))
        }
    }

    fn expect_kw(&mut self, k: &str) -> PResult<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.error(&format!("`{k}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("identifier"),
        }
    }

    pub fn expect_eof(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    pub fn file(&mut self) -> PResult<SourceFile> {
        let mut modules: Vec<Module> = Vec::new();
        while self.is_kw("module") {
            let m = self.module()?;
            if modules.iter().any(|n| n.name == m.name) {
                return Err(SyntaxError {
                    span: m.span,
                    message: format!("module {} defined twice", m.name),
                });
            }
            modules.push(m);
        }
        // a file with no main program runs `nil`
        let main = if *self.peek() == Tok::Eof {
            Program::nil()
        } else {
            self.program()?
        };
        self.expect_eof()?;
        Ok(SourceFile { modules, main })
    }

    pub fn module(&mut self) -> PResult<Module> {
        let span = self.span();
        self.expect_kw("module")?;
        let name = self.ident()?;
        self.expect_punct("{")?;
        self.expect_kw("listen")?;
        let listen = self.decls()?;
        self.expect_punct("}")?;
        self.expect_punct("{")?;
        self.expect_kw("read")?;
        let read = self.decls()?;
        self.expect_punct("}")?;
        self.expect_punct("{")?;
        let body = self.stmts()?;
        self.expect_punct("}")?;
        self.expect_punct("{")?;
        self.expect_kw("speak")?;
        let speak = self.names()?;
        self.expect_punct("}")?;
        self.expect_punct("{")?;
        self.expect_kw("write")?;
        let write = self.names()?;
        self.expect_punct("}")?;
        Ok(Module {
            name,
            listen,
            read,
            body,
            speak,
            write,
            span,
        })
    }

    /// `nil;` or `x:T, y:T;` with the final `;` optional.
    fn decls(&mut self) -> PResult<Vec<(String, SimpleType)>> {
        let mut out = Vec::new();
        if !self.eat_kw("nil") {
            loop {
                let x = self.ident()?;
                self.expect_punct(":")?;
                out.push((x, self.simple_type()?));
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.eat_punct(";");
        Ok(out)
    }

    fn names(&mut self) -> PResult<Vec<String>> {
        let mut out = Vec::new();
        if !self.eat_kw("nil") {
            loop {
                out.push(self.ident()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.eat_punct(";");
        Ok(out)
    }

    /// `A | B` over tuples, atoms and postfix stars.
    pub fn simple_type(&mut self) -> PResult<SimpleType> {
        let mut t = self.type_atom()?;
        while self.eat_punct("|") {
            t = SimpleType::union(t, self.type_atom()?);
        }
        Ok(t)
    }

    fn type_atom(&mut self) -> PResult<SimpleType> {
        let mut t = match self.peek() {
            Tok::Kw("nil") => SimpleType::Nil,
            Tok::Kw("sn") => SimpleType::Sn,
            Tok::Kw("sb") => SimpleType::Sb,
            Tok::Kw("tn") => SimpleType::Tn,
            Tok::Kw("tb") => SimpleType::Tb,
            Tok::Punct("(") => {
                self.bump();
                let first = self.simple_type()?;
                let mut items = vec![first];
                while self.eat_punct(",") {
                    items.push(self.simple_type()?);
                }
                self.expect_punct(")")?;
                let t = if items.len() == 1 {
                    items.pop().unwrap()
                } else {
                    SimpleType::Tuple(items)
                };
                return Ok(self.stars(t));
            }
            _ => return self.error("a type"),
        };
        self.bump();
        t = self.stars(t);
        Ok(t)
    }

    fn stars(&mut self, mut t: SimpleType) -> SimpleType {
        while self.eat_punct("*") {
            t = SimpleType::star(t);
        }
        t
    }

    fn stmts(&mut self) -> PResult<Vec<Stmt>> {
        let mut out = Vec::new();
        while !self.is_punct("}") {
            if self.eat_punct(";") {
                continue;
            }
            out.push(self.stmt()?);
        }
        Ok(out)
    }

    fn block_or_stmt(&mut self) -> PResult<Vec<Stmt>> {
        if self.eat_punct("{") {
            let body = self.stmts()?;
            self.expect_punct("}")?;
            Ok(body)
        } else {
            Ok(vec![self.stmt()?])
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        match self.peek().clone() {
            Tok::Kw("nil") => {
                self.bump();
                Ok(Stmt::Nil)
            }
            Tok::Ident(s) if s == "null" => {
                self.bump();
                Ok(Stmt::Nil)
            }
            Tok::Kw("new") => {
                self.bump();
                let x = self.ident()?;
                self.expect_punct(":")?;
                Ok(Stmt::New(x, self.simple_type()?))
            }
            Tok::Ident(x) if *self.peek_at(1) == Tok::Punct(":") => {
                self.bump();
                self.bump();
                Ok(Stmt::New(x, self.simple_type()?))
            }
            Tok::Ident(_) => {
                let path = self.path()?;
                if self.bump() != Tok::Assign {
                    self.pos -= 1;
                    return self.error("`=`");
                }
                Ok(Stmt::Assign(path, self.expr()?))
            }
            Tok::Kw("if") => {
                self.bump();
                self.expect_punct("(")?;
                let c = self.expr()?;
                self.expect_punct(")")?;
                let then = self.block_or_stmt()?;
                // `if (..) x = 1; else ...`
                let save = self.pos;
                while self.eat_punct(";") {}
                let otherwise = if self.eat_kw("else") {
                    self.block_or_stmt()?
                } else {
                    self.pos = save;
                    Vec::new()
                };
                Ok(Stmt::If(c, then, otherwise))
            }
            Tok::Kw("while") => {
                self.bump();
                self.expect_punct("(")?;
                let c = self.expr()?;
                self.expect_punct(")")?;
                Ok(Stmt::While(c, self.block_or_stmt()?))
            }
            _ => self.error("a statement"),
        }
    }

    fn path(&mut self) -> PResult<Path> {
        let var = self.ident()?;
        let mut steps = Vec::new();
        loop {
            if self.is_punct("(") && matches!(self.peek_at(1), Tok::Int(_)) && *self.peek_at(2) == Tok::Punct(")") {
                self.bump();
                let k = self.index_literal()?;
                self.bump();
                steps.push(Step::Group(k));
                continue;
            }
            let world = if self.is_punct(".") {
                World::Spatial
            } else if self.is_punct("@") {
                World::Temporal
            } else {
                break;
            };
            self.bump();
            if self.eat_punct("[") {
                let e = self.expr()?;
                self.expect_punct("]")?;
                steps.push(Step::Index(world, Box::new(e)));
            } else {
                let k = self.index_literal()?;
                steps.push(Step::Field(world, k));
            }
        }
        Ok(Path { var, steps })
    }

    fn index_literal(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                usize::try_from(n).or_else(|_| self.error("a small index"))
            }
            _ => self.error("an index"),
        }
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinOp> {
        Some(match self.peek() {
            Tok::Punct("||") => BinOp::Or,
            Tok::Punct("&&") => BinOp::And,
            Tok::Punct("<") => BinOp::Lt,
            Tok::Punct("<=") => BinOp::Le,
            Tok::Punct(">") => BinOp::Gt,
            Tok::Punct(">=") => BinOp::Ge,
            Tok::Punct("==") => BinOp::Eq,
            Tok::Punct("!=") => BinOp::Ne,
            Tok::Punct("+") => BinOp::Add,
            Tok::Punct("-") => BinOp::Sub,
            Tok::Punct("*") => BinOp::Mul,
            Tok::Punct("/") => BinOp::Div,
            Tok::Punct("%") => BinOp::Rem,
            _ => return None,
        })
    }

    fn binary(&mut self, min: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min {
                break;
            }
            self.bump();
            let rhs = self.binary(prec + 1)?;
            lhs = Expr::bin(op, lhs, rhs);
            // comparisons do not chain
            if prec == 3 && self.binary_op().is_some_and(|o| o.precedence() == 3) {
                return self.error("an operator other than a comparison");
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat_punct("!") {
            return Ok(Expr::Unary(UnOp::Not, Box::new(self.unary()?)));
        }
        if self.is_punct("-") {
            self.bump();
            if let Tok::Int(n) = *self.peek() {
                self.bump();
                return negate(n).map(Expr::Int).or_else(|m| self.error(&m));
            }
            return Ok(Expr::Unary(UnOp::Neg, Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                i64::try_from(n)
                    .map(Expr::Int)
                    .or_else(|_| self.error("an integer that fits in 64 bits"))
            }
            Tok::Kw("true") => {
                self.bump();
                Ok(Expr::Bool(true))
            }
            Tok::Kw("false") => {
                self.bump();
                Ok(Expr::Bool(false))
            }
            Tok::Ident(_) => Ok(Expr::Var(self.path()?)),
            Tok::Punct("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            _ => self.error("an expression"),
        }
    }

    pub fn program(&mut self) -> PResult<Program> {
        let mut p = self.vseq()?;
        while self.is_punct("$") {
            let span = self.span();
            self.bump();
            p = Program {
                node: Node::DComp(Box::new(p), Box::new(self.vseq()?)),
                span,
            };
        }
        Ok(p)
    }

    fn vseq(&mut self) -> PResult<Program> {
        let mut p = self.hpar()?;
        while self.is_punct("%") {
            let span = self.span();
            self.bump();
            p = Program {
                node: Node::VSeq(Box::new(p), Box::new(self.hpar()?)),
                span,
            };
        }
        Ok(p)
    }

    fn hpar(&mut self) -> PResult<Program> {
        let mut p = self.program_atom()?;
        while self.is_punct("#") {
            let span = self.span();
            self.bump();
            p = Program {
                node: Node::HPar(Box::new(p), Box::new(self.program_atom()?)),
                span,
            };
        }
        Ok(p)
    }

    fn braced_program(&mut self) -> PResult<Program> {
        self.expect_punct("{")?;
        let p = self.program()?;
        self.expect_punct("}")?;
        Ok(p)
    }

    fn guard(&mut self) -> PResult<Expr> {
        self.expect_punct("(")?;
        let c = self.expr()?;
        self.expect_punct(")")?;
        Ok(c)
    }

    fn program_atom(&mut self) -> PResult<Program> {
        let span = self.span();
        let node = match self.peek().clone() {
            Tok::Kw("nil") => {
                self.bump();
                Node::Nil
            }
            Tok::Ident(m) => {
                self.bump();
                Node::Module(m)
            }
            Tok::Punct("(") => {
                self.bump();
                let p = self.program()?;
                self.expect_punct(")")?;
                return Ok(p);
            }
            Tok::Kw("if") => {
                self.bump();
                let c = self.guard()?;
                let a = self.braced_program()?;
                self.expect_kw("else")?;
                let b = self.braced_program()?;
                Node::If(c, Box::new(a), Box::new(b))
            }
            Tok::Kw(k @ ("while_t" | "while_s" | "while_st")) => {
                self.bump();
                let c = self.guard()?;
                let body = Box::new(self.braced_program()?);
                match k {
                    "while_t" => Node::WhileT(c, body),
                    "while_s" => Node::WhileS(c, body),
                    _ => Node::WhileSt(c, body),
                }
            }
            _ => return self.error("a program"),
        };
        Ok(Program { node, span })
    }

    /// `v1; v2; ...` with `nil` for the empty interface.
    pub fn value_list(&mut self) -> PResult<Vec<SimpleValue>> {
        let mut out = vec![self.value()?];
        while self.eat_punct(";") {
            out.push(self.value()?);
        }
        Ok(out.into_iter().filter(|v| *v != SimpleValue::Nil).collect())
    }

    fn value(&mut self) -> PResult<SimpleValue> {
        match self.peek().clone() {
            Tok::Kw("nil") => {
                self.bump();
                Ok(SimpleValue::Nil)
            }
            Tok::Kw("true") => {
                self.bump();
                Ok(SimpleValue::Bool(true))
            }
            Tok::Kw("false") => {
                self.bump();
                Ok(SimpleValue::Bool(false))
            }
            Tok::Int(n) => {
                self.bump();
                i64::try_from(n)
                    .map(SimpleValue::Int)
                    .or_else(|_| self.error("an integer that fits in 64 bits"))
            }
            Tok::Punct("-") => {
                self.bump();
                match *self.peek() {
                    Tok::Int(n) => {
                        self.bump();
                        negate(n).map(SimpleValue::Int).or_else(|m| self.error(&m))
                    }
                    _ => self.error("an integer"),
                }
            }
            Tok::Punct(open @ ("(" | "[")) => {
                self.bump();
                let close = if open == "(" { ")" } else { "]" };
                let mut items = Vec::new();
                if !self.is_punct(close) {
                    items.push(self.value()?);
                    while self.eat_punct(",") {
                        items.push(self.value()?);
                    }
                }
                self.expect_punct(close)?;
                if open == "[" {
                    Ok(SimpleValue::Star(items))
                } else if items.len() == 1 {
                    Ok(items.pop().unwrap())
                } else {
                    Ok(SimpleValue::Tuple(items))
                }
            }
            _ => self.error("a value"),
        }
    }
}

fn negate(n: u64) -> Result<i64, String> {
    if n <= i64::MAX as u64 + 1 {
        Ok((-(n as i128)) as i64)
    } else {
        Err("an integer that fits in 64 bits".into())
    }
}

/// Parses a whole `.agapia` file.
pub fn parse_file(src: &str) -> Result<SourceFile, SyntaxError> {
    Parser::new(tokenize(src)?).file()
}

/// Parses a program expression on its own.
pub fn parse_program(src: &str) -> Result<Program, SyntaxError> {
    let mut p = Parser::new(tokenize(src)?);
    let prog = p.program()?;
    p.expect_eof()?;
    Ok(prog)
}

pub fn parse_module(src: &str) -> Result<Module, SyntaxError> {
    let mut p = Parser::new(tokenize(src)?);
    let m = p.module()?;
    p.expect_eof()?;
    Ok(m)
}

pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser::new(tokenize(src)?);
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_type(src: &str) -> Result<SimpleType, SyntaxError> {
    let mut p = Parser::new(tokenize(src)?);
    let t = p.simple_type()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parses a border value such as `6`, `nil`, `1; (2, true); [3, 4]`.
pub fn parse_values(src: &str) -> Result<Vec<SimpleValue>, SyntaxError> {
    let mut p = Parser::new(tokenize(src)?);
    let v = p.value_list()?;
    p.expect_eof()?;
    Ok(v)
}
