use std::fmt;

use serde::{Deserialize, Serialize};

use crate::iface::{SimpleType, World};

/// Source position (1-based). Spans never take part in AST equality, so a
/// reparsed tree compares equal to the original.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    /// `(k)`
    Group(usize),
    /// `.k` or `@k`
    Field(World, usize),
    /// `.[e]` or `@[e]`
    Index(World, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub var: String,
    pub steps: Vec<Step>,
}

impl Path {
    pub fn var(name: impl Into<String>) -> Path {
        Path {
            var: name.into(),
            steps: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne => 3,
            BinOp::Add | BinOp::Sub => 4,
            BinOp::Mul | BinOp::Div | BinOp::Rem => 5,
        }
    }
}

/// Integer and boolean expressions share one tree; kinds are checked when evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Var(Path),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(Path::var(name))
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Unary(UnOp::Not, Box::new(e))
    }

    /// Variable names read by the expression.
    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) | Expr::Bool(_) => {}
            Expr::Var(p) => {
                out.push(p.var.clone());
                for s in &p.steps {
                    if let Step::Index(_, e) = s {
                        e.vars(out);
                    }
                }
            }
            Expr::Unary(_, e) => e.vars(out),
            Expr::Binary(_, a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stmt {
    Nil,
    New(String, SimpleType),
    Assign(Path, Expr),
    If(Expr, Vec<Stmt>, Vec<Stmt>),
    While(Expr, Vec<Stmt>),
}

impl Stmt {
    /// Names introduced by `new` anywhere in `body`.
    pub fn declared(body: &[Stmt], out: &mut Vec<(String, SimpleType)>) {
        for s in body {
            match s {
                Stmt::New(x, t) => out.push((x.clone(), t.clone())),
                Stmt::If(_, a, b) => {
                    Stmt::declared(a, out);
                    Stmt::declared(b, out);
                }
                Stmt::While(_, a) => Stmt::declared(a, out),
                Stmt::Nil | Stmt::Assign(..) => {}
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Module {
    pub name: String,
    pub listen: Vec<(String, SimpleType)>,
    pub read: Vec<(String, SimpleType)>,
    pub body: Vec<Stmt>,
    pub speak: Vec<String>,
    pub write: Vec<String>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Node {
    Nil,
    Module(String),
    If(Expr, Box<Program>, Box<Program>),
    /// vertical composition, `%`
    VSeq(Box<Program>, Box<Program>),
    /// horizontal composition, `#`
    HPar(Box<Program>, Box<Program>),
    /// diagonal composition, `$`
    DComp(Box<Program>, Box<Program>),
    WhileT(Expr, Box<Program>),
    WhileS(Expr, Box<Program>),
    WhileSt(Expr, Box<Program>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Program {
    pub node: Node,
    #[serde(skip)]
    pub span: Span,
}

impl Program {
    pub fn new(node: Node) -> Program {
        Program {
            node,
            span: Span::default(),
        }
    }

    pub fn nil() -> Program {
        Program::new(Node::Nil)
    }

    pub fn module(name: &str) -> Program {
        Program::new(Node::Module(name.to_string()))
    }

    pub fn hpar(a: Program, b: Program) -> Program {
        Program::new(Node::HPar(Box::new(a), Box::new(b)))
    }

    pub fn vseq(a: Program, b: Program) -> Program {
        Program::new(Node::VSeq(Box::new(a), Box::new(b)))
    }

    pub fn dcomp(a: Program, b: Program) -> Program {
        Program::new(Node::DComp(Box::new(a), Box::new(b)))
    }

    pub fn if_(guard: Expr, a: Program, b: Program) -> Program {
        Program::new(Node::If(guard, Box::new(a), Box::new(b)))
    }

    pub fn while_t(guard: Expr, body: Program) -> Program {
        Program::new(Node::WhileT(guard, Box::new(body)))
    }

    pub fn while_s(guard: Expr, body: Program) -> Program {
        Program::new(Node::WhileS(guard, Box::new(body)))
    }

    pub fn while_st(guard: Expr, body: Program) -> Program {
        Program::new(Node::WhileSt(guard, Box::new(body)))
    }

    /// Names of modules referenced, in order of first occurrence.
    pub fn module_refs(&self) -> Vec<&str> {
        fn go<'a>(p: &'a Program, out: &mut Vec<&'a str>) {
            match &p.node {
                Node::Nil => {}
                Node::Module(m) => {
                    if !out.contains(&m.as_str()) {
                        out.push(m);
                    }
                }
                Node::If(_, a, b) | Node::VSeq(a, b) | Node::HPar(a, b) | Node::DComp(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Node::WhileT(_, a) | Node::WhileS(_, a) | Node::WhileSt(_, a) => go(a, out),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }
}

/// A parsed `.agapia` file: module definitions followed by one main program.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceFile {
    pub modules: Vec<Module>,
    pub main: Program,
}

impl SourceFile {
    pub fn module(&self, name: &str) -> Option<&Module> {
        self.modules.iter().find(|m| m.name == name)
    }
}
