//! Random syntax trees for round-trip tests.

use agapia::iface::{SimpleType, World};
use agapia::lang::{BinOp, Expr, Module, Node, Path, Program, SourceFile, Span, Step, Stmt, UnOp};
use rand::seq::SliceRandom;
use rand::Rng as _;

use super::Rng;

const VARS: &[&str] = &["x", "y", "z", "tx", "k", "q1", "bus", "pat"];
const MODULES: &[&str] = &["A", "B", "C", "U1", "Wx"];
const OPS: &[BinOp] = &[
    BinOp::Add,
    BinOp::Sub,
    BinOp::Mul,
    BinOp::Div,
    BinOp::Rem,
    BinOp::Lt,
    BinOp::Le,
    BinOp::Gt,
    BinOp::Ge,
    BinOp::Eq,
    BinOp::Ne,
    BinOp::And,
    BinOp::Or,
];

fn world(rng: &mut Rng) -> World {
    if rng.gen() {
        World::Spatial
    } else {
        World::Temporal
    }
}

fn var(rng: &mut Rng) -> String {
    VARS.choose(rng).unwrap().to_string()
}

pub fn path(rng: &mut Rng, depth: u32) -> Path {
    let mut p = Path::var(&var(rng));
    for _ in 0..rng.gen_range(0..3) {
        p.steps.push(match rng.gen_range(0..3) {
            0 => Step::Group(rng.gen_range(1..4)),
            1 => Step::Field(world(rng), rng.gen_range(1..5)),
            _ => Step::Index(world(rng), Box::new(expr(rng, depth.saturating_sub(1)))),
        });
    }
    p
}

pub fn expr(rng: &mut Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_range(0..4) == 0 {
        return match rng.gen_range(0..4) {
            0 => Expr::Int(rng.gen_range(-50..1000)),
            1 => Expr::Bool(rng.gen()),
            2 => Expr::Var(Path::var(&var(rng))),
            _ => Expr::Var(path(rng, depth)),
        };
    }
    match rng.gen_range(0..5) {
        0 => Expr::Unary(
            if rng.gen() { UnOp::Neg } else { UnOp::Not },
            Box::new(expr(rng, depth - 1)),
        ),
        _ => Expr::Binary(
            *OPS.choose(rng).unwrap(),
            Box::new(expr(rng, depth - 1)),
            Box::new(expr(rng, depth - 1)),
        ),
    }
}

pub fn simple_type(rng: &mut Rng, depth: u32) -> SimpleType {
    if depth == 0 || rng.gen_range(0..3) == 0 {
        return [SimpleType::Sn, SimpleType::Sb, SimpleType::Tn, SimpleType::Tb]
            .choose(rng)
            .unwrap()
            .clone();
    }
    match rng.gen_range(0..3) {
        0 => SimpleType::Union(
            Box::new(simple_type(rng, depth - 1)),
            Box::new(simple_type(rng, depth - 1)),
        ),
        1 => SimpleType::Tuple((0..rng.gen_range(2..4)).map(|_| simple_type(rng, depth - 1)).collect()),
        _ => SimpleType::Star(Box::new(simple_type(rng, depth - 1))),
    }
}

pub fn stmts(rng: &mut Rng, depth: u32) -> Vec<Stmt> {
    (0..rng.gen_range(0..4)).map(|_| stmt(rng, depth)).collect()
}

pub fn stmt(rng: &mut Rng, depth: u32) -> Stmt {
    let pick = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..5) };
    match pick {
        0 => Stmt::Nil,
        1 => Stmt::New(var(rng), simple_type(rng, 2)),
        2 => Stmt::Assign(path(rng, 1), expr(rng, 3)),
        3 => Stmt::If(expr(rng, 2), stmts(rng, depth - 1), stmts(rng, depth - 1)),
        _ => Stmt::While(expr(rng, 2), stmts(rng, depth - 1)),
    }
}

fn decls(rng: &mut Rng, w: World) -> Vec<(String, SimpleType)> {
    let mut out: Vec<(String, SimpleType)> = Vec::new();
    for _ in 0..rng.gen_range(0..3) {
        let x = var(rng);
        if out.iter().all(|(y, _)| *y != x) {
            out.push((x, simple_type(rng, 1).in_world(w)));
        }
    }
    out
}

pub fn module(rng: &mut Rng, name: &str) -> Module {
    let names = |rng: &mut Rng| (0..rng.gen_range(0..3)).map(|_| var(rng)).collect();
    Module {
        name: name.to_string(),
        listen: decls(rng, World::Temporal),
        read: decls(rng, World::Spatial),
        body: stmts(rng, 2),
        speak: names(rng),
        write: names(rng),
        span: Span::default(),
    }
}

pub fn program(rng: &mut Rng, depth: u32) -> Program {
    if depth == 0 || rng.gen_range(0..4) == 0 {
        return if rng.gen_range(0..6) == 0 {
            Program::nil()
        } else {
            Program::module(MODULES.choose(rng).unwrap())
        };
    }
    let sub = |rng: &mut Rng| program(rng, depth - 1);
    let node = match rng.gen_range(0..7) {
        0 => Node::HPar(Box::new(sub(rng)), Box::new(sub(rng))),
        1 => Node::VSeq(Box::new(sub(rng)), Box::new(sub(rng))),
        2 => Node::DComp(Box::new(sub(rng)), Box::new(sub(rng))),
        3 => Node::If(expr(rng, 2), Box::new(sub(rng)), Box::new(sub(rng))),
        4 => Node::WhileT(expr(rng, 2), Box::new(sub(rng))),
        5 => Node::WhileS(expr(rng, 2), Box::new(sub(rng))),
        _ => Node::WhileSt(expr(rng, 2), Box::new(sub(rng))),
    };
    Program::new(node)
}

pub fn source_file(rng: &mut Rng) -> SourceFile {
    let n = rng.gen_range(0..3);
    SourceFile {
        modules: MODULES[..n].iter().map(|m| module(rng, m)).collect(),
        main: program(rng, 4),
    }
}
