use std::fmt::Write;

use crate::iface::World;

use super::ast::*;

const ATOM: u8 = 6;

fn expr_prec(e: &Expr) -> u8 {
    match e {
        Expr::Binary(op, ..) => op.precedence(),
        _ => ATOM,
    }
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    if expr_prec(e) < min {
        out.push('(');
        write_expr(out, e, 0);
        out.push(')');
        return;
    }
    match e {
        Expr::Int(n) => write!(out, "{n}").unwrap(),
        Expr::Bool(b) => write!(out, "{b}").unwrap(),
        Expr::Var(p) => write_path(out, p),
        Expr::Unary(UnOp::Neg, a) => {
            out.push_str("-(");
            write_expr(out, a, 0);
            out.push(')');
        }
        Expr::Unary(UnOp::Not, a) => {
            out.push('!');
            write_expr(out, a, ATOM);
        }
        Expr::Binary(op, a, b) => {
            let q = op.precedence();
            let left_min = if q == 3 { q + 1 } else { q };
            write_expr(out, a, left_min);
            write!(out, " {} ", op.symbol()).unwrap();
            write_expr(out, b, q + 1);
        }
    }
}

fn write_path(out: &mut String, p: &Path) {
    out.push_str(&p.var);
    for s in &p.steps {
        match s {
            Step::Group(k) => write!(out, "({k})").unwrap(),
            Step::Field(w, k) => write!(out, "{}{k}", sigil(*w)).unwrap(),
            Step::Index(w, e) => {
                write!(out, "{}[", sigil(*w)).unwrap();
                write_expr(out, e, 0);
                out.push(']');
            }
        }
    }
}

fn sigil(w: World) -> char {
    match w {
        World::Spatial => '.',
        World::Temporal => '@',
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

fn write_stmts(out: &mut String, body: &[Stmt], indent: usize) {
    for s in body {
        out.push_str(&"  ".repeat(indent));
        write_stmt(out, s, indent);
        out.push('\n');
    }
}

fn write_block(out: &mut String, body: &[Stmt], indent: usize) {
    if body.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{\n");
    write_stmts(out, body, indent + 1);
    out.push_str(&"  ".repeat(indent));
    out.push('}');
}

fn write_stmt(out: &mut String, s: &Stmt, indent: usize) {
    match s {
        Stmt::Nil => out.push_str("nil;"),
        Stmt::New(x, t) => write!(out, "new {x}:{t};").unwrap(),
        Stmt::Assign(p, e) => {
            write_path(out, p);
            out.push_str(" = ");
            write_expr(out, e, 0);
            out.push(';');
        }
        Stmt::If(c, a, b) => {
            out.push_str("if (");
            write_expr(out, c, 0);
            out.push_str(") ");
            write_block(out, a, indent);
            if !b.is_empty() {
                out.push_str(" else ");
                write_block(out, b, indent);
            }
        }
        Stmt::While(c, a) => {
            out.push_str("while (");
            write_expr(out, c, 0);
            out.push_str(") ");
            write_block(out, a, indent);
        }
    }
}

fn decls(vars: &[(String, crate::iface::SimpleType)]) -> String {
    if vars.is_empty() {
        return "nil".into();
    }
    vars.iter()
        .map(|(x, t)| format!("{x}:{t}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn names(vars: &[String]) -> String {
    if vars.is_empty() {
        "nil".into()
    } else {
        vars.join(", ")
    }
}

pub fn print_module(m: &Module) -> String {
    let mut out = format!(
        "module {}{{listen {};}}{{read {};}}\n  {{",
        m.name,
        decls(&m.listen),
        decls(&m.read)
    );
    if !m.body.is_empty() {
        out.push('\n');
        write_stmts(&mut out, &m.body, 2);
        out.push_str("  ");
    }
    write!(
        out,
        "}}{{speak {};}}{{write {};}}\n",
        names(&m.speak),
        names(&m.write)
    )
    .unwrap();
    out
}

fn prog_prec(p: &Program) -> u8 {
    match p.node {
        Node::DComp(..) => 1,
        Node::VSeq(..) => 2,
        Node::HPar(..) => 3,
        _ => 4,
    }
}

fn write_program(out: &mut String, p: &Program, min: u8) {
    if prog_prec(p) < min {
        out.push('(');
        write_program(out, p, 0);
        out.push(')');
        return;
    }
    // operands built with a different operator are always parenthesized
    let binary = |out: &mut String, op: &str, q: u8, a: &Program, b: &Program| {
        let left = if prog_prec(a) == q { q } else { 4 };
        write_program(out, a, left);
        write!(out, " {op} ").unwrap();
        write_program(out, b, 4);
    };
    let looped = |out: &mut String, kw: &str, c: &Expr, body: &Program| {
        write!(out, "{kw}({}){{", print_expr(c)).unwrap();
        write_program(out, body, 0);
        out.push('}');
    };
    match &p.node {
        Node::Nil => out.push_str("nil"),
        Node::Module(m) => out.push_str(m),
        Node::DComp(a, b) => binary(out, "$", 1, a, b),
        Node::VSeq(a, b) => binary(out, "%", 2, a, b),
        Node::HPar(a, b) => binary(out, "#", 3, a, b),
        Node::If(c, a, b) => {
            write!(out, "if ({}) {{", print_expr(c)).unwrap();
            write_program(out, a, 0);
            out.push_str("} else {");
            write_program(out, b, 0);
            out.push('}');
        }
        Node::WhileT(c, b) => looped(out, "while_t", c, b),
        Node::WhileS(c, b) => looped(out, "while_s", c, b),
        Node::WhileSt(c, b) => looped(out, "while_st", c, b),
    }
}

pub fn print_program(p: &Program) -> String {
    let mut s = String::new();
    write_program(&mut s, p, 0);
    s
}

pub fn print_file(f: &SourceFile) -> String {
    let mut out = String::new();
    for m in &f.modules {
        out.push_str(&print_module(m));
    }
    if !f.modules.is_empty() {
        out.push('\n');
    }
    out.push_str(&print_program(&f.main));
    out.push('\n');
    out
}
