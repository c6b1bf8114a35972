use std::collections::BTreeSet;

use serde::Serialize;

use crate::iface::{matches, BorderTypes, InterfaceType, SimpleType, World};
use crate::scenario::Seam;

use super::ast::*;
use super::{TypeError, TypeErrorKind};

/// Variable names behind each group of a border, one inner list per group.
/// A nil group has no names; a group with several names carries a tuple.
pub type NameGroups = Vec<Vec<String>>;

/// Where interface variables sit on the four borders of a program.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Layout {
    pub w: NameGroups,
    pub n: NameGroups,
    pub e: NameGroups,
    pub s: NameGroups,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Typed {
    pub ty: BorderTypes,
    pub layout: Layout,
}

fn names(groups: &NameGroups) -> BTreeSet<&str> {
    groups.iter().flatten().map(String::as_str).collect()
}

fn cat(a: &NameGroups, b: &NameGroups) -> NameGroups {
    a.iter().chain(b).cloned().collect()
}

/// Names sitting at the same position in both layouts.
fn common(a: &NameGroups, b: &NameGroups) -> NameGroups {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            if x.len() == y.len() {
                x.iter()
                    .zip(y)
                    .map(|(p, q)| if p == q { p.clone() } else { "_".to_string() })
                    .collect()
            } else {
                vec!["_".to_string(); x.len()]
            }
        })
        .collect()
}

fn group_type(world: World, ts: Vec<SimpleType>) -> InterfaceType {
    match ts.len() {
        0 => InterfaceType::simple(world, SimpleType::Nil),
        1 => InterfaceType::simple(world, ts.into_iter().next().unwrap()),
        _ => InterfaceType::simple(world, SimpleType::Tuple(ts)),
    }
}

/// Static type of a module: listen/read types on west/north, speak/write
/// variables moved to the outgoing world on east/south.
pub fn module_type(m: &Module) -> Result<Typed, TypeError> {
    let err = |message: String| TypeError {
        span: m.span,
        kind: TypeErrorKind::Module {
            module: m.name.clone(),
            message,
        },
    };
    let mut vars: Vec<(String, SimpleType)> = Vec::new();
    for (list, world, what) in [(&m.listen, World::Temporal, "listen"), (&m.read, World::Spatial, "read")] {
        for (x, t) in list {
            match t.world() {
                Ok(None) => {}
                Ok(Some(w)) if w == world => {}
                Ok(Some(_)) => return Err(err(format!("{what} variable {x}:{t} must be {world}"))),
                Err(e) => return Err(err(format!("{x}:{t}: {e}"))),
            }
            if vars.iter().any(|(y, _)| y == x) {
                return Err(err(format!("variable {x} declared twice in the interface")));
            }
            vars.push((x.clone(), t.clone()));
        }
    }
    let mut locals = Vec::new();
    Stmt::declared(&m.body, &mut locals);
    for (x, t) in locals {
        if let Err(e) = t.world() {
            return Err(err(format!("{x}:{t}: {e}")));
        }
        match vars.iter().find(|(y, _)| *y == x) {
            Some((_, u)) if *u != t => {
                return Err(err(format!("variable {x} redeclared as {t} (was {u})")))
            }
            Some(_) => {}
            None => vars.push((x, t)),
        }
    }
    let lookup = |x: &str| vars.iter().find(|(y, _)| y == x).map(|(_, t)| t.clone());
    check_body(&m.body, &|x| lookup(x).is_some()).map_err(|x| err(format!("variable {x} is not declared")))?;
    let outgoing = |list: &[String], world: World| -> Result<Vec<SimpleType>, TypeError> {
        list.iter()
            .map(|x| {
                lookup(x)
                    .map(|t| t.in_world(world))
                    .ok_or_else(|| err(format!("variable {x} is not declared")))
            })
            .collect()
    };
    let ty = BorderTypes {
        w: group_type(World::Temporal, m.listen.iter().map(|(_, t)| t.clone()).collect()),
        n: group_type(World::Spatial, m.read.iter().map(|(_, t)| t.clone()).collect()),
        e: group_type(World::Temporal, outgoing(&m.speak, World::Temporal)?),
        s: group_type(World::Spatial, outgoing(&m.write, World::Spatial)?),
    };
    let layout = Layout {
        w: vec![m.listen.iter().map(|(x, _)| x.clone()).collect()],
        n: vec![m.read.iter().map(|(x, _)| x.clone()).collect()],
        e: vec![m.speak.clone()],
        s: vec![m.write.clone()],
    };
    Ok(Typed { ty, layout })
}

/// First undeclared variable used in `body`.
fn check_body(body: &[Stmt], declared: &dyn Fn(&str) -> bool) -> Result<(), String> {
    let check_expr = |e: &Expr| {
        let mut vs = Vec::new();
        e.vars(&mut vs);
        match vs.into_iter().find(|v| !declared(v)) {
            Some(v) => Err(v),
            None => Ok(()),
        }
    };
    for s in body {
        match s {
            Stmt::Nil | Stmt::New(..) => {}
            Stmt::Assign(p, e) => {
                check_expr(&Expr::Var(p.clone()))?;
                check_expr(e)?;
            }
            Stmt::If(c, a, b) => {
                check_expr(c)?;
                check_body(a, declared)?;
                check_body(b, declared)?;
            }
            Stmt::While(c, a) => {
                check_expr(c)?;
                check_body(a, declared)?;
            }
        }
    }
    Ok(())
}

fn seam(
    span: Span,
    combinator: &'static str,
    seam: Seam,
    left: &InterfaceType,
    right: &InterfaceType,
) -> Result<(), TypeError> {
    if matches(left, right) {
        Ok(())
    } else {
        Err(TypeError {
            span,
            kind: TypeErrorKind::Seam {
                combinator,
                seam,
                left: left.to_string(),
                right: right.to_string(),
            },
        })
    }
}

fn scope(span: Span, construct: &'static str, guard: &Expr, allowed: BTreeSet<&str>) -> Result<(), TypeError> {
    let mut used = Vec::new();
    guard.vars(&mut used);
    match used.into_iter().find(|v| !allowed.contains(v.as_str())) {
        None => Ok(()),
        Some(var) => Err(TypeError {
            span,
            kind: TypeErrorKind::Scope {
                construct,
                var,
                allowed: allowed.into_iter().map(str::to_string).collect(),
            },
        }),
    }
}

/// Static type of a program against the module table of `file`.
pub fn typecheck_program(p: &Program, file: &SourceFile) -> Result<Typed, TypeError> {
    let sub = |q: &Program| typecheck_program(q, file);
    let span = p.span;
    Ok(match &p.node {
        Node::Nil => Typed {
            ty: BorderTypes::nil(),
            layout: Layout::default(),
        },
        Node::Module(name) => match file.module(name) {
            Some(m) => module_type(m)?,
            None => {
                return Err(TypeError {
                    span,
                    kind: TypeErrorKind::UnknownModule(name.clone()),
                })
            }
        },
        Node::HPar(a, b) => {
            let (a, b) = (sub(a)?, sub(b)?);
            seam(span, "#", Seam::Temporal, &a.ty.e, &b.ty.w)?;
            Typed {
                ty: BorderTypes {
                    w: a.ty.w,
                    n: a.ty.n.seq(&b.ty.n),
                    e: b.ty.e,
                    s: a.ty.s.seq(&b.ty.s),
                },
                layout: Layout {
                    w: a.layout.w,
                    n: cat(&a.layout.n, &b.layout.n),
                    e: b.layout.e,
                    s: cat(&a.layout.s, &b.layout.s),
                },
            }
        }
        Node::VSeq(a, b) => {
            let (a, b) = (sub(a)?, sub(b)?);
            seam(span, "%", Seam::Spatial, &a.ty.s, &b.ty.n)?;
            Typed {
                ty: BorderTypes {
                    w: a.ty.w.seq(&b.ty.w),
                    n: a.ty.n,
                    e: a.ty.e.seq(&b.ty.e),
                    s: b.ty.s,
                },
                layout: Layout {
                    w: cat(&a.layout.w, &b.layout.w),
                    n: a.layout.n,
                    e: cat(&a.layout.e, &b.layout.e),
                    s: b.layout.s,
                },
            }
        }
        Node::DComp(a, b) => {
            let (a, b) = (sub(a)?, sub(b)?);
            seam(span, "$", Seam::Temporal, &a.ty.e, &b.ty.w)?;
            seam(span, "$", Seam::Spatial, &a.ty.s, &b.ty.n)?;
            Typed {
                ty: BorderTypes {
                    w: a.ty.w,
                    n: a.ty.n,
                    e: b.ty.e,
                    s: b.ty.s,
                },
                layout: Layout {
                    w: a.layout.w,
                    n: a.layout.n,
                    e: b.layout.e,
                    s: b.layout.s,
                },
            }
        }
        Node::If(c, a, b) => {
            let (a, b) = (sub(a)?, sub(b)?);
            let layout = Layout {
                w: common(&a.layout.w, &b.layout.w),
                n: common(&a.layout.n, &b.layout.n),
                e: common(&a.layout.e, &b.layout.e),
                s: common(&a.layout.s, &b.layout.s),
            };
            let mut allowed = names(&layout.w);
            allowed.extend(names(&layout.n));
            allowed.remove("_");
            scope(span, "if", c, allowed)?;
            Typed {
                ty: BorderTypes {
                    w: a.ty.w.union(&b.ty.w),
                    n: a.ty.n.union(&b.ty.n),
                    e: a.ty.e.union(&b.ty.e),
                    s: a.ty.s.union(&b.ty.s),
                },
                layout,
            }
        }
        Node::WhileT(c, body) => {
            let b = sub(body)?;
            seam(span, "while_t", Seam::Spatial, &b.ty.s, &b.ty.n)?;
            let mut allowed: BTreeSet<&str> =
                names(&b.layout.n).intersection(&names(&b.layout.s)).copied().collect();
            allowed.extend(names(&b.layout.w));
            scope(span, "while_t", c, allowed)?;
            let ns = b.ty.n.union(&b.ty.s);
            Typed {
                ty: BorderTypes {
                    w: b.ty.w.star(),
                    n: ns.clone(),
                    e: b.ty.e.star(),
                    s: ns,
                },
                layout: b.layout,
            }
        }
        Node::WhileS(c, body) => {
            let b = sub(body)?;
            seam(span, "while_s", Seam::Temporal, &b.ty.e, &b.ty.w)?;
            let mut allowed: BTreeSet<&str> =
                names(&b.layout.w).intersection(&names(&b.layout.e)).copied().collect();
            allowed.extend(names(&b.layout.n));
            scope(span, "while_s", c, allowed)?;
            let we = b.ty.w.union(&b.ty.e);
            Typed {
                ty: BorderTypes {
                    w: we.clone(),
                    n: b.ty.n.star(),
                    e: we,
                    s: b.ty.s.star(),
                },
                layout: b.layout,
            }
        }
        Node::WhileSt(c, body) => {
            let b = sub(body)?;
            seam(span, "while_st", Seam::Temporal, &b.ty.e, &b.ty.w)?;
            seam(span, "while_st", Seam::Spatial, &b.ty.s, &b.ty.n)?;
            let mut allowed: BTreeSet<&str> =
                names(&b.layout.w).intersection(&names(&b.layout.e)).copied().collect();
            allowed.extend(names(&b.layout.n).intersection(&names(&b.layout.s)).copied());
            scope(span, "while_st", c, allowed)?;
            let we = b.ty.w.union(&b.ty.e);
            let ns = b.ty.n.union(&b.ty.s);
            Typed {
                ty: BorderTypes {
                    w: we.clone(),
                    n: ns.clone(),
                    e: we,
                    s: ns,
                },
                layout: b.layout,
            }
        }
    })
}

/// Type of the main program of `file`. Every module is checked, used or not.
pub fn typecheck(file: &SourceFile) -> Result<BorderTypes, TypeError> {
    for m in &file.modules {
        module_type(m)?;
    }
    Ok(typecheck_program(&file.main, file)?.ty)
}
