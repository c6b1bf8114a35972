//! Independent reference computations.

use std::collections::BTreeMap;

use agapia::htm::{best_match, classify_node, HtmNode, HtmTree, Output, PASS_THROUGH};
use agapia::lang::{BinOp, Expr, Stmt, UnOp};
use agapia::scenario::{hcomp, vcomp, Cell, CellKind, Items, Scenario};
use agapia::SimpleValue;

/// n minus the sum of its proper divisors, by trial division.
pub fn perfect_z(n: i64) -> i64 {
    n - (1..n).filter(|d| n % d == 0).sum::<i64>()
}

// ---------------------------------------------------------------------------
// Small-step W semantics over plain int/bool variables.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Val {
    I(i64),
    B(bool),
}

pub type Store = BTreeMap<String, Val>;

fn ev(e: &Expr, s: &Store) -> Option<Val> {
    use Val::*;
    Some(match e {
        Expr::Int(n) => I(*n),
        Expr::Bool(b) => B(*b),
        Expr::Var(p) => {
            assert!(p.steps.is_empty());
            *s.get(&p.var)?
        }
        Expr::Unary(UnOp::Neg, a) => match ev(a, s)? {
            I(n) => I(0i64.checked_sub(n)?),
            B(_) => return None,
        },
        Expr::Unary(UnOp::Not, a) => match ev(a, s)? {
            B(b) => B(!b),
            I(_) => return None,
        },
        Expr::Binary(BinOp::And, a, b) => match ev(a, s)? {
            B(false) => B(false),
            B(true) => match ev(b, s)? {
                B(v) => B(v),
                I(_) => return None,
            },
            I(_) => return None,
        },
        Expr::Binary(BinOp::Or, a, b) => match ev(a, s)? {
            B(true) => B(true),
            B(false) => match ev(b, s)? {
                B(v) => B(v),
                I(_) => return None,
            },
            I(_) => return None,
        },
        Expr::Binary(BinOp::Eq, a, b) => B(ev(a, s)? == ev(b, s)?),
        Expr::Binary(BinOp::Ne, a, b) => B(ev(a, s)? != ev(b, s)?),
        Expr::Binary(op, a, b) => {
            let (I(x), I(y)) = (ev(a, s)?, ev(b, s)?) else {
                return None;
            };
            match op {
                BinOp::Add => I(x.checked_add(y)?),
                BinOp::Sub => I(x.checked_sub(y)?),
                BinOp::Mul => I(x.checked_mul(y)?),
                // truncating division, remainder takes the dividend's sign
                BinOp::Div => I(x.checked_div(y)?),
                BinOp::Rem => I(x.checked_rem(y)?),
                BinOp::Lt => B(x < y),
                BinOp::Le => B(x <= y),
                BinOp::Gt => B(x > y),
                BinOp::Ge => B(x >= y),
                _ => unreachable!(),
            }
        }
    })
}

#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Done(Store),
    Stuck,
    OutOfFuel,
}

/// Runs `body` one statement at a time with an explicit continuation stack.
/// Assignments keep the variable's kind; only declared variables exist.
pub fn small_step(body: &[Stmt], mut s: Store, fuel: u64) -> Outcome {
    let mut stack: Vec<&Stmt> = body.iter().rev().collect();
    let mut steps = 0;
    while let Some(st) = stack.pop() {
        steps += 1;
        if steps > fuel {
            return Outcome::OutOfFuel;
        }
        match st {
            Stmt::Nil => {}
            Stmt::New(..) => unreachable!("no declarations in generated bodies"),
            Stmt::Assign(p, e) => {
                let Some(v) = ev(e, &s) else { return Outcome::Stuck };
                match (s.get(&p.var), v) {
                    (Some(Val::I(_)), Val::I(_)) | (Some(Val::B(_)), Val::B(_)) => {
                        s.insert(p.var.clone(), v);
                    }
                    _ => return Outcome::Stuck,
                }
            }
            Stmt::If(c, a, b) => match ev(c, &s) {
                Some(Val::B(true)) => stack.extend(a.iter().rev()),
                Some(Val::B(false)) => stack.extend(b.iter().rev()),
                _ => return Outcome::Stuck,
            },
            Stmt::While(c, a) => match ev(c, &s) {
                Some(Val::B(true)) => {
                    stack.push(st);
                    stack.extend(a.iter().rev());
                }
                Some(Val::B(false)) => {}
                _ => return Outcome::Stuck,
            },
        }
    }
    Outcome::Done(s)
}

// ---------------------------------------------------------------------------
// Diagonal composition rebuilt from blocks with horizontal/vertical composition.

fn wiring(kind: CellKind, label: &str, w: Items, n: Items, e: Items, s: Items) -> Cell {
    Cell {
        label: label.into(),
        kind,
        west: w,
        north: n,
        east: e,
        south: s,
    }
}

fn empties(rows: usize, cols: usize) -> Scenario {
    Scenario::from_rows(
        (0..rows)
            .map(|_| (0..cols).map(|_| wiring(CellKind::Empty, "Λ", vec![], vec![], vec![], vec![])).collect())
            .collect(),
    )
    .unwrap()
}

/// `(f1 # R # Λ) % (S # Id # R) % (Λ # S # f2)` with accumulating recorders
/// and speakers, composed through the public builders.
pub fn dcomp_expansion(f1: &Scenario, f2: &Scenario) -> Scenario {
    let e1 = f1.east_groups();
    let s1 = f1.south_groups();
    let temporal: Items = e1.concat();
    let spatial: Items = s1.concat();

    let mut acc = Vec::new();
    let rec = Scenario::from_rows(
        e1.iter()
            .map(|g| {
                let above = acc.clone();
                acc.extend(g.iter().cloned());
                vec![wiring(CellKind::Recorder, "R", g.clone(), above, vec![], acc.clone())]
            })
            .collect(),
    )
    .unwrap();
    let top = hcomp(&hcomp(f1, &rec).unwrap(), &empties(f1.rows(), f2.cols())).unwrap();

    let mut spoken = Vec::new();
    let speak_row = Scenario::from_rows(vec![s1
        .iter()
        .map(|g| {
            let before = spoken.clone();
            spoken.extend(g.iter().cloned());
            wiring(CellKind::Speaker, "S", before, g.clone(), spoken.clone(), vec![])
        })
        .collect()])
    .unwrap();
    let id = Scenario::single(wiring(
        CellKind::Identity,
        "Id",
        spatial.clone(),
        temporal.clone(),
        spatial.clone(),
        temporal.clone(),
    ));
    let mut rest = spatial;
    let split_row = Scenario::from_rows(vec![f2
        .north_groups()
        .iter()
        .map(|g| {
            let west = rest.clone();
            rest.drain(..g.len());
            wiring(CellKind::Recorder, "R", west, vec![], rest.clone(), g.clone())
        })
        .collect()])
    .unwrap();
    let middle = hcomp(&hcomp(&speak_row, &id).unwrap(), &split_row).unwrap();

    let mut rest = temporal;
    let split_col = Scenario::from_rows(
        f2.west_groups()
            .iter()
            .map(|g| {
                let north = rest.clone();
                rest.drain(..g.len());
                vec![wiring(CellKind::Speaker, "S", vec![], north, g.clone(), rest.clone())]
            })
            .collect(),
    )
    .unwrap();
    let bottom = hcomp(&hcomp(&empties(f2.rows(), f1.cols()), &split_col).unwrap(), f2).unwrap();

    vcomp(&vcomp(&top, &middle).unwrap(), &bottom).unwrap()
}

// ---------------------------------------------------------------------------
// HTM classifier cascade.

/// Root output for round `k`, computed bottom-up from the leaf inputs. A
/// pass-through child is resolved by its parent with the child's templates.
pub fn cascade(t: &HtmTree, k: usize) -> i64 {
    fn go(n: &HtmNode, k: usize) -> Output {
        let input: Vec<i64> = if n.is_leaf() {
            n.inputs[k].clone()
        } else {
            n.children
                .iter()
                .map(|c| match go(c, k) {
                    Output::Code(x) => x,
                    Output::PassThrough(p) => c.classifier.names[best_match(&p, &c.classifier).unwrap().0 - 1],
                })
                .collect()
        };
        classify_node(&input, &n.classifier).unwrap()
    }
    match go(&t.root, k) {
        Output::Code(x) => x,
        Output::PassThrough(_) => PASS_THROUGH,
    }
}

pub fn ints(v: &[SimpleValue]) -> Vec<i64> {
    v.iter()
        .map(|x| match x {
            SimpleValue::Int(n) => *n,
            other => panic!("not an int: {other}"),
        })
        .collect()
}
