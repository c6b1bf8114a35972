//! Evaluation of module bodies.
//!
//! Integers are 64-bit with overflow reported as an error; `/` truncates
//! toward zero and `%` takes the sign of the dividend.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::iface::{access_simple, access_simple_mut, InterfaceValue, Selector, SimpleType, SimpleValue, ValueError, World};
use crate::lang::{BinOp, Expr, Module, Path, Step, Stmt, UnOp};
use crate::scenario::Cell;

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("variable {0} is not bound")]
    Unbound(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("expected {expected}, got {got}")]
    Kind { expected: &'static str, got: String },
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error("step budget of {0} exhausted")]
    Divergence(u64),
    #[error("interface error: {0}")]
    Interface(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Listen,
    Read,
    Local,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub value: SimpleValue,
    pub ty: SimpleType,
    pub world: World,
    pub origin: Origin,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Env {
    pub vars: BTreeMap<String, Binding>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn bind(&mut self, name: &str, value: SimpleValue, ty: SimpleType, origin: Origin) {
        let world = match (ty.world(), origin) {
            (Ok(Some(w)), _) => w,
            (_, Origin::Read) => World::Spatial,
            _ => World::Temporal,
        };
        self.vars.insert(
            name.to_string(),
            Binding {
                value,
                ty,
                world,
                origin,
            },
        );
    }

    pub fn get(&self, name: &str) -> Result<&SimpleValue, ExecError> {
        self.vars
            .get(name)
            .map(|b| &b.value)
            .ok_or_else(|| ExecError::Unbound(name.to_string()))
    }
}

/// Remaining W-steps; every statement and loop test costs one.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    fn tick(&mut self) -> Result<(), ExecError> {
        if self.used >= self.limit {
            return Err(ExecError::Divergence(self.limit));
        }
        self.used += 1;
        Ok(())
    }
}

fn selector(step: &Step, env: &Env) -> Result<Selector, ExecError> {
    Ok(match step {
        Step::Group(k) => Selector::Group(*k),
        Step::Field(World::Spatial, k) => Selector::SpatialField(*k),
        Step::Field(World::Temporal, k) => Selector::TemporalField(*k),
        Step::Index(World::Spatial, e) => Selector::SpatialIndex(eval_expr(e, env)?),
        Step::Index(World::Temporal, e) => Selector::TemporalIndex(eval_expr(e, env)?),
    })
}

fn read_path(p: &Path, env: &Env) -> Result<SimpleValue, ExecError> {
    let b = env
        .vars
        .get(&p.var)
        .ok_or_else(|| ExecError::Unbound(p.var.clone()))?;
    let mut v = &b.value;
    for step in &p.steps {
        v = access_simple(v, b.world, selector(step, env)?)?;
    }
    Ok(v.clone())
}

fn int_of(v: SimpleValue) -> Result<i64, ExecError> {
    match v {
        SimpleValue::Int(n) => Ok(n),
        other => Err(ExecError::Kind {
            expected: "an integer",
            got: other.to_string(),
        }),
    }
}

fn bool_of(v: SimpleValue) -> Result<bool, ExecError> {
    match v {
        SimpleValue::Bool(b) => Ok(b),
        other => Err(ExecError::Kind {
            expected: "a boolean",
            got: other.to_string(),
        }),
    }
}

fn overflow(op: BinOp, a: i64, b: i64) -> ExecError {
    ExecError::Arithmetic(format!("{a} {} {b} overflows", op.symbol()))
}

/// Value of any expression.
pub fn eval(e: &Expr, env: &Env) -> Result<SimpleValue, ExecError> {
    Ok(match e {
        Expr::Int(n) => SimpleValue::Int(*n),
        Expr::Bool(b) => SimpleValue::Bool(*b),
        Expr::Var(p) => read_path(p, env)?,
        Expr::Unary(UnOp::Neg, a) => {
            let n = eval_expr(a, env)?;
            SimpleValue::Int(
                n.checked_neg()
                    .ok_or_else(|| ExecError::Arithmetic(format!("-({n}) overflows")))?,
            )
        }
        Expr::Unary(UnOp::Not, a) => SimpleValue::Bool(!eval_bool(a, env)?),
        Expr::Binary(BinOp::And, a, b) => SimpleValue::Bool(eval_bool(a, env)? && eval_bool(b, env)?),
        Expr::Binary(BinOp::Or, a, b) => SimpleValue::Bool(eval_bool(a, env)? || eval_bool(b, env)?),
        Expr::Binary(op @ (BinOp::Eq | BinOp::Ne), a, b) => {
            let same = eval(a, env)? == eval(b, env)?;
            SimpleValue::Bool(same == (*op == BinOp::Eq))
        }
        Expr::Binary(op, a, b) => {
            let (x, y) = (eval_expr(a, env)?, eval_expr(b, env)?);
            match op {
                BinOp::Add => SimpleValue::Int(x.checked_add(y).ok_or_else(|| overflow(*op, x, y))?),
                BinOp::Sub => SimpleValue::Int(x.checked_sub(y).ok_or_else(|| overflow(*op, x, y))?),
                BinOp::Mul => SimpleValue::Int(x.checked_mul(y).ok_or_else(|| overflow(*op, x, y))?),
                BinOp::Div | BinOp::Rem => {
                    if y == 0 {
                        return Err(ExecError::Arithmetic(format!("{x} {} 0: division by zero", op.symbol())));
                    }
                    let r = if *op == BinOp::Div { x.checked_div(y) } else { x.checked_rem(y) };
                    SimpleValue::Int(r.ok_or_else(|| overflow(*op, x, y))?)
                }
                BinOp::Lt => SimpleValue::Bool(x < y),
                BinOp::Le => SimpleValue::Bool(x <= y),
                BinOp::Gt => SimpleValue::Bool(x > y),
                BinOp::Ge => SimpleValue::Bool(x >= y),
                BinOp::And | BinOp::Or | BinOp::Eq | BinOp::Ne => unreachable!(),
            }
        }
    })
}

pub fn eval_expr(e: &Expr, env: &Env) -> Result<i64, ExecError> {
    int_of(eval(e, env)?)
}

pub fn eval_bool(e: &Expr, env: &Env) -> Result<bool, ExecError> {
    bool_of(eval(e, env)?)
}

fn assign(p: &Path, value: SimpleValue, env: &mut Env) -> Result<(), ExecError> {
    let sels = p
        .steps
        .iter()
        .map(|s| selector(s, env))
        .collect::<Result<Vec<_>, _>>()?;
    let b = env
        .vars
        .get_mut(&p.var)
        .ok_or_else(|| ExecError::Unbound(p.var.clone()))?;
    let mut updated = b.value.clone();
    let mut slot = &mut updated;
    for sel in sels {
        slot = access_simple_mut(slot, b.world, sel)?;
    }
    *slot = value;
    if !b.ty.accepts(&updated) {
        return Err(ExecError::Kind {
            expected: "a value of the declared type",
            got: format!("{} := {updated} (declared {})", p.var, b.ty),
        });
    }
    b.value = updated;
    Ok(())
}

/// Big-step execution of a statement list.
pub fn exec_w(body: &[Stmt], env: &mut Env, budget: &mut Budget) -> Result<(), ExecError> {
    for s in body {
        budget.tick()?;
        match s {
            Stmt::Nil => {}
            Stmt::New(x, t) => env.bind(x, t.default_value(), t.clone(), Origin::Local),
            Stmt::Assign(p, e) => {
                let v = eval(e, env)?;
                assign(p, v, env)?;
            }
            Stmt::If(c, a, b) => {
                if eval_bool(c, env)? {
                    exec_w(a, env, budget)?;
                } else {
                    exec_w(b, env, budget)?;
                }
            }
            Stmt::While(c, a) => {
                while eval_bool(c, env)? {
                    exec_w(a, env, budget)?;
                    budget.tick()?;
                }
            }
        }
    }
    Ok(())
}

/// Result of one module invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleRun {
    pub east: InterfaceValue,
    pub south: InterfaceValue,
    pub cell: Cell,
    pub env: Env,
}

fn bind_inputs(
    env: &mut Env,
    decls: &[(String, SimpleType)],
    input: &InterfaceValue,
    origin: Origin,
    side: &str,
) -> Result<(), ExecError> {
    let err = |msg: String| ExecError::Interface(format!("{side}: {msg}"));
    let values: Vec<SimpleValue> = match (decls.len(), input.items.as_slice()) {
        (0, []) => vec![],
        (0, items) => return Err(err(format!("expects nil, got {}", InterfaceValue::new(input.world, items.to_vec())))),
        (1, []) => vec![SimpleValue::Nil],
        (1, [v]) => vec![v.clone()],
        (k, [SimpleValue::Tuple(vs)]) if vs.len() == k => vs.clone(),
        (k, _) => return Err(err(format!("expects one item for {k} variable(s), got {input}"))),
    };
    for ((x, t), v) in decls.iter().zip(values) {
        if !t.accepts(&v) {
            return Err(err(format!("{x}:{t} cannot hold {v}")));
        }
        env.bind(x, v, t.clone(), origin);
    }
    Ok(())
}

fn outputs(env: &Env, names: &[String], world: World) -> Result<InterfaceValue, ExecError> {
    let vals = names
        .iter()
        .map(|x| env.get(x).cloned())
        .collect::<Result<Vec<_>, _>>()?;
    let item = match vals.len() {
        0 => SimpleValue::Nil,
        1 => vals.into_iter().next().unwrap(),
        _ => SimpleValue::Tuple(vals),
    };
    Ok(InterfaceValue::new(world, vec![item]))
}

/// Runs `m` on its own inputs: at most one item on each side, a tuple when
/// several variables are declared.
pub fn run_module(
    m: &Module,
    west: &InterfaceValue,
    north: &InterfaceValue,
    step_budget: u64,
) -> Result<ModuleRun, ExecError> {
    let mut env = Env::new();
    bind_inputs(&mut env, &m.listen, west, Origin::Listen, "west")?;
    bind_inputs(&mut env, &m.read, north, Origin::Read, "north")?;
    // locals exist from the start so that speak/write always resolve
    let mut locals = Vec::new();
    Stmt::declared(&m.body, &mut locals);
    for (x, t) in locals {
        if !env.vars.contains_key(&x) {
            env.bind(&x, t.default_value(), t, Origin::Local);
        }
    }
    let mut budget = Budget::new(step_budget);
    exec_w(&m.body, &mut env, &mut budget)?;
    let east = outputs(&env, &m.speak, World::Temporal)?;
    let south = outputs(&env, &m.write, World::Spatial)?;
    let cell = Cell::module(
        m.name.clone(),
        west.items.clone(),
        north.items.clone(),
        east.items.clone(),
        south.items.clone(),
    );
    Ok(ModuleRun { east, south, cell, env })
}
