//! Running programs on concrete inputs.
//!
//! Every seam is a FIFO of items. A module pops at most one item from each of
//! its west and north queues and pushes at most one item east and south.
//! Items a right-hand (or lower) operand never pops are absorbed by drain
//! cells inside that operand and reported as diagnostics.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::exec::{eval_bool, run_module, Env, ExecError, Origin, DEFAULT_STEP_BUDGET};
use crate::iface::{value_conforms, InterfaceValue, SimpleValue, World};
use crate::lang::{typecheck_program, Expr, NameGroups, Node, Program, SourceFile, Span, TypeError};
use crate::scenario::{
    dcomp, drain_cols_right, drain_rows_below, hcomp, identity_grid, vcomp, CompositionError, Scenario,
};

pub const DEFAULT_ROUND_CAP: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// W-steps allowed per module invocation.
    pub step_budget: u64,
    /// Rounds allowed per loop entry.
    pub round_cap: u64,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            step_budget: DEFAULT_STEP_BUDGET,
            round_cap: DEFAULT_ROUND_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("input: {0}")]
    Input(String),
    #[error("{span}: module {module}: {source}")]
    Module {
        span: Span,
        module: String,
        source: ExecError,
    },
    #[error("{span}: `{construct}` guard: {source}")]
    Guard {
        span: Span,
        construct: &'static str,
        source: ExecError,
    },
    #[error("{span}: `{construct}` exceeded {cap} rounds")]
    RoundCap {
        span: Span,
        construct: &'static str,
        cap: u64,
    },
    #[error("{span}: {source}")]
    Composition {
        span: Span,
        source: CompositionError,
    },
}

impl InterpError {
    /// Whether the failure is a step-budget or round-cap overrun.
    pub fn is_divergence(&self) -> bool {
        matches!(
            self,
            InterpError::RoundCap { .. }
                | InterpError::Module {
                    source: ExecError::Divergence(_),
                    ..
                }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunResult {
    pub scenario: Scenario,
    pub east: InterfaceValue,
    pub south: InterfaceValue,
    pub diagnostics: Vec<String>,
}

type Queue = VecDeque<SimpleValue>;

struct Partial {
    scenario: Scenario,
    east: Vec<SimpleValue>,
    south: Vec<SimpleValue>,
}

struct Interp<'a> {
    file: &'a SourceFile,
    config: Config,
    diagnostics: Vec<String>,
}

fn show(items: &[SimpleValue]) -> String {
    InterfaceValue::new(World::Spatial, items.to_vec()).to_string()
}

/// Binds the variables of `groups` to the leading items of `items` without
/// consuming them. A nil group takes no item; the first binding of a name wins.
fn bind_peek(env: &mut Env, groups: &NameGroups, items: &Queue, origin: Origin, world: World) {
    let mut it = items.iter();
    for g in groups {
        if g.is_empty() {
            continue;
        }
        let Some(item) = it.next() else { break };
        let parts: Vec<(&String, &SimpleValue)> = match (g.len(), item) {
            (1, v) => vec![(&g[0], v)],
            (k, SimpleValue::Tuple(vs)) if vs.len() == k => g.iter().zip(vs).collect(),
            _ => continue,
        };
        for (x, v) in parts {
            if x != "_" && !env.vars.contains_key(x) {
                env.bind(x, v.clone(), v.type_in(world), origin);
            }
        }
    }
}

fn take(q: &mut Queue, k: usize) -> Vec<SimpleValue> {
    let k = k.min(q.len());
    q.drain(..k).collect()
}

fn occupied(groups: &NameGroups) -> usize {
    groups.iter().filter(|g| !g.is_empty()).count()
}

impl<'a> Interp<'a> {
    fn compose(
        &self,
        span: Span,
        r: Result<Scenario, CompositionError>,
    ) -> Result<Scenario, InterpError> {
        r.map_err(|source| InterpError::Composition { span, source })
    }

    fn guard(
        &self,
        p: &Program,
        construct: &'static str,
        c: &Expr,
        west: &Queue,
        north: &Queue,
    ) -> Result<(bool, NameGroups, NameGroups), InterpError> {
        let layout = typecheck_program(p, self.file)?.layout;
        let mut env = Env::new();
        bind_peek(&mut env, &layout.n, north, Origin::Read, World::Spatial);
        bind_peek(&mut env, &layout.w, west, Origin::Listen, World::Temporal);
        let b = eval_bool(c, &env).map_err(|source| InterpError::Guard {
            span: p.span,
            construct,
            source,
        })?;
        Ok((b, layout.w, layout.n))
    }

    fn drain_west(&mut self, span: Span, what: &str, f: Scenario, q: Queue) -> Scenario {
        if q.is_empty() {
            return f;
        }
        let left: Vec<SimpleValue> = q.into_iter().collect();
        self.diagnostics
            .push(format!("{span}: {what}: unconsumed temporal seam items drained: {}", show(&left)));
        drain_rows_below(&f, &left)
    }

    fn drain_north(&mut self, span: Span, what: &str, f: Scenario, q: Queue) -> Scenario {
        if q.is_empty() {
            return f;
        }
        let left: Vec<SimpleValue> = q.into_iter().collect();
        self.diagnostics
            .push(format!("{span}: {what}: unconsumed spatial seam items drained: {}", show(&left)));
        drain_cols_right(&f, &left)
    }

    fn run(&mut self, p: &Program, west: &mut Queue, north: &mut Queue) -> Result<Partial, InterpError> {
        let span = p.span;
        match &p.node {
            Node::Nil => Ok(Partial {
                scenario: Scenario::empty(),
                east: vec![],
                south: vec![],
            }),
            Node::Module(name) => {
                let m = self.file.module(name).ok_or_else(|| {
                    InterpError::Type(TypeError {
                        span,
                        kind: crate::lang::TypeErrorKind::UnknownModule(name.clone()),
                    })
                })?;
                let w = take(west, usize::from(!m.listen.is_empty()));
                let n = take(north, usize::from(!m.read.is_empty()));
                let r = run_module(
                    m,
                    &InterfaceValue::new(World::Temporal, w),
                    &InterfaceValue::new(World::Spatial, n),
                    self.config.step_budget,
                )
                .map_err(|source| InterpError::Module {
                    span,
                    module: name.clone(),
                    source,
                })?;
                Ok(Partial {
                    scenario: Scenario::single(r.cell),
                    east: r.east.items,
                    south: r.south.items,
                })
            }
            Node::HPar(a, b) => {
                let r1 = self.run(a, west, north)?;
                let mut seam: Queue = r1.east.into_iter().collect();
                let r2 = self.run(b, &mut seam, north)?;
                let f2 = self.drain_west(span, "#", r2.scenario, seam);
                let scenario = self.compose(span, hcomp(&r1.scenario, &f2))?;
                let mut south = r1.south;
                south.extend(r2.south);
                Ok(Partial {
                    scenario,
                    east: r2.east,
                    south,
                })
            }
            Node::VSeq(a, b) => {
                let r1 = self.run(a, west, north)?;
                let mut seam: Queue = r1.south.into_iter().collect();
                let r2 = self.run(b, west, &mut seam)?;
                let f2 = self.drain_north(span, "%", r2.scenario, seam);
                let scenario = self.compose(span, vcomp(&r1.scenario, &f2))?;
                let mut east = r1.east;
                east.extend(r2.east);
                Ok(Partial {
                    scenario,
                    east,
                    south: r2.south,
                })
            }
            Node::DComp(a, b) => {
                let r1 = self.run(a, west, north)?;
                let (f2, r2) = self.diagonal_step(span, "$", b, r1.east, r1.south)?;
                let scenario = self.compose(span, dcomp(&r1.scenario, &f2))?;
                Ok(Partial {
                    scenario,
                    east: r2.east,
                    south: r2.south,
                })
            }
            Node::If(c, a, b) => {
                let (holds, _, _) = self.guard(p, "if", c, west, north)?;
                self.run(if holds { a } else { b }, west, north)
            }
            Node::WhileT(c, body) => self.while_t(p, c, body, west, north),
            Node::WhileS(c, body) => self.while_s(p, c, body, west, north),
            Node::WhileSt(c, body) => self.while_st(p, c, body, west, north),
        }
    }

    /// Runs `b` on fresh seams holding `east` and `south`; leftovers are drained.
    fn diagonal_step(
        &mut self,
        span: Span,
        what: &str,
        b: &Program,
        east: Vec<SimpleValue>,
        south: Vec<SimpleValue>,
    ) -> Result<(Scenario, Partial), InterpError> {
        let mut w: Queue = east.into_iter().collect();
        let mut n: Queue = south.into_iter().collect();
        let mut r = self.run(b, &mut w, &mut n)?;
        let f = self.drain_west(span, what, std::mem::replace(&mut r.scenario, Scenario::empty()), w);
        let f = self.drain_north(span, what, f, n);
        Ok((f, r))
    }

    fn check_cap(&self, p: &Program, construct: &'static str, rounds: u64) -> Result<(), InterpError> {
        if rounds >= self.config.round_cap {
            Err(InterpError::RoundCap {
                span: p.span,
                construct,
                cap: self.config.round_cap,
            })
        } else {
            Ok(())
        }
    }

    fn while_t(
        &mut self,
        p: &Program,
        c: &Expr,
        body: &Program,
        west: &mut Queue,
        north: &mut Queue,
    ) -> Result<Partial, InterpError> {
        let (go, _, n_layout) = self.guard(p, "while_t", c, west, north)?;
        if !go {
            let items = take(north, occupied(&n_layout));
            return Ok(Partial {
                scenario: identity_grid(&[], &items),
                east: vec![],
                south: items,
            });
        }
        let first = self.run(body, west, north)?;
        let mut scenario = first.scenario;
        let mut east = first.east;
        let mut state: Queue = first.south.into_iter().collect();
        let mut rounds = 1;
        while self.guard(p, "while_t", c, west, &state)?.0 {
            self.check_cap(p, "while_t", rounds)?;
            rounds += 1;
            let r = self.run(body, west, &mut state)?;
            let f = self.drain_north(p.span, "while_t", r.scenario, state);
            scenario = self.compose(p.span, vcomp(&scenario, &f))?;
            east.extend(r.east);
            state = r.south.into_iter().collect();
        }
        Ok(Partial {
            scenario,
            east,
            south: state.into_iter().collect(),
        })
    }

    fn while_s(
        &mut self,
        p: &Program,
        c: &Expr,
        body: &Program,
        west: &mut Queue,
        north: &mut Queue,
    ) -> Result<Partial, InterpError> {
        let (go, w_layout, _) = self.guard(p, "while_s", c, west, north)?;
        if !go {
            let items = take(west, occupied(&w_layout));
            return Ok(Partial {
                scenario: identity_grid(&items, &[]),
                east: items,
                south: vec![],
            });
        }
        let first = self.run(body, west, north)?;
        let mut scenario = first.scenario;
        let mut south = first.south;
        let mut state: Queue = first.east.into_iter().collect();
        let mut rounds = 1;
        while self.guard(p, "while_s", c, &state, north)?.0 {
            self.check_cap(p, "while_s", rounds)?;
            rounds += 1;
            let r = self.run(body, &mut state, north)?;
            let f = self.drain_west(p.span, "while_s", r.scenario, state);
            scenario = self.compose(p.span, hcomp(&scenario, &f))?;
            south.extend(r.south);
            state = r.east.into_iter().collect();
        }
        Ok(Partial {
            scenario,
            east: state.into_iter().collect(),
            south,
        })
    }

    fn while_st(
        &mut self,
        p: &Program,
        c: &Expr,
        body: &Program,
        west: &mut Queue,
        north: &mut Queue,
    ) -> Result<Partial, InterpError> {
        let (go, w_layout, n_layout) = self.guard(p, "while_st", c, west, north)?;
        if !go {
            let w = take(west, occupied(&w_layout));
            let n = take(north, occupied(&n_layout));
            return Ok(Partial {
                scenario: identity_grid(&w, &n),
                east: w,
                south: n,
            });
        }
        let first = self.run(body, west, north)?;
        let mut scenario = first.scenario;
        let mut w: Queue = first.east.into_iter().collect();
        let mut n: Queue = first.south.into_iter().collect();
        let mut rounds = 1;
        while self.guard(p, "while_st", c, &w, &n)?.0 {
            self.check_cap(p, "while_st", rounds)?;
            rounds += 1;
            let east = std::mem::take(&mut w).into_iter().collect();
            let south = std::mem::take(&mut n).into_iter().collect();
            let (f, r) = self.diagonal_step(p.span, "while_st", body, east, south)?;
            scenario = self.compose(p.span, dcomp(&scenario, &f))?;
            w = r.east.into_iter().collect();
            n = r.south.into_iter().collect();
        }
        Ok(Partial {
            scenario,
            east: w.into_iter().collect(),
            south: n.into_iter().collect(),
        })
    }
}

/// Runs the main program of `file` after typechecking it and checking the
/// inputs against its west/north types.
pub fn run(
    file: &SourceFile,
    west: &InterfaceValue,
    north: &InterfaceValue,
    config: Config,
) -> Result<RunResult, InterpError> {
    let ty = crate::lang::typecheck(file)?;
    for (side, v, t) in [("west", west, &ty.w), ("north", north, &ty.n)] {
        match value_conforms(v, t) {
            Ok(true) => {}
            Ok(false) => return Err(InterpError::Input(format!("{side} value {v} does not conform to {t}"))),
            Err(e) => return Err(InterpError::Input(format!("{side}: {e}"))),
        }
    }
    run_program(file, &file.main, west, north, config)
}

/// Runs `p` against the module table of `file` without any static checks of
/// the inputs.
pub fn run_program(
    file: &SourceFile,
    p: &Program,
    west: &InterfaceValue,
    north: &InterfaceValue,
    config: Config,
) -> Result<RunResult, InterpError> {
    let mut it = Interp {
        file,
        config,
        diagnostics: Vec::new(),
    };
    let mut w: Queue = west.items.iter().cloned().collect();
    let mut n: Queue = north.items.iter().cloned().collect();
    let r = it.run(p, &mut w, &mut n)?;
    for (side, q) in [("west", &w), ("north", &n)] {
        if !q.is_empty() {
            let left: Vec<SimpleValue> = q.iter().cloned().collect();
            it.diagnostics.push(format!("unconsumed {side} input: {}", show(&left)));
        }
    }
    Ok(RunResult {
        scenario: r.scenario,
        east: InterfaceValue::new(World::Temporal, r.east),
        south: InterfaceValue::new(World::Spatial, r.south),
        diagnostics: it.diagnostics,
    })
}
