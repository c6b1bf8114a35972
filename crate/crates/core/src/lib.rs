//! Interpreter for Agapia v0.1 structured interactive programs.
//!
//! [`iface`] holds interface types and values, [`scenario`] the grids that
//! record a run, [`lang`] parsing and typing, [`exec`] module bodies,
//! [`interp`] whole programs and [`htm`] the tree-network generator.

pub mod exec;
pub mod htm;
pub mod iface;
pub mod interp;
pub mod lang;
pub mod scenario;

pub use iface::{BorderTypes, InterfaceType, InterfaceValue, SimpleType, SimpleValue, World};
pub use interp::{run, run_program, Config, InterpError, RunResult};
pub use lang::{parse_file, typecheck, Program, SourceFile};
pub use scenario::{Cell, CellKind, Scenario};
