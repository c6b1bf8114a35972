//! Concrete syntax, AST, printer and static typing of programs.
//!
//! Program operators: `#` horizontal, `%` vertical, `$` diagonal, binding in
//! that order from tightest to loosest, all left-associative.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod typecheck;

use thiserror::Error;

use crate::scenario::Seam;

pub use ast::*;
pub use lexer::tokenize;
pub use parser::{parse_expr, parse_file, parse_module, parse_program, parse_type, parse_values};
pub use printer::{print_expr, print_file, print_module, print_program};
pub use typecheck::{module_type, typecheck, typecheck_program, Layout, NameGroups, Typed};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct SyntaxError {
    pub span: Span,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct TypeError {
    pub span: Span,
    pub kind: TypeErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("unknown module {0}")]
    UnknownModule(String),
    #[error("module {module}: {message}")]
    Module { module: String, message: String },
    #[error("`{combinator}`: {seam} interfaces do not match: {left} vs {right}")]
    Seam {
        combinator: &'static str,
        seam: Seam,
        left: String,
        right: String,
    },
    #[error("`{construct}` guard uses {var}, which is not in scope (allowed: {})", allowed.join(", "))]
    Scope {
        construct: &'static str,
        var: String,
        allowed: Vec<String>,
    },
}
