//! Commands behind the `agapia` binary. Each returns its stdout text or a
//! [`CliError`] carrying the exit code.

use std::fmt;
use std::path::Path;

use agapia::htm::{self, HtmError, HtmTree};
use agapia::interp::{run, Config, InterpError, RunResult};
use agapia::lang::{parse_file, parse_values, typecheck, SourceFile};
use agapia::scenario::Cell;
use agapia::{InterfaceValue, SimpleValue, World};
use serde::{Deserialize, Serialize};

pub mod examples;

#[derive(Debug)]
pub enum CliError {
    /// Parse, type, input or runtime errors. Exit code 1.
    Diagnostics(String),
    /// Step budget or round cap exceeded. Exit code 2.
    Divergence(String),
    /// Unreadable or unwritable files. Exit code 3.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Diagnostics(_) => 1,
            CliError::Divergence(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Diagnostics(m) | CliError::Io(m) => f.write_str(m),
            CliError::Divergence(m) => write!(f, "divergence: {m}"),
        }
    }
}

impl From<InterpError> for CliError {
    fn from(e: InterpError) -> Self {
        if e.is_divergence() {
            CliError::Divergence(e.to_string())
        } else {
            CliError::Diagnostics(e.to_string())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub north: Vec<SimpleValue>,
    pub west: Vec<SimpleValue>,
    pub format: Format,
    pub config: Config,
}

impl RunConfig {
    /// Parses `--north` and each `--west` literal; several west literals are
    /// concatenated.
    pub fn from_literals(north: Option<&str>, west: &[String], format: Format, config: Config) -> Result<Self, CliError> {
        if config.step_budget == 0 || config.round_cap == 0 {
            return Err(CliError::Diagnostics("budgets must be positive".into()));
        }
        let lit = |side: &str, s: &str| {
            parse_values(s).map_err(|e| CliError::Diagnostics(format!("--{side} {s:?}: {e}")))
        };
        let north = north.map(|s| lit("north", s)).transpose()?.unwrap_or_default();
        let mut w = Vec::new();
        for s in west {
            w.extend(lit("west", s)?);
        }
        Ok(RunConfig {
            north,
            west: w,
            format,
            config,
        })
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load(name: &str, src: &str) -> Result<SourceFile, CliError> {
    parse_file(src).map_err(|e| CliError::Diagnostics(format!("{name}:{e}")))
}

pub fn cmd_typecheck(name: &str, src: &str) -> Result<String, CliError> {
    let f = load(name, src)?;
    let ty = typecheck(&f).map_err(|e| CliError::Diagnostics(format!("{name}:{e}")))?;
    Ok(format!("{ty}\n"))
}

/// Machine-readable run output: rows of cells with their four borders, the
/// outer borders and the diagnostics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structured {
    #[serde(rename = "type")]
    pub ty: String,
    pub rows: Vec<Vec<Cell>>,
    pub west: Vec<SimpleValue>,
    pub north: Vec<SimpleValue>,
    pub east: Vec<SimpleValue>,
    pub south: Vec<SimpleValue>,
    pub diagnostics: Vec<String>,
}

impl Structured {
    pub fn new(ty: String, r: &RunResult) -> Self {
        let s = &r.scenario;
        Structured {
            ty,
            rows: (0..s.rows()).map(|i| s.row_cells(i).to_vec()).collect(),
            west: s.west().items,
            north: s.north().items,
            east: r.east.items.clone(),
            south: r.south.items.clone(),
            diagnostics: r.diagnostics.clone(),
        }
    }
}

pub fn execute(f: &SourceFile, cfg: &RunConfig) -> Result<RunResult, CliError> {
    let west = InterfaceValue::new(World::Temporal, cfg.west.clone());
    let north = InterfaceValue::new(World::Spatial, cfg.north.clone());
    Ok(run(f, &west, &north, cfg.config)?)
}

pub fn render_text(r: &RunResult) -> String {
    let mut out = r.scenario.to_string();
    out.push_str(&format!("east:  {}\nsouth: {}\n", r.east, r.south));
    for d in &r.diagnostics {
        out.push_str(&format!("note: {d}\n"));
    }
    out
}

pub fn render_structured(f: &SourceFile, r: &RunResult) -> String {
    let ty = typecheck(f).map(|t| t.to_string()).unwrap_or_default();
    let mut s = serde_json::to_string_pretty(&Structured::new(ty, r)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn cmd_run(name: &str, src: &str, cfg: &RunConfig) -> Result<String, CliError> {
    let f = load(name, src)?;
    let r = execute(&f, cfg)?;
    Ok(match cfg.format {
        Format::Text => render_text(&r),
        Format::Structured => render_structured(&f, &r),
    })
}

fn htm_error(name: &str, e: HtmError) -> CliError {
    match e {
        HtmError::Schema { line: Some(l), message } => CliError::Diagnostics(format!("{name}:{l}: {message}")),
        other => CliError::Diagnostics(format!("{name}: {other}")),
    }
}

/// Program text for a tree file, checked to parse back and typecheck.
pub fn htm_program(name: &str, tree_src: &str, feedback: bool) -> Result<(HtmTree, String), CliError> {
    let t = HtmTree::from_toml(tree_src).map_err(|e| htm_error(name, e))?;
    let text = htm::render(&t, feedback).map_err(|e| htm_error(name, e))?;
    let f = load("generated", &text)?;
    typecheck(&f).map_err(|e| CliError::Diagnostics(format!("generated program: {e}")))?;
    Ok((t, text))
}

pub fn cmd_htm_gen(tree: &Path, out: &Path, feedback: bool) -> Result<String, CliError> {
    let src = read(tree)?;
    let (t, text) = htm_program(&tree.display().to_string(), &src, feedback)?;
    std::fs::write(out, &text).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    Ok(format!(
        "wrote {} ({} node modules: {})\n",
        out.display(),
        htm::tree_linearize(&t).len(),
        htm::tree_linearize(&t).join(",")
    ))
}

/// Runs a generated HTM program on the tree's own inputs and returns the
/// root's code per round.
pub fn run_htm(t: &HtmTree, text: &str, feedback: bool) -> Result<Vec<i64>, CliError> {
    let f = load("generated", text)?;
    let north = htm::north_input(t, feedback).map_err(|e| htm_error("tree", e))?;
    let cfg = RunConfig {
        north,
        west: Vec::new(),
        format: Format::Structured,
        config: Config::default(),
    };
    let r = execute(&f, &cfg)?;
    htm::root_outputs(t, &r.south.items)
        .ok_or_else(|| CliError::Diagnostics("root outputs missing from the south border".into()))
}
