//! HTM trees as Agapia programs.
//!
//! A tree is linearized post-order and every node becomes one module of an
//! `#` chain iterated by `while_st`. Each round, leaves read the next pattern
//! from a register, and class codes flow rightwards on a temporal tuple (the
//! bus) with three slots per non-root node: code, pattern, resolution.
//! A code of `-1` marks a pass-through, in which case the parent classifies
//! the child's input itself. The root collects its codes in a register.
//!
//! Tree files are TOML:
//!
//! ```toml
//! [[node]]
//! code = "1"            # "" or "nil" for the root
//! mode = "best"         # best | prefix | attentive
//! threshold = 0
//! templates = [[1, 1], [2, 2]]
//! names = [1, 2]
//! inputs = [[1, 1], [2, 1]]   # leaves only, one pattern per round
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::iface::SimpleValue;
use crate::lang::{parse_file, print_file, SourceFile};

/// Code emitted by a node that passes its input on unclassified.
pub const PASS_THROUGH: i64 = -1;
/// First element of the pattern that ends a leaf's input stream.
pub const SENTINEL: i64 = -1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub enum Mode {
    #[serde(rename = "best", alias = "bestFull")]
    BestFull,
    #[serde(rename = "prefix")]
    Prefix,
    #[serde(rename = "attentive", alias = "fullyAttentive")]
    FullyAttentive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifierCfg {
    pub templates: Vec<Vec<i64>>,
    pub names: Vec<i64>,
    pub mode: Mode,
    pub threshold: u64,
}

impl ClassifierCfg {
    pub fn new(templates: Vec<Vec<i64>>, names: Vec<i64>, mode: Mode, threshold: u64) -> Self {
        ClassifierCfg {
            templates,
            names,
            mode,
            threshold,
        }
    }

    pub fn width(&self) -> usize {
        self.templates.first().map_or(0, Vec::len)
    }

    fn validate(&self) -> Result<(), String> {
        if self.templates.is_empty() {
            return Err("no templates".into());
        }
        if self.templates.len() != self.names.len() {
            return Err(format!(
                "{} templates but {} names",
                self.templates.len(),
                self.names.len()
            ));
        }
        let w = self.width();
        if w == 0 {
            return Err("templates are empty".into());
        }
        if let Some(t) = self.templates.iter().find(|t| t.len() != w) {
            return Err(format!("template {t:?} has length {}, expected {w}", t.len()));
        }
        for (i, t) in self.templates.iter().enumerate() {
            if self.templates[..i].contains(t) {
                return Err(format!("template {t:?} occurs twice"));
            }
        }
        if self.names.contains(&PASS_THROUGH) {
            return Err(format!("class code {PASS_THROUGH} is reserved for pass-through"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HtmNode {
    /// Digit string; empty for the root.
    pub code: String,
    pub classifier: ClassifierCfg,
    /// Leaf input stream, one pattern per round.
    pub inputs: Vec<Vec<i64>>,
    pub children: Vec<HtmNode>,
}

impl HtmNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// The code as printed: `nil` for the root.
    pub fn label(&self) -> String {
        label(&self.code)
    }

    fn suffix(&self) -> String {
        if self.code.is_empty() {
            "root".into()
        } else {
            self.code.clone()
        }
    }
}

fn label(code: &str) -> String {
    if code.is_empty() {
        "nil".into()
    } else {
        code.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HtmTree {
    pub root: HtmNode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HtmError {
    #[error("tree file{}: {message}", line.map(|l| format!(" line {l}")).unwrap_or_default())]
    Schema { line: Option<usize>, message: String },
    #[error("node {code}: {message}")]
    Config { code: String, message: String },
    #[error("pattern has length {got}, templates have length {expected}")]
    Length { expected: usize, got: usize },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeFile {
    #[serde(default)]
    node: Vec<NodeEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeEntry {
    code: toml::Spanned<String>,
    #[serde(default = "default_mode")]
    mode: Mode,
    #[serde(default)]
    threshold: u64,
    templates: Vec<Vec<i64>>,
    names: Vec<i64>,
    #[serde(default)]
    inputs: Vec<Vec<i64>>,
}

fn default_mode() -> Mode {
    Mode::BestFull
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

impl HtmTree {
    pub fn from_toml(src: &str) -> Result<HtmTree, HtmError> {
        let file: TreeFile = toml::from_str(src).map_err(|e| HtmError::Schema {
            line: e.span().map(|s| line_of(src, s.start)),
            message: e.message().to_string(),
        })?;
        let mut entries: BTreeMap<String, (usize, NodeEntry)> = BTreeMap::new();
        for e in file.node {
            let line = line_of(src, e.code.span().start);
            let code = match e.code.get_ref().as_str() {
                "nil" => String::new(),
                c => c.to_string(),
            };
            let schema = |message: String| HtmError::Schema {
                line: Some(line),
                message,
            };
            if !code.chars().all(|c| ('1'..='9').contains(&c)) {
                return Err(schema(format!("code {code:?} is not a string of digits 1-9")));
            }
            if entries.contains_key(&code) {
                return Err(schema(format!("node {} is listed twice", label(&code))));
            }
            entries.insert(code, (line, e));
        }
        if !entries.contains_key("") {
            return Err(HtmError::Schema {
                line: None,
                message: "no root node (code \"\" or \"nil\")".into(),
            });
        }
        for (code, (line, _)) in &entries {
            if let Some(parent) = code.get(..code.len().saturating_sub(1)) {
                if !code.is_empty() && !entries.contains_key(parent) {
                    return Err(HtmError::Schema {
                        line: Some(*line),
                        message: format!("node {code} has no parent {}", label(parent)),
                    });
                }
            }
        }
        fn build(code: &str, entries: &mut BTreeMap<String, (usize, NodeEntry)>) -> Result<HtmNode, HtmError> {
            let (line, e) = entries.remove(code).expect("checked above");
            let mut children = Vec::new();
            for d in 1..=9u8 {
                let c = format!("{code}{d}");
                if entries.contains_key(&c) {
                    if children.len() + 1 != d as usize {
                        return Err(HtmError::Schema {
                            line: Some(line),
                            message: format!("children of {} are not numbered 1, 2, ...", label(code)),
                        });
                    }
                    children.push(build(&c, entries)?);
                }
            }
            Ok(HtmNode {
                code: code.to_string(),
                classifier: ClassifierCfg::new(e.templates, e.names, e.mode, e.threshold),
                inputs: e.inputs,
                children,
            })
        }
        let tree = HtmTree {
            root: build("", &mut entries)?,
        };
        tree.validate()?;
        Ok(tree)
    }

    /// A regular tree: inner nodes at depth `i` have `fanouts[i]` children.
    /// Every node has two classes, coded 1 and 2, whose templates are
    /// constant sequences of 1s and of 2s; leaf templates have length `width`.
    pub fn regular(fanouts: &[usize], width: usize) -> HtmTree {
        fn node(code: String, fanouts: &[usize], width: usize) -> HtmNode {
            let children: Vec<HtmNode> = match fanouts.split_first() {
                None => Vec::new(),
                Some((&k, rest)) => (1..=k).map(|d| node(format!("{code}{d}"), rest, width)).collect(),
            };
            let w = if children.is_empty() { width } else { children.len() };
            HtmNode {
                code,
                classifier: ClassifierCfg::new(vec![vec![1; w], vec![2; w]], vec![1, 2], Mode::BestFull, 0),
                inputs: Vec::new(),
                children,
            }
        }
        HtmTree {
            root: node(String::new(), fanouts, width),
        }
    }

    pub fn validate(&self) -> Result<(), HtmError> {
        let nodes = linear(self);
        let rounds = nodes.iter().find(|n| n.is_leaf()).map_or(0, |n| n.inputs.len());
        for n in &nodes {
            let config = |message: String| HtmError::Config {
                code: n.label(),
                message,
            };
            n.classifier.validate().map_err(config)?;
            let w = n.classifier.width();
            if n.is_leaf() {
                if let Some(p) = n.inputs.iter().find(|p| p.len() != w) {
                    return Err(config(format!("input {p:?} does not have the template length {w}")));
                }
                if n.inputs.iter().any(|p| p[0] == SENTINEL) {
                    return Err(config(format!("inputs may not start with the sentinel {SENTINEL}")));
                }
                if n.inputs.len() != rounds {
                    return Err(config(format!(
                        "{} inputs, but the first leaf has {rounds}",
                        n.inputs.len()
                    )));
                }
            } else {
                if w != n.children.len() {
                    return Err(config(format!(
                        "templates have length {w} but the node has {} children",
                        n.children.len()
                    )));
                }
                if !n.inputs.is_empty() {
                    return Err(config("inner nodes take no inputs".into()));
                }
            }
        }
        Ok(())
    }

    /// Rounds the tree's inputs provide.
    pub fn rounds(&self) -> usize {
        linear(self).into_iter().find(|n| n.is_leaf()).map_or(0, |n| n.inputs.len())
    }
}

fn linear(t: &HtmTree) -> Vec<&HtmNode> {
    fn go<'a>(n: &'a HtmNode, out: &mut Vec<&'a HtmNode>) {
        for c in &n.children {
            go(c, out);
        }
        out.push(n);
    }
    let mut out = Vec::new();
    go(&t.root, &mut out);
    out
}

/// Post-order codes; the root prints as `nil`.
pub fn tree_linearize(t: &HtmTree) -> Vec<String> {
    linear(t).into_iter().map(HtmNode::label).collect()
}

fn check_len(pattern: &[i64], cfg: &ClassifierCfg) -> Result<(), HtmError> {
    if pattern.len() == cfg.width() {
        Ok(())
    } else {
        Err(HtmError::Length {
            expected: cfg.width(),
            got: pattern.len(),
        })
    }
}

/// 1-based index of the template nearest to `pattern` in Hamming distance,
/// and that distance. Ties go to the lowest index.
pub fn best_match(pattern: &[i64], cfg: &ClassifierCfg) -> Result<(usize, usize), HtmError> {
    check_len(pattern, cfg)?;
    let mut best = (0, usize::MAX);
    for (i, t) in cfg.templates.iter().enumerate() {
        let d = t.iter().zip(pattern).filter(|(a, b)| a != b).count();
        if d < best.1 {
            best = (i + 1, d);
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefix {
    /// 1-based class index.
    Class(usize),
    /// 1-based position where the last candidates dropped out.
    Ambiguous(usize),
}

/// Scans `pattern` left to right, keeping the templates that agree with the
/// prefix read so far, and stops as soon as exactly one is left.
pub fn prefix_match(pattern: &[i64], cfg: &ClassifierCfg) -> Result<Prefix, HtmError> {
    check_len(pattern, cfg)?;
    let mut alive: Vec<usize> = (0..cfg.templates.len()).collect();
    for (j, x) in pattern.iter().enumerate() {
        alive.retain(|&i| cfg.templates[i][j] == *x);
        match alive.len() {
            0 => return Ok(Prefix::Ambiguous(j + 1)),
            1 => return Ok(Prefix::Class(alive[0] + 1)),
            _ => {}
        }
    }
    Ok(Prefix::Class(best_match(pattern, cfg)?.0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Output {
    Code(i64),
    PassThrough(Vec<i64>),
}

/// Node output for `pattern`. An ambiguous prefix falls back to best match.
pub fn classify_node(pattern: &[i64], cfg: &ClassifierCfg) -> Result<Output, HtmError> {
    let index = match cfg.mode {
        Mode::BestFull => best_match(pattern, cfg)?.0,
        Mode::Prefix => match prefix_match(pattern, cfg)? {
            Prefix::Class(i) => i,
            Prefix::Ambiguous(_) => best_match(pattern, cfg)?.0,
        },
        Mode::FullyAttentive => {
            let (i, d) = best_match(pattern, cfg)?;
            if d as u64 > cfg.threshold {
                return Ok(Output::PassThrough(pattern.to_vec()));
            }
            i
        }
    };
    Ok(Output::Code(cfg.names[index - 1]))
}

// ---------------------------------------------------------------------------
// Program generation

struct Gen<'a> {
    nodes: Vec<&'a HtmNode>,
    feedback: bool,
    /// Bus slot base (0-based, 3 per node) by code, non-root nodes only.
    slot: BTreeMap<&'a str, usize>,
    bus_type: Option<String>,
}

impl<'a> Gen<'a> {
    fn new(t: &'a HtmTree, feedback: bool) -> Self {
        let nodes = linear(t);
        let slot: BTreeMap<&str, usize> = nodes
            .iter()
            .filter(|n| !n.code.is_empty())
            .enumerate()
            .map(|(i, n)| (n.code.as_str(), 3 * i))
            .collect();
        let bus_type = (!slot.is_empty())
            .then(|| format!("({})", vec!["tn, (tn)*, tn"; slot.len()].join(", ")));
        Gen {
            nodes,
            feedback,
            slot,
            bus_type,
        }
    }

    fn code_slot(&self, n: &HtmNode) -> String {
        format!("bus@{}", self.slot[n.code.as_str()] + 1)
    }

    fn pat_slot(&self, n: &HtmNode) -> String {
        format!("bus@{}", self.slot[n.code.as_str()] + 2)
    }

    fn res_slot(&self, n: &HtmNode) -> String {
        format!("bus@{}", self.slot[n.code.as_str()] + 3)
    }

    /// Register variables of a node with their types, in north order.
    fn register(&self, n: &HtmNode) -> Vec<(String, &'static str)> {
        let s = n.suffix();
        let mut out = Vec::new();
        if n.is_leaf() {
            out.push((format!("inp_{s}"), "((sn)*)*"));
            out.push((format!("r_{s}"), "sn"));
        }
        if n.code.is_empty() {
            out.push(("outs".to_string(), "(sn)*"));
            if !n.is_leaf() {
                out.push(("ro".to_string(), "sn"));
            }
        } else if self.feedback {
            out.push((format!("res_{s}"), "sn"));
        }
        out
    }

    /// Expression reading position `j` (1-based) of what `n` classifies.
    fn input_of(&self, n: &HtmNode, j: usize, passed: bool) -> String {
        if n.is_leaf() {
            if passed {
                format!("{}@[{j}]", self.pat_slot(n))
            } else {
                format!("pat.[{j}]")
            }
        } else {
            self.code_slot(&n.children[j - 1])
        }
    }

    fn module(&self, pos: usize, out: &mut String) {
        let n = self.nodes[pos];
        let last = pos + 1 == self.nodes.len();
        let listen = match &self.bus_type {
            Some(bt) if pos > 0 => format!("bus:{bt}"),
            _ => "nil".into(),
        };
        let speak = if self.bus_type.is_some() && !(last && !self.feedback) {
            "bus"
        } else {
            "nil"
        };
        let reg = self.register(n);
        let mut body = Body::default();
        if pos == 0 {
            if let Some(bt) = &self.bus_type {
                body.line(format!("bus:{bt};"));
            }
        }
        for decl in [
            "code:sn;", "bi:sn;", "bd:sn;", "d:sn;", "dec:sn;", "cnt:sn;", "amb:sb;", "rc:sn;",
        ] {
            body.line(decl.into());
        }
        let alive = n
            .children
            .iter()
            .map(|c| c.classifier.templates.len())
            .chain([n.classifier.templates.len()])
            .max()
            .unwrap_or(0);
        for i in 1..=alive {
            body.line(format!("a{i}:sb;"));
        }
        let s = n.suffix();
        if n.is_leaf() {
            body.line("pat:(sn)*;".into());
            body.line(format!("pat = inp_{s}.[r_{s}];"));
        }
        for c in &n.children {
            body.line(format!("if ({} == {PASS_THROUGH}) {{", self.code_slot(c)));
            body.indent += 1;
            best_block(&mut body, &c.classifier, &|j| self.input_of(c, j, true));
            names_block(&mut body, &c.classifier, "rc");
            body.line(format!("{} = rc;", self.code_slot(c)));
            body.line(format!("{} = rc;", self.res_slot(c)));
            body.indent -= 1;
            body.line("}".into());
        }
        self.classify(&mut body, n);
        if n.code.is_empty() {
            let idx = if n.is_leaf() { format!("r_{s}") } else { "ro".into() };
            body.line(format!("outs.[{idx}] = code;"));
            body.line(format!("{idx} = {idx} + 1;"));
        } else {
            body.line(format!("{} = code;", self.code_slot(n)));
            if n.is_leaf() {
                body.line(format!("r_{s} = r_{s} + 1;"));
            }
        }
        let _ = writeln!(
            out,
            "module N{s}{{listen {listen};}}{{read {};}}\n{{\n{}}}{{speak {speak};}}{{write {};}}\n",
            decls(&reg),
            body.text,
            names_of(&reg),
        );
    }

    fn classify(&self, body: &mut Body, n: &HtmNode) {
        let cfg = &n.classifier;
        let input = |j: usize| self.input_of(n, j, false);
        match cfg.mode {
            Mode::BestFull => {
                best_block(body, cfg, &input);
                names_block(body, cfg, "code");
            }
            Mode::Prefix => {
                let k = cfg.templates.len();
                for i in 1..=k {
                    body.line(format!("a{i} = true;"));
                }
                body.line("dec = 0;".into());
                body.line("amb = false;".into());
                for j in 1..=cfg.width() {
                    body.line("if (dec == 0 && !amb) {".into());
                    body.indent += 1;
                    let x = input(j);
                    for (i, t) in cfg.templates.iter().enumerate() {
                        body.line(format!("if (a{} && {x} != {}) a{} = false;", i + 1, t[j - 1], i + 1));
                    }
                    body.line("cnt = 0;".into());
                    for i in 1..=k {
                        body.line(format!("if (a{i}) cnt = cnt + 1;"));
                    }
                    body.line("if (cnt == 0) amb = true;".into());
                    body.line("if (cnt == 1) {".into());
                    body.indent += 1;
                    for i in 1..=k {
                        body.line(format!("if (a{i}) dec = {i};"));
                    }
                    body.indent -= 1;
                    body.line("}".into());
                    body.indent -= 1;
                    body.line("}".into());
                }
                body.line("if (dec == 0) {".into());
                body.indent += 1;
                best_block(body, cfg, &input);
                body.line("dec = bi;".into());
                body.indent -= 1;
                body.line("}".into());
                body.line("bi = dec;".into());
                names_block(body, cfg, "code");
            }
            Mode::FullyAttentive => {
                best_block(body, cfg, &input);
                names_block(body, cfg, "code");
                body.line(format!("if (bd > {}) {{", cfg.threshold));
                body.indent += 1;
                body.line(format!("code = {PASS_THROUGH};"));
                if n.is_leaf() && !n.code.is_empty() {
                    body.line(format!("{} = pat;", self.pat_slot(n)));
                }
                body.indent -= 1;
                body.line("}".into());
            }
        }
    }

    fn feedback_module(&self, pos: usize, out: &mut String) {
        let n = self.nodes[pos];
        let last = pos + 1 == self.nodes.len();
        let (listen, speak) = match &self.bus_type {
            Some(bt) => (format!("bus:{bt}"), if last { "nil" } else { "bus" }),
            None => ("nil".into(), "nil"),
        };
        let reg = self.register(n);
        let body = if n.code.is_empty() {
            String::new()
        } else {
            format!("  res_{} = {};\n", n.suffix(), self.res_slot(n))
        };
        let _ = writeln!(
            out,
            "module F{}{{listen {listen};}}{{read {};}}\n{{\n{body}}}{{speak {speak};}}{{write {};}}\n",
            n.suffix(),
            decls(&reg),
            names_of(&reg),
        );
    }

    fn source(&self) -> String {
        let mut out = String::new();
        for pos in 0..self.nodes.len() {
            self.module(pos, &mut out);
        }
        if self.feedback {
            for pos in 0..self.nodes.len() {
                self.feedback_module(pos, &mut out);
            }
        }
        let chain = |prefix: &str| {
            self.nodes
                .iter()
                .map(|n| format!("{prefix}{}", n.suffix()))
                .collect::<Vec<_>>()
                .join(" # ")
        };
        let first = self.nodes[0].suffix();
        let guard = format!("inp_{first}.[r_{first}].[1] != {SENTINEL}");
        let body = if self.feedback {
            format!("({}) $ ({})", chain("N"), chain("F"))
        } else {
            chain("N")
        };
        let _ = writeln!(out, "while_st({guard}){{{body}}}");
        out
    }

    fn north(&self) -> Vec<SimpleValue> {
        let rounds = self.nodes[0].inputs.len();
        self.nodes
            .iter()
            .filter_map(|n| {
                let mut parts = Vec::new();
                if n.is_leaf() {
                    let sentinel = vec![SENTINEL; n.classifier.width()];
                    let pats = n.inputs.iter().chain([&sentinel]).map(|p| ints(p)).collect();
                    parts.push(SimpleValue::Star(pats));
                    parts.push(SimpleValue::Int(1));
                }
                if n.code.is_empty() {
                    parts.push(ints(&vec![0; rounds]));
                    if !n.is_leaf() {
                        parts.push(SimpleValue::Int(1));
                    }
                } else if self.feedback {
                    parts.push(SimpleValue::Int(0));
                }
                match parts.len() {
                    0 => None,
                    1 => parts.pop(),
                    _ => Some(SimpleValue::Tuple(parts)),
                }
            })
            .collect()
    }
}

fn ints(p: &[i64]) -> SimpleValue {
    SimpleValue::Star(p.iter().map(|&x| SimpleValue::Int(x)).collect())
}

fn decls(reg: &[(String, &str)]) -> String {
    if reg.is_empty() {
        "nil".into()
    } else {
        reg.iter().map(|(x, t)| format!("{x}:{t}")).collect::<Vec<_>>().join(", ")
    }
}

fn names_of(reg: &[(String, &str)]) -> String {
    if reg.is_empty() {
        "nil".into()
    } else {
        reg.iter().map(|(x, _)| x.as_str()).collect::<Vec<_>>().join(", ")
    }
}

#[derive(Default)]
struct Body {
    text: String,
    indent: usize,
}

impl Body {
    fn line(&mut self, s: String) {
        for _ in 0..=self.indent {
            self.text.push_str("  ");
        }
        self.text.push_str(&s);
        self.text.push('\n');
    }
}

/// Sets `bi` to the 1-based nearest template and `bd` to its distance.
fn best_block(body: &mut Body, cfg: &ClassifierCfg, input: &dyn Fn(usize) -> String) {
    body.line("bi = 0;".into());
    body.line("bd = 0;".into());
    for (i, t) in cfg.templates.iter().enumerate() {
        body.line("d = 0;".into());
        for (j, x) in t.iter().enumerate() {
            body.line(format!("if ({} != {x}) d = d + 1;", input(j + 1)));
        }
        body.line(format!("if (bi == 0 || d < bd) {{ bi = {}; bd = d; }}", i + 1));
    }
}

fn names_block(body: &mut Body, cfg: &ClassifierCfg, target: &str) {
    for (i, name) in cfg.names.iter().enumerate() {
        body.line(format!("if (bi == {}) {target} = {name};", i + 1));
    }
}

/// Source text of the generated program, headed by its north input.
pub fn render(t: &HtmTree, feedback: bool) -> Result<String, HtmError> {
    t.validate()?;
    let g = Gen::new(t, feedback);
    let file = parse_generated(&g.source());
    let north: Vec<String> = g.north().iter().map(ToString::to_string).collect();
    Ok(format!("// north: {}\n\n{}", north.join("; "), print_file(&file)))
}

fn parse_generated(src: &str) -> SourceFile {
    parse_file(src).unwrap_or_else(|e| panic!("generated program does not parse: {e}\n{src}"))
}

/// `while_st` over the `#` chain of node modules in post-order.
pub fn build_forward_program(t: &HtmTree) -> Result<SourceFile, HtmError> {
    t.validate()?;
    Ok(parse_generated(&Gen::new(t, false).source()))
}

/// The forward chain followed, diagonally, by a chain of modules that copy
/// each node's resolution code from the bus into its register.
pub fn build_feedback_program(t: &HtmTree) -> Result<SourceFile, HtmError> {
    t.validate()?;
    Ok(parse_generated(&Gen::new(t, true).source()))
}

/// North input of the generated program: the node registers, leaves loaded
/// with their inputs plus a sentinel pattern.
pub fn north_input(t: &HtmTree, feedback: bool) -> Result<Vec<SimpleValue>, HtmError> {
    t.validate()?;
    Ok(Gen::new(t, feedback).north())
}

/// Root codes, one per round, from the south border of a run.
pub fn root_outputs(t: &HtmTree, south: &[SimpleValue]) -> Option<Vec<i64>> {
    let outs = match (south.last()?, t.root.is_leaf()) {
        (SimpleValue::Tuple(parts), true) => parts.get(2)?,
        (SimpleValue::Tuple(parts), false) => parts.first()?,
        _ => return None,
    };
    match outs {
        SimpleValue::Star(xs) => xs
            .iter()
            .map(|x| match x {
                SimpleValue::Int(n) => Some(*n),
                _ => None,
            })
            .collect(),
        _ => None,
    }
}

/// Resolution code held in a non-root node's register after a feedback run.
pub fn resolution(t: &HtmTree, south: &[SimpleValue], code: &str) -> Option<i64> {
    let g = Gen::new(t, true);
    let mut i = 0;
    for n in &g.nodes {
        if g.register(n).is_empty() {
            continue;
        }
        if n.code == code {
            let v = &south[i];
            let res = match v {
                SimpleValue::Tuple(parts) => parts.last()?,
                v => v,
            };
            return match res {
                SimpleValue::Int(x) => Some(*x),
                _ => None,
            };
        }
        i += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iface::{InterfaceValue, World};
    use crate::interp::{run, Config};
    use crate::lang::typecheck;

    fn cfg(templates: &[&[i64]], mode: Mode, threshold: u64) -> ClassifierCfg {
        let templates: Vec<Vec<i64>> = templates.iter().map(|t| t.to_vec()).collect();
        let names = (1..=templates.len() as i64).collect();
        ClassifierCfg::new(templates, names, mode, threshold)
    }

    #[test]
    fn linearize_regular_tree() {
        let t = HtmTree::regular(&[3, 2], 1);
        assert_eq!(tree_linearize(&t).join(","), "11,12,1,21,22,2,31,32,3,nil");
        assert_eq!(tree_linearize(&HtmTree::regular(&[], 2)), vec!["nil"]);
        let comb = HtmTree::regular(&[1, 1, 1], 1);
        assert_eq!(tree_linearize(&comb), vec!["111", "11", "1", "nil"]);
    }

    #[test]
    fn best_match_examples() {
        let c = cfg(&[&[1, 1, 1], &[2, 2, 2]], Mode::BestFull, 0);
        assert_eq!(best_match(&[2, 2, 2], &c).unwrap(), (2, 0));
        assert_eq!(best_match(&[1, 2, 1], &c).unwrap(), (1, 1));
        assert_eq!(best_match(&[1, 2, 3], &c).unwrap(), (1, 2));
        assert_eq!(
            best_match(&[1, 2], &c),
            Err(HtmError::Length { expected: 3, got: 2 })
        );
    }

    #[test]
    fn prefix_match_examples() {
        let c = cfg(&[&[1, 1, 1], &[2, 2, 2]], Mode::Prefix, 0);
        assert_eq!(prefix_match(&[1, 9, 9], &c).unwrap(), Prefix::Class(1));
        assert_eq!(prefix_match(&[9, 1, 1], &c).unwrap(), Prefix::Ambiguous(1));
        let late = cfg(&[&[1, 2, 3], &[1, 2, 4]], Mode::Prefix, 0);
        assert_eq!(prefix_match(&[1, 2, 4], &late).unwrap(), Prefix::Class(2));
        assert_eq!(prefix_match(&[1, 2, 5], &late).unwrap(), Prefix::Ambiguous(3));
        assert_eq!(classify_node(&[1, 9, 9], &c).unwrap(), Output::Code(1));
    }

    #[test]
    fn attentive_threshold() {
        let c = cfg(&[&[1, 1, 1], &[2, 2, 2]], Mode::FullyAttentive, 0);
        assert_eq!(classify_node(&[2, 2, 2], &c).unwrap(), Output::Code(2));
        let c = cfg(&[&[1, 1, 1], &[2, 2, 2]], Mode::FullyAttentive, 1);
        assert_eq!(
            classify_node(&[1, 3, 3], &c).unwrap(),
            Output::PassThrough(vec![1, 3, 3])
        );
        assert_eq!(classify_node(&[1, 1, 3], &c).unwrap(), Output::Code(1));
    }

    const TREE: &str = r#"
[[node]]
code = "nil"
templates = [[1, 2], [2, 1]]
names = [7, 8]

[[node]]
code = "1"
mode = "attentive"
threshold = 0
templates = [[1, 1], [2, 2]]
names = [1, 2]
inputs = [[1, 1], [2, 3], [2, 2]]

[[node]]
code = "2"
mode = "prefix"
templates = [[5, 5], [5, 6]]
names = [2, 1]
inputs = [[5, 6], [5, 5], [9, 9]]
"#;

    #[test]
    fn tree_file() {
        let t = HtmTree::from_toml(TREE).unwrap();
        assert_eq!(tree_linearize(&t), vec!["1", "2", "nil"]);
        assert_eq!(t.rounds(), 3);
        let bad = TREE.replace("code = \"2\"", "code = \"3\"");
        let err = HtmTree::from_toml(&bad).unwrap_err();
        assert!(matches!(err, HtmError::Schema { line: Some(_), .. }), "{err}");
        let bad = TREE.replace("names = [7, 8]", "names = [7]");
        assert!(matches!(HtmTree::from_toml(&bad), Err(HtmError::Config { .. })));
        let err = HtmTree::from_toml("[[node]]\ncode = 3\n").unwrap_err();
        assert!(matches!(err, HtmError::Schema { line: Some(2), .. }), "{err}");
    }

    fn cascade(t: &HtmTree, round: usize) -> i64 {
        fn go(n: &HtmNode, round: usize) -> Output {
            let input: Vec<i64> = if n.is_leaf() {
                n.inputs[round].clone()
            } else {
                n.children
                    .iter()
                    .map(|c| match go(c, round) {
                        Output::Code(k) => k,
                        Output::PassThrough(p) => {
                            let (i, _) = best_match(&p, &c.classifier).unwrap();
                            c.classifier.names[i - 1]
                        }
                    })
                    .collect()
            };
            classify_node(&input, &n.classifier).unwrap()
        }
        match go(&t.root, round) {
            Output::Code(k) => k,
            Output::PassThrough(_) => PASS_THROUGH,
        }
    }

    fn run_tree(t: &HtmTree, feedback: bool) -> crate::interp::RunResult {
        let f = if feedback {
            build_feedback_program(t).unwrap()
        } else {
            build_forward_program(t).unwrap()
        };
        typecheck(&f).unwrap();
        let north = InterfaceValue::new(World::Spatial, north_input(t, feedback).unwrap());
        run(&f, &InterfaceValue::nil(World::Temporal), &north, Config::default()).unwrap()
    }

    #[test]
    fn forward_matches_cascade() {
        let t = HtmTree::from_toml(TREE).unwrap();
        for feedback in [false, true] {
            let r = run_tree(&t, feedback);
            let outs = root_outputs(&t, &r.south.items).unwrap();
            let expected: Vec<i64> = (0..3).map(|k| cascade(&t, k)).collect();
            assert_eq!(outs, expected);
        }
    }

    #[test]
    fn pass_through_is_resolved_by_parent() {
        let t = HtmTree::from_toml(TREE).unwrap();
        // round 2: leaf 1 sees [2, 3], distance 1 > 0, so node nil resolves it to 2
        let short = TREE.replace("[[1, 1], [2, 3], [2, 2]]", "[[1, 1], [2, 3]]")
            .replace("[[5, 6], [5, 5], [9, 9]]", "[[5, 6], [5, 5]]");
        let t2 = HtmTree::from_toml(&short).unwrap();
        let r = run_tree(&t2, true);
        assert_eq!(resolution(&t2, &r.south.items, "1"), Some(2));
        let r = run_tree(&t, true);
        assert_eq!(resolution(&t, &r.south.items, "1"), Some(0));
    }

    #[test]
    fn single_node_tree() {
        let mut t = HtmTree::regular(&[], 3);
        t.root.inputs = vec![vec![1, 1, 2], vec![2, 2, 2]];
        let r = run_tree(&t, false);
        assert_eq!(root_outputs(&t, &r.south.items).unwrap(), vec![1, 2]);
        let f = build_feedback_program(&t).unwrap();
        assert_eq!(crate::lang::print_program(&f.main), "while_st(inp_root.[r_root].[1] != -1){Nroot $ Froot}");
    }

    #[test]
    fn regular_tree_rounds() {
        let mut t = HtmTree::regular(&[3, 2], 2);
        fn set(n: &mut HtmNode) {
            if n.is_leaf() {
                let d = n.code.as_bytes()[1] as i64 - b'0' as i64;
                n.inputs = vec![vec![d; 2], vec![3 - d; 2], vec![1, 2]];
            }
            for c in &mut n.children {
                set(c);
            }
        }
        set(&mut t.root);
        let f = build_forward_program(&t).unwrap();
        assert_eq!(f.modules.len(), 10);
        let r = run_tree(&t, false);
        let outs = root_outputs(&t, &r.south.items).unwrap();
        assert_eq!(outs, (0..3).map(|k| cascade(&t, k)).collect::<Vec<_>>());
        assert!(render(&t, false).unwrap().starts_with("// north: ([[1, 1], [2, 2], [1, 2], [-1, -1]], 1);"));
    }
}
