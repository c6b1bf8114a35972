//! The shipped corpus and its golden input/output pairs.

use agapia::interp::Config;
use agapia::SimpleValue;
use serde::Deserialize;

use crate::{execute, htm_program, load, run_htm, CliError, Format, RunConfig};

pub enum Source {
    Program(&'static str),
    Htm { tree: &'static str, feedback: bool },
}

pub struct Example {
    pub name: &'static str,
    pub about: &'static str,
    pub source: Source,
    pub golden: &'static str,
}

macro_rules! corpus {
    ($f:literal) => {
        include_str!(concat!("../corpus/", $f))
    };
}

pub const EXAMPLES: &[Example] = &[
    Example {
        name: "perfect1",
        about: "perfect-number test, rows as macro-steps",
        source: Source::Program(corpus!("perfect1.agapia")),
        golden: corpus!("golden/perfect1.json"),
    },
    Example {
        name: "perfect2",
        about: "perfect-number test, columns as stream processes",
        source: Source::Program(corpus!("perfect2.agapia")),
        golden: corpus!("golden/perfect2.json"),
    },
    Example {
        name: "htm-forward",
        about: "two-level regular HTM tree, forward flow",
        source: Source::Htm {
            tree: corpus!("htm-regular.toml"),
            feedback: false,
        },
        golden: corpus!("golden/htm-forward.json"),
    },
    Example {
        name: "htm-feedback",
        about: "HTM tree with a pass-through leaf, forward and feedback flow",
        source: Source::Htm {
            tree: corpus!("htm-feedback.toml"),
            feedback: true,
        },
        golden: corpus!("golden/htm-feedback.json"),
    },
    Example {
        name: "relay",
        about: "temporal relay chain",
        source: Source::Program(corpus!("relay.agapia")),
        golden: corpus!("golden/relay.json"),
    },
    Example {
        name: "countdown",
        about: "while_t summing a countdown",
        source: Source::Program(corpus!("countdown.agapia")),
        golden: corpus!("golden/countdown.json"),
    },
    Example {
        name: "diagonal",
        about: "diagonal composition and its wiring cells",
        source: Source::Program(corpus!("diagonal.agapia")),
        golden: corpus!("golden/diagonal.json"),
    },
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Golden {
    #[serde(default)]
    pub cases: Vec<Case>,
    /// Root code per round, for HTM examples.
    #[serde(default)]
    pub outputs: Option<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    #[serde(default)]
    pub west: Vec<SimpleValue>,
    #[serde(default)]
    pub north: Vec<SimpleValue>,
    pub east: Vec<SimpleValue>,
    pub south: Vec<SimpleValue>,
}

pub fn cmd_list() -> String {
    EXAMPLES.iter().map(|e| format!("{:<13} {}\n", e.name, e.about)).collect()
}

fn show(v: &[SimpleValue]) -> String {
    agapia::InterfaceValue::new(agapia::World::Spatial, v.to_vec()).to_string()
}

/// Checks one example against its goldens; returns one mismatch line per
/// failing case.
pub fn check(e: &Example) -> Result<Vec<String>, CliError> {
    let golden: Golden = serde_json::from_str(e.golden)
        .map_err(|err| CliError::Diagnostics(format!("{}: golden file: {err}", e.name)))?;
    let mut bad = Vec::new();
    match e.source {
        Source::Program(src) => {
            let f = load(e.name, src)?;
            for (i, c) in golden.cases.iter().enumerate() {
                let cfg = RunConfig {
                    north: c.north.clone(),
                    west: c.west.clone(),
                    format: Format::Structured,
                    config: Config::default(),
                };
                let r = execute(&f, &cfg)?;
                for (side, want, got) in [("east", &c.east, &r.east.items), ("south", &c.south, &r.south.items)] {
                    if want != got {
                        bad.push(format!(
                            "case {i} (north {}, west {}): {side} expected {}, got {}",
                            show(&c.north),
                            show(&c.west),
                            show(want),
                            show(got)
                        ));
                    }
                }
            }
        }
        Source::Htm { tree, feedback } => {
            let (t, text) = htm_program(e.name, tree, feedback)?;
            let got = run_htm(&t, &text, feedback)?;
            let want = golden.outputs.unwrap_or_default();
            if got != want {
                bad.push(format!("root outputs expected {want:?}, got {got:?}"));
            }
        }
    }
    Ok(bad)
}

/// Report text and whether every example matched.
pub fn cmd_run_all() -> (String, bool) {
    let mut out = String::new();
    let mut all = true;
    for e in EXAMPLES {
        match check(e) {
            Ok(bad) if bad.is_empty() => out.push_str(&format!("ok   {}\n", e.name)),
            Ok(bad) => {
                all = false;
                out.push_str(&format!("FAIL {}\n", e.name));
                for b in bad {
                    out.push_str(&format!("     {b}\n"));
                }
            }
            Err(err) => {
                all = false;
                out.push_str(&format!("FAIL {}: {err}\n", e.name));
            }
        }
    }
    (out, all)
}
