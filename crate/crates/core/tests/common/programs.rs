//! Random well-typed programs over a fixed module table, and inputs for them.
//!
//! Spatial counters are called `k`, temporal ones `q`; only the counter
//! modules touch them and they only count down, so every loop whose guard
//! typechecks terminates.

use agapia::interp::{run, run_program, Config, InterpError, RunResult};
use agapia::lang::{parse_expr, parse_file, typecheck, Program, SourceFile};
use agapia::{BorderTypes, InterfaceValue, SimpleValue, World};
use rand::seq::SliceRandom;
use rand::Rng as _;

use super::Rng;

pub const MODULES: &str = "
module A{listen a:tn;}{read b:sn;}{b = (a + b) % 7; a = (a * 3 + 1) % 5;}{speak a;}{write b;}
module C{listen a:tn;}{read k:sn;}{a = (a + k) % 7; k = k - 1;}{speak a;}{write k;}
module D{listen q:tn;}{read b:sn;}{b = (b + q) % 7; q = q - 1;}{speak q;}{write b;}
module E{listen q:tn;}{read k:sn;}{q = q - 1; k = k - 1;}{speak q;}{write k;}
module P{listen nil;}{read b:sn;}{t:tn; t = b + 1;}{speak t;}{write b;}
module Q{listen a:tn;}{read nil;}{s:sn; s = a % 3;}{speak nil;}{write s;}
module N{listen nil;}{read nil;}{}{speak nil;}{write nil;}
";

const LEAVES: &[&str] = &["A", "A", "C", "C", "D", "D", "E", "P", "Q", "N"];
const IF_GUARDS: &[&str] = &["a > 2", "b < 3", "k > 1", "q > 1", "a == b", "true"];
const ST_GUARDS: &[&str] = &["k > 0 && q > 0", "k > 0", "q > 0"];

pub fn program(rng: &mut Rng, depth: u32, loops: u32) -> Program {
    if depth == 0 || rng.gen_range(0..4) == 0 {
        return Program::module(LEAVES.choose(rng).unwrap());
    }
    let sub = |rng: &mut Rng, loops| program(rng, depth - 1, loops);
    let guard = |g: &str| parse_expr(g).unwrap();
    let pick = if loops == 0 { rng.gen_range(0..4) } else { rng.gen_range(0..7) };
    match pick {
        0 => Program::hpar(sub(rng, loops), sub(rng, loops)),
        1 => Program::vseq(sub(rng, loops), sub(rng, loops)),
        2 => Program::dcomp(sub(rng, loops), sub(rng, loops)),
        3 => {
            let g = guard(IF_GUARDS.choose(rng).unwrap());
            Program::if_(g, sub(rng, loops), sub(rng, loops))
        }
        4 => Program::while_t(guard("k > 0"), sub(rng, loops - 1)),
        5 => Program::while_s(guard("q > 0"), sub(rng, loops - 1)),
        _ => Program::while_st(guard(ST_GUARDS.choose(rng).unwrap()), sub(rng, loops - 1)),
    }
}

fn table() -> SourceFile {
    parse_file(&format!("{MODULES} nil")).unwrap()
}

/// A program that typechecks, with its type. At least one combinator deep.
pub fn well_typed(rng: &mut Rng) -> (SourceFile, BorderTypes) {
    let mut file = table();
    loop {
        file.main = program(rng, 4, 2);
        if file.main.module_refs().len() < 2 {
            continue;
        }
        if let Ok(ty) = typecheck(&file) {
            return (file, ty);
        }
    }
}

pub fn with_main(main: &str) -> SourceFile {
    parse_file(&format!("{MODULES} {main}")).unwrap()
}

fn stream(rng: &mut Rng, world: World, n: usize) -> InterfaceValue {
    InterfaceValue::new(world, (0..n).map(|_| SimpleValue::Int(rng.gen_range(0..5))).collect())
}

pub enum Sampled {
    /// Run against exactly the inputs a first, generous run consumed.
    Ran {
        west: InterfaceValue,
        north: InterfaceValue,
        result: Result<RunResult, InterpError>,
    },
    /// The generous run itself failed (too few items, round cap).
    Discarded(InterpError),
}

pub fn config() -> Config {
    Config {
        step_budget: 10_000,
        round_cap: 200,
    }
}

/// Runs `file` on 500 random items per side, then reruns it, through the
/// checked entry point, on the items the first run consumed.
pub fn run_exact(rng: &mut Rng, file: &SourceFile) -> Sampled {
    let west = stream(rng, World::Temporal, 500);
    let north = stream(rng, World::Spatial, 500);
    match run_program(file, &file.main, &west, &north, config()) {
        Err(e) => Sampled::Discarded(e),
        Ok(first) => {
            let west = first.scenario.west();
            let north = first.scenario.north();
            let result = run(file, &west, &north, config());
            Sampled::Ran { west, north, result }
        }
    }
}
