//! Fixtures shared by the benchmarks.

use agapia::htm::{HtmNode, HtmTree};
use agapia::lang::parse_file;
use agapia::{InterfaceValue, SimpleValue, SourceFile, World};

pub const PERFECT1: &str = include_str!("../../cli/corpus/perfect1.agapia");
pub const PERFECT2: &str = include_str!("../../cli/corpus/perfect2.agapia");

pub fn file(src: &str) -> SourceFile {
    parse_file(src).expect("fixture parses")
}

pub fn north(items: Vec<SimpleValue>) -> InterfaceValue {
    InterfaceValue::new(World::Spatial, items)
}

pub fn west_nil() -> InterfaceValue {
    InterfaceValue::nil(World::Temporal)
}

/// Regular tree whose leaves cycle through their templates for `rounds` rounds.
pub fn regular_tree(fanouts: &[usize], width: usize, rounds: usize) -> HtmTree {
    fn feed(n: &mut HtmNode, rounds: usize) {
        if n.is_leaf() {
            let ts = n.classifier.templates.clone();
            n.inputs = (0..rounds).map(|r| ts[r % ts.len()].clone()).collect();
        }
        n.children.iter_mut().for_each(|c| feed(c, rounds));
    }
    let mut t = HtmTree::regular(fanouts, width);
    feed(&mut t.root, rounds);
    t
}
