use agapia::htm::{ClassifierCfg, HtmNode, HtmTree, Mode};
use rand::seq::SliceRandom;
use rand::Rng as _;

use super::Rng;

fn classifier(rng: &mut Rng, width: usize) -> ClassifierCfg {
    let cap = 4usize.pow(width.min(3) as u32);
    let want = rng.gen_range(1..=3).min(cap);
    let mut templates: Vec<Vec<i64>> = Vec::new();
    while templates.len() < want {
        let t: Vec<i64> = (0..width).map(|_| rng.gen_range(0..4)).collect();
        if !templates.contains(&t) {
            templates.push(t);
        }
    }
    let mut pool: Vec<i64> = (0..6).collect();
    pool.shuffle(rng);
    let names = pool[..want].to_vec();
    let mode = *[Mode::BestFull, Mode::Prefix, Mode::FullyAttentive].choose(rng).unwrap();
    ClassifierCfg::new(templates, names, mode, rng.gen_range(0..2))
}

fn node(rng: &mut Rng, code: String, depth: usize, max_depth: usize, max_fanout: usize, rounds: usize) -> HtmNode {
    let fanout = if depth + 1 >= max_depth || (depth > 0 && rng.gen_range(0..3) == 0) {
        0
    } else {
        rng.gen_range(1..=max_fanout)
    };
    let children: Vec<HtmNode> = (1..=fanout)
        .map(|i| node(rng, format!("{code}{i}"), depth + 1, max_depth, max_fanout, rounds))
        .collect();
    let width = if fanout == 0 { rng.gen_range(1..=4) } else { fanout };
    let inputs = if fanout == 0 {
        (0..rounds).map(|_| (0..width).map(|_| rng.gen_range(0..4)).collect()).collect()
    } else {
        Vec::new()
    };
    HtmNode {
        code,
        classifier: classifier(rng, width),
        inputs,
        children,
    }
}

/// Random valid tree of depth at most `max_depth` with `rounds` inputs per leaf.
pub fn tree(rng: &mut Rng, max_depth: usize, max_fanout: usize, rounds: usize) -> HtmTree {
    let t = HtmTree {
        root: node(rng, String::new(), 0, max_depth, max_fanout, rounds),
    };
    t.validate().unwrap();
    t
}
