//! Random seam-consistent scenarios whose borders line up for composition.

use agapia::scenario::{Cell, Items, Scenario};
use agapia::SimpleValue;
use rand::Rng as _;

use super::Rng;

pub fn value(rng: &mut Rng) -> SimpleValue {
    match rng.gen_range(0..8) {
        0 => SimpleValue::Bool(rng.gen()),
        1 => SimpleValue::Tuple(vec![SimpleValue::Int(rng.gen_range(0..5)), SimpleValue::Bool(rng.gen())]),
        _ => SimpleValue::Int(rng.gen_range(-3..10)),
    }
}

/// `n` groups, each nil or a single item.
pub fn groups(rng: &mut Rng, n: usize) -> Vec<Items> {
    (0..n)
        .map(|_| if rng.gen_range(0..3) == 0 { vec![] } else { vec![value(rng)] })
        .collect()
}

/// Same non-nil groups in the same order, with nil groups dropped and
/// reinserted at random. Never empty.
pub fn with_nils(rng: &mut Rng, gs: &[Items]) -> Vec<Items> {
    let mut out = Vec::new();
    for g in gs.iter().filter(|g| !g.is_empty()) {
        while rng.gen_range(0..4) == 0 {
            out.push(vec![]);
        }
        out.push(g.clone());
    }
    while out.is_empty() || rng.gen_range(0..4) == 0 {
        out.push(vec![]);
    }
    out
}

/// A grid of module cells with the given west and north borders and random
/// inner seams and outgoing borders.
pub fn grid(rng: &mut Rng, label: &str, west: Vec<Items>, north: Vec<Items>) -> Scenario {
    let (rows, cols) = (west.len(), north.len());
    assert!(rows > 0 && cols > 0);
    let mut h: Vec<Vec<Items>> = west.into_iter().map(|w| vec![w]).collect();
    for row in &mut h {
        row.extend(groups(rng, cols));
    }
    let mut v: Vec<Vec<Items>> = vec![north];
    for _ in 0..rows {
        v.push(groups(rng, cols));
    }
    let cells = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| {
                    Cell::module(
                        format!("{label}{r}{c}"),
                        h[r][c].clone(),
                        v[r][c].clone(),
                        h[r][c + 1].clone(),
                        v[r + 1][c].clone(),
                    )
                })
                .collect()
        })
        .collect();
    Scenario::from_rows(cells).unwrap()
}

pub fn free(rng: &mut Rng, label: &str) -> Scenario {
    let (r, c) = (rng.gen_range(1..4), rng.gen_range(1..4));
    let west = groups(rng, r);
    let north = groups(rng, c);
    grid(rng, label, west, north)
}

/// A scenario that can sit right of `f`.
pub fn right_of(rng: &mut Rng, f: &Scenario, label: &str) -> Scenario {
    let west = with_nils(rng, &f.east_groups());
    let cols = rng.gen_range(1..4);
    let north = groups(rng, cols);
    grid(rng, label, west, north)
}

/// A scenario that can sit below `f`.
pub fn below(rng: &mut Rng, f: &Scenario, label: &str) -> Scenario {
    let north = with_nils(rng, &f.south_groups());
    let rows = rng.gen_range(1..4);
    let west = groups(rng, rows);
    grid(rng, label, west, north)
}

/// A scenario fed by both the east and the south of `f`.
pub fn diagonal_of(rng: &mut Rng, f: &Scenario, label: &str) -> Scenario {
    let west = with_nils(rng, &f.east_groups());
    let north = with_nils(rng, &f.south_groups());
    grid(rng, label, west, north)
}
