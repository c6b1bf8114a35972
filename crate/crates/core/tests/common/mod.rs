#![allow(dead_code)]

pub mod asts;
pub mod oracles;
pub mod programs;
pub mod scenarios;
pub mod trees;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
