#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use capreq::generate::{random_instance, GeneratorOptions};
use capreq::model::ProblemInstance;
use capreq::rational::{int, rat, Rat};

pub fn instance(seed: u64) -> ProblemInstance {
    random_instance(
        &mut ChaCha8Rng::seed_from_u64(seed),
        &GeneratorOptions::default(),
    )
}

pub fn rats(v: &[i64], den: i64) -> Vec<Rat> {
    v.iter().map(|&x| rat(x, den)).collect()
}

pub fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| int(x)).collect()
}
