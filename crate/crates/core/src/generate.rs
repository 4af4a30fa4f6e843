//! Seeded random polyhedral instances for property and stress runs.
//!
//! Acceptance rows have nonnegative integer coefficients and nonpositive
//! right-hand sides, so every generated set is closed, convex, monotone and
//! contains zero. The first asset is always cash priced at 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::acceptance::{AcceptanceSet, Row};
use crate::diagnostics::random_position;
use crate::model::{market_from_assets, FiniteSampleSpace, ProblemInstance};
use crate::rational::{int, rat, Rat};
use crate::risk_engine::rho;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorOptions {
    pub max_atoms: usize,
    pub max_rows: usize,
    pub max_assets: usize,
}

impl Default for GeneratorOptions {
    fn default() -> Self {
        GeneratorOptions {
            max_atoms: 5,
            max_rows: 8,
            max_assets: 3,
        }
    }
}

fn random_rows(rng: &mut impl Rng, n: usize, max_rows: usize) -> Vec<Row> {
    let count = rng.gen_range(1..=max_rows);
    let mut rows = Vec::with_capacity(count);
    while rows.len() < count {
        let phi: Vec<Rat> = (0..n).map(|_| int(rng.gen_range(0..3))).collect();
        if phi.iter().all(|c| *c == int(0)) {
            continue;
        }
        rows.push(Row {
            phi,
            rhs: int(rng.gen_range(-3..=0)),
        });
    }
    rows
}

fn random_assets(rng: &mut impl Rng, n: usize, max_assets: usize) -> Vec<(Vec<Rat>, Rat)> {
    let big_n = rng.gen_range(1..=max_assets.min(n));
    let mut assets = vec![(vec![int(1); n], int(1))];
    for _ in 1..big_n {
        let payoff = (0..n).map(|_| int(rng.gen_range(-2..=2))).collect();
        let price = rat(rng.gen_range(-2..=2), 2);
        assets.push((payoff, price));
    }
    assets
}

/// Draws instances until one has a finite requirement at zero.
pub fn random_instance(rng: &mut impl Rng, opts: &GeneratorOptions) -> ProblemInstance {
    loop {
        let n = rng.gen_range(2..=opts.max_atoms.max(2));
        let space = FiniteSampleSpace::uniform(n);
        let Ok(market) = market_from_assets(&space, &random_assets(rng, n, opts.max_assets)) else {
            continue;
        };
        let acc = AcceptanceSet::Polyhedral {
            rows: random_rows(rng, n, opts.max_rows),
        };
        let Ok(inst) = ProblemInstance::new("generated", space, market, acc) else {
            continue;
        };
        if rho(&inst, &vec![int(0); n]).is_ok() {
            return inst;
        }
    }
}

/// An instance together with a probe base and direction.
#[derive(Clone, Debug)]
pub struct GeneratedCase {
    pub instance: ProblemInstance,
    pub base: Vec<Rat>,
    pub direction: Vec<Rat>,
}

pub fn generator_suite(seed: u64, count: usize, opts: &GeneratorOptions) -> Vec<GeneratedCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let mut instance = random_instance(&mut rng, opts);
            instance.name = format!("generated-{seed}-{i}");
            let n = instance.n_atoms();
            let base = random_position(&mut rng, n, 2, 8);
            let direction = random_position(&mut rng, n, 1, 4);
            GeneratedCase {
                instance,
                base,
                direction,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_deterministic_and_within_bounds() {
        let opts = GeneratorOptions::default();
        let a = generator_suite(7, 10, &opts);
        let b = generator_suite(7, 10, &opts);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.instance.compiled, y.instance.compiled);
            assert_eq!(x.base, y.base);
            let n = x.instance.n_atoms();
            assert!((2..=5).contains(&n));
            assert!(x.instance.n_assets() <= 3);
            let pa = x.instance.compiled.polyhedral().unwrap();
            assert_eq!(pa.branches.len(), 1);
            assert!(pa.branches[0].ineqs.len() <= 8);
        }
    }
}
