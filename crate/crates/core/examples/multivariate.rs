//! Two entities flattened into one position space, with a joint ES
//! constraint per entity expressed as generalized scenarios.

use capreq::acceptance::AcceptanceSet;
use capreq::model::{flatten_multivariate, validate_market, FiniteSampleSpace, ProblemInstance};
use capreq::rational::{fmt_mat, fmt_rat, int, rat};
use capreq::risk_engine::{optimal_set, rho};

fn main() -> capreq::Result<()> {
    let s = FiniteSampleSpace::uniform(2);
    let cash = validate_market(&s, vec![vec![int(1)]; 2], vec![int(1)])?;
    let (space, market) = flatten_multivariate(&[s.clone(), s], &[cash.clone(), cash])?;
    println!(
        "labels {:?}, probabilities {:?}",
        space.labels(),
        space.probs().iter().map(fmt_rat).collect::<Vec<_>>()
    );

    // Each entity must have nonnegative expected value under its own block.
    let half = rat(1, 2);
    let acc = AcceptanceSet::GeneralizedScenarios {
        measures: vec![
            vec![half.clone(), half.clone(), int(0), int(0)],
            vec![int(0), int(0), half.clone(), half],
        ],
        floors: vec![int(0), int(0)],
    };
    let inst = ProblemInstance::new("two entities", space, market, acc)?;
    let x = vec![int(-3), int(1), int(2), int(0)];
    let r = rho(&inst, &x)?;
    let set = optimal_set(&inst, &x)?;
    println!(
        "rho = {}, cash per entity {:?}",
        fmt_rat(&r.value),
        fmt_mat(&set.vertices())
    );
    Ok(())
}
