//! Capital requirements for a few acceptance sets over the same position.

use capreq::acceptance::{es_direct, var_direct, AcceptanceSet};
use capreq::model::{validate_market, FiniteSampleSpace, ProblemInstance};
use capreq::rational::{fmt_rat, int, rat, Rat};
use capreq::risk_engine::rho;

fn main() -> capreq::Result<()> {
    let space =
        FiniteSampleSpace::with_probs(vec![rat(1, 10), rat(2, 10), rat(3, 10), rat(4, 10)])?;
    let cash = validate_market(&space, vec![vec![int(1)]; 4], vec![int(1)])?;
    let x: Vec<Rat> = vec![int(-5), int(-1), int(2), int(3)];

    let sets = [
        (
            "ES 1/4",
            AcceptanceSet::ExpectedShortfall { alpha: rat(1, 4) },
        ),
        ("VaR 1/4", AcceptanceSet::ValueAtRisk { alpha: rat(1, 4) }),
        (
            "worst case on atoms 0,1",
            AcceptanceSet::Scenario { event: vec![0, 1] },
        ),
        (
            "two test measures",
            AcceptanceSet::GeneralizedScenarios {
                measures: vec![
                    vec![rat(1, 4); 4],
                    vec![rat(1, 2), rat(1, 2), int(0), int(0)],
                ],
                floors: vec![int(0), int(-2)],
            },
        ),
    ];
    for (name, acc) in sets {
        let inst = ProblemInstance::new(name, space.clone(), cash.clone(), acc)?;
        let r = rho(&inst, &x)?;
        println!(
            "{name:<26} rho = {:>6}  (attained: {})",
            fmt_rat(&r.value),
            r.attained
        );
    }
    println!(
        "direct ES  = {}",
        fmt_rat(&es_direct(&x, &rat(1, 4), &space))
    );
    println!(
        "direct VaR = {}",
        fmt_rat(&var_direct(&x, &rat(1, 4), &space))
    );

    // A second eligible asset makes hedging cheaper than cash alone.
    let hedged = validate_market(
        &space,
        vec![
            vec![int(1), int(2)],
            vec![int(1), int(1)],
            vec![int(1), int(0)],
            vec![int(1), int(-1)],
        ],
        vec![int(1), rat(1, 2)],
    )?;
    let inst = ProblemInstance::new(
        "ES with bond",
        space,
        hedged,
        AcceptanceSet::ExpectedShortfall { alpha: rat(1, 4) },
    )?;
    println!(
        "ES 1/4 with a second asset: rho = {}",
        fmt_rat(&rho(&inst, &x)?.value)
    );
    Ok(())
}
