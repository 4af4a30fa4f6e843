//! Exponential-utility acceptance: numerical requirement with bounds and a
//! KKT check.

use capreq::acceptance::AcceptanceSet;
use capreq::model::{validate_market, FiniteSampleSpace, ProblemInstance};
use capreq::rational::{fmt_decimal, int, rat};
use capreq::risk_engine::{optimal_set, smooth_rho, SmoothOptions};

fn main() -> capreq::Result<()> {
    let space = FiniteSampleSpace::uniform(2);
    let cash = validate_market(&space, vec![vec![int(1)]; 2], vec![int(1)])?;
    let acc = AcceptanceSet::ExpUtility {
        a: int(1),
        floor: int(0),
    };
    let inst = ProblemInstance::new("exp utility", space.clone(), cash, acc.clone())?;

    let x = [int(-1), int(1)];
    let r = smooth_rho(&inst, &x, &SmoothOptions::default())?;
    println!(
        "rho = {:.12} (ln cosh 1 = {:.12})",
        r.value,
        1f64.cosh().ln()
    );
    println!(
        "lower bound {:.12}, {} cutting-plane rounds",
        r.lower_bound, r.iterations
    );
    println!(
        "KKT residual {:.2e}, multiplier {:.6}",
        r.kkt_residual, r.multiplier
    );

    let two = validate_market(
        &space,
        vec![vec![int(1), int(1)], vec![int(1), int(-1)]],
        vec![int(1), rat(1, 5)],
    )?;
    let inst = ProblemInstance::new("exp utility, two assets", space, two, acc)?;
    let set = optimal_set(&inst, &x)?;
    println!(
        "two assets: rho ~ {}, portfolio ~ {:?}",
        fmt_decimal(&set.rho, 8),
        set.vertices()[0]
            .iter()
            .map(|v| fmt_decimal(v, 8))
            .collect::<Vec<_>>()
    );
    Ok(())
}
