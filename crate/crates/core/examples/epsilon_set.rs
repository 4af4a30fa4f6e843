//! Nearly optimal portfolios and how they react to a small shock.

use capreq::fixtures::FixtureId;
use capreq::rational::{fmt_rat, fmt_vec, int, rat, zeros};
use capreq::risk_engine::{epsilon_optimal_set, optimal_set};

fn main() -> capreq::Result<()> {
    let inst = FixtureId::P2VarLsc.build();
    let eps = rat(1, 10);
    for x in [zeros(3), vec![int(0), rat(-1, 20), int(0)]] {
        let exact = optimal_set(&inst, &x)?;
        let set = epsilon_optimal_set(&inst, &x, &eps)?;
        println!(
            "X = {:?}: rho = {}, {} piece(s)",
            fmt_vec(&x),
            fmt_rat(&set.rho),
            set.pieces.len()
        );
        for (branch, p) in &set.pieces {
            let v = p.vrep()?;
            println!(
                "  branch {branch}: {} vertices, {} rays",
                v.vertices.len(),
                v.rays.len()
            );
        }
        let far = vec![int(0), int(-5)];
        println!(
            "  (0,-5) optimal: {}, within 1/10: {}",
            exact.contains(&far),
            set.contains(&far)
        );
    }
    println!(
        "{}",
        epsilon_optimal_set(&inst, &zeros(3), &eps)?.strictness_note
    );
    Ok(())
}
