//! Perturbation probes: the VaR fixture fails lower semicontinuity at 0,
//! while its nearly optimal sets recover.

use capreq::diagnostics::{epsilon_lsc_probe, lsc_probe, ProbeOptions};
use capreq::fixtures::FixtureId;
use capreq::rational::{int, rat, zeros};

fn main() -> capreq::Result<()> {
    let inst = FixtureId::P2VarLsc.build();
    let dir = vec![int(0), int(-1), int(0)];
    let opts = ProbeOptions {
        k_max: 8,
        parallel: true,
        ..ProbeOptions::default()
    };

    let exact = lsc_probe(&inst, &zeros(3), &dir, &opts)?;
    println!("optimal sets: {:?}", exact.classification);
    print!("{}", exact.csv());

    let relaxed = epsilon_lsc_probe(&inst, &zeros(3), &dir, &rat(1, 10), &opts)?;
    println!("1/10-optimal sets: {:?}", relaxed.classification);
    print!("{}", relaxed.csv());
    println!("{:#?}", relaxed.hypotheses);
    Ok(())
}
