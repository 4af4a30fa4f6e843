//! Random polyhedral instances and a stability sweep over them.

use capreq::diagnostics::{lsc_probe, ProbeOptions};
use capreq::generate::{generator_suite, GeneratorOptions};
use capreq::rational::fmt_rat;
use capreq::risk_engine::rho;

fn main() -> capreq::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(11);
    let opts = ProbeOptions {
        parallel: true,
        ..ProbeOptions::default()
    };
    for case in generator_suite(seed, 12, &GeneratorOptions::default()) {
        let inst = &case.instance;
        let r = rho(inst, &case.base)?;
        let p = lsc_probe(inst, &case.base, &case.direction, &opts)?;
        println!(
            "{:<16} n={} N={} rho={:>8} {} first={} last={}",
            inst.name,
            inst.n_atoms(),
            inst.n_assets(),
            fmt_rat(&r.value),
            p.classification.name(),
            fmt_rat(&p.deficits_lsc[0]),
            fmt_rat(p.deficits_lsc.last().unwrap())
        );
    }
    Ok(())
}
