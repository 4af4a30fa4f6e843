//! Good deals, existence, uniqueness, upper semicontinuity and the
//! decomposition check for every built-in fixture.

use capreq::diagnostics::{
    deal_check, decomposition_check, existence_report, uniqueness_report, usc_report, UscVerdict,
    DEFAULT_UNIQUENESS_SAMPLES,
};
use capreq::fixtures::FixtureId;
use capreq::rational::{fmt_vec, int, zeros};

fn main() -> capreq::Result<()> {
    for id in FixtureId::ALL {
        let inst = id.build();
        let deals = deal_check(&inst)?;
        println!("{id}");
        println!(
            "  good deal {:?}, scalable good deal {:?}",
            deals.good_deal.as_deref().map(fmt_vec),
            deals.scalable_good_deal.as_deref().map(fmt_vec)
        );
        let e = existence_report(&inst)?;
        println!("  existence {:?}: {}", e.verdict, e.reasons.join("; "));
        match usc_report(&inst)?.verdict {
            UscVerdict::NotUsc { scalable_witness } => {
                println!("  usc fails along {:?}", fmt_vec(&scalable_witness))
            }
            v => println!("  usc {v:?}"),
        }
        if inst.compiled.polyhedral().is_some() {
            let u = uniqueness_report(&inst, DEFAULT_UNIQUENESS_SAMPLES, 7)?;
            println!(
                "  uniqueness: certificate {:?}, witness {:?} after {} samples",
                u.global_certificate,
                u.falsification_witness.map(|(x, d)| (fmt_vec(&x), d)),
                u.samples_checked
            );
        }
    }
    let p1 = FixtureId::P1R3Unique.build();
    let d = decomposition_check(&p1, &zeros(3), &[int(1), int(-1), int(2)])?;
    println!(
        "p1 decomposition along a segment: holds {}, vertex norm {} within bound {}",
        d.holds(),
        d.max_vertex_norm,
        d.common_bound
    );
    Ok(())
}
