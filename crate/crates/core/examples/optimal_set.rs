//! Optimal portfolios as vertices, rays and lineality, for a bounded and an
//! unbounded case.

use capreq::fixtures::FixtureId;
use capreq::rational::{fmt_mat, fmt_rat, int, rat, zeros};
use capreq::risk_engine::optimal_set;

fn main() -> capreq::Result<()> {
    let p1 = FixtureId::P1R3Unique.build();
    let s = optimal_set(&p1, &zeros(3))?;
    println!(
        "{}: rho = {}, vertices {:?}",
        p1.name,
        fmt_rat(&s.rho),
        fmt_mat(&s.vertices())
    );

    let var = FixtureId::P2VarLsc.build();
    let s = optimal_set(&var, &zeros(3))?;
    println!(
        "{}: rho = {}, vertices {:?}, rays {:?} (portfolio coordinates: cash, Z)",
        var.name,
        fmt_rat(&s.rho),
        fmt_mat(&s.vertices()),
        fmt_mat(&s.rays())
    );
    let payoff_rays: Vec<_> = s.rays().iter().map(|r| var.market.payoff(r)).collect();
    println!("  ray payoffs {:?}", fmt_mat(&payoff_rays));

    // A small loss on F collapses the ray.
    for n in [1, 10, 100] {
        let x = vec![int(0), rat(-1, n), int(0)];
        let s = optimal_set(&var, &x)?;
        println!(
            "  X = -1/{n} on F: vertices {:?}, bounded {}",
            fmt_mat(&s.vertices()),
            s.is_bounded()
        );
    }

    let star = FixtureId::P3Star2d.build();
    let s = optimal_set(&star, &zeros(2))?;
    println!(
        "{}: empty = {}, reason: {}",
        star.name,
        s.is_empty(),
        s.certificate.unwrap_or_default()
    );
    Ok(())
}
