//! The set of positions acceptable at zero cost, and the requirement read
//! off it.

use capreq::fixtures::FixtureId;
use capreq::rational::{fmt_mat, fmt_rat, zeros};
use capreq::risk_engine::{augmented_set, rho, rho_via_augmented, Closedness};

fn main() -> capreq::Result<()> {
    for id in [
        FixtureId::P1R3Unique,
        FixtureId::P2VarLsc,
        FixtureId::P3Star2d,
    ] {
        let inst = id.build();
        let aug = augmented_set(&inst)?;
        println!("{id}:");
        match &aug.closedness {
            Closedness::Closed => println!("  closed, {} piece(s)", aug.pieces.len()),
            Closedness::NotClosed { formula } => println!("  not closed: {formula}"),
        }
        for p in &aug.pieces {
            println!("  rows (a | b, meaning a.x >= b): {:?}", p.ineq_table());
        }
        if matches!(aug.closedness, Closedness::Closed) {
            let x = zeros(inst.n_atoms());
            println!(
                "  rho(0) = {} by branch LPs, {} via the augmented set",
                fmt_rat(&rho(&inst, &x)?.value),
                fmt_rat(&rho_via_augmented(&inst, &x)?)
            );
        }
    }
    let p1 = FixtureId::P1R3Unique.build();
    let v = augmented_set(&p1)?.pieces[0].vrep()?;
    println!(
        "p1 augmented set generators: lineality {:?}, vertices {:?}",
        fmt_mat(&v.lineality),
        fmt_mat(&v.vertices)
    );
    Ok(())
}
