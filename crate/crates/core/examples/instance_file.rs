//! Reading instances from JSON, resolving named positions and running the
//! stored probes.
//!
//! `cargo run --example instance_file -- path/to/instance.json`

use std::path::PathBuf;

use capreq::diagnostics::{epsilon_lsc_probe, lsc_probe, ProbeOptions};
use capreq::instance_io::{parse_position, InstanceFile};
use capreq::rational::{fmt_rat, fmt_vec, unwrap_vec};
use capreq::risk_engine::rho;

fn main() -> capreq::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/data/var_lsc.json"
            ))
        });
    let file = InstanceFile::read(&path)?;
    let inst = file.to_instance()?;
    let named = file.named_positions();
    println!(
        "{} with {} atoms and {} assets",
        inst.name,
        inst.n_atoms(),
        inst.n_assets()
    );
    for (name, x) in &named {
        println!("  rho({name}) = {}", fmt_rat(&rho(&inst, x)?.value));
    }
    if inst.space.atom_index("F").is_some() {
        let x = parse_position("-1/2F+G", &inst.space, &named)?;
        println!(
            "  rho(-1/2F+G) = {} at {:?}",
            fmt_rat(&rho(&inst, &x)?.value),
            fmt_vec(&x)
        );
    }
    let opts = ProbeOptions {
        k_max: 6,
        ..ProbeOptions::default()
    };
    for p in &file.probes {
        let (x, d) = (unwrap_vec(&p.base), unwrap_vec(&p.direction));
        let r = match &p.epsilon {
            Some(e) => epsilon_lsc_probe(&inst, &x, &d, &e.0, &opts)?,
            None => lsc_probe(&inst, &x, &d, &opts)?,
        };
        println!(
            "  probe eps={:?}: {}",
            p.epsilon.as_ref().map(|e| fmt_rat(&e.0)),
            r.classification.name()
        );
    }
    println!("{}", InstanceFile::from_instance(&inst).to_json_string());
    Ok(())
}
