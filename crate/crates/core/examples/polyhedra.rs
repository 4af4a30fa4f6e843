//! The exact polyhedral kernel on its own: LPs with certificates, H/V
//! conversion, projection and support functions.

use capreq::polyhedra::lp::verify_certificate;
use capreq::polyhedra::{HPolyhedron, LpResult, Sense, VRep};
use capreq::rational::{fmt_mat, fmt_rat, int, rat};

fn main() -> capreq::Result<()> {
    let mut p = HPolyhedron::nonnegative_orthant(3);
    p.push_ineq(vec![int(-1), int(-1), int(-1)], int(-2));
    let c = vec![int(1), int(-2), rat(1, 2)];
    let res = p.lp(&c, Sense::Min);
    if let LpResult::Optimal { value, point, .. } = &res {
        println!(
            "min c.x = {} at {:?}",
            fmt_rat(value),
            point.iter().map(fmt_rat).collect::<Vec<_>>()
        );
    }
    println!(
        "certificate verified: {}",
        verify_certificate(&p, &c, Sense::Min, &res)
    );

    let v = p.vrep()?;
    println!("simplex vertices {:?}", fmt_mat(&v.vertices));

    let square = VRep {
        dim: 2,
        vertices: vec![
            vec![int(0), int(0)],
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(1)],
        ],
        rays: vec![],
        lineality: vec![],
    };
    let slab = square.hrep()?.fm_project(&[vec![int(1), int(1)]]);
    println!("unit square + span(1,1): {:?}", slab.ineq_table());

    let cone = {
        let mut q = HPolyhedron::universe(2);
        q.push_ineq(vec![int(1), int(0)], int(-1));
        q.push_ineq(vec![int(1), int(1)], int(0));
        q
    };
    println!(
        "recession cone rows {:?}",
        cone.recession_cone()?.ineq_table()
    );
    println!(
        "support at (1,2): {:?}",
        cone.support_value(&[int(1), int(2)])?.map(|v| fmt_rat(&v))
    );
    println!(
        "support at (1,0): {:?}",
        cone.support_value(&[int(1), int(0)])?.map(|v| fmt_rat(&v))
    );
    println!(
        "distance from (-3,0): {}",
        fmt_rat(&cone.dist_linf(&[int(-3), int(0)])?)
    );
    Ok(())
}
