//! ℓ∞ point-to-set distances and box-truncated one-sided deviations.
//!
//! The deviation `sup_{p in P} d(p, Q)` of a polytope toward a convex set
//! is attained at a vertex of `P`, because the distance to a convex set is
//! a convex function. Unbounded sets are first intersected with the cube
//! `[-B, B]^dim`.

use num_traits::{One, Zero};

use super::{HPolyhedron, LpResult, Sense};
use crate::error::{Error, Result};
use crate::rational::{fmt_rat, zeros, Rat};

impl HPolyhedron {
    /// `min { ||x - point||_inf : x in P }`, by one LP in `(x, t)`.
    pub fn dist_linf(&self, point: &[Rat]) -> Result<Rat> {
        let d = self.dim;
        let mut lifted = self.extend_coords(1);
        for j in 0..d {
            // t - x_j >= -p_j  and  t + x_j >= p_j
            let mut lo = zeros(d + 1);
            lo[j] = -Rat::one();
            lo[d] = Rat::one();
            lifted.push_ineq(lo, -point[j].clone());
            let mut hi = zeros(d + 1);
            hi[j] = Rat::one();
            hi[d] = Rat::one();
            lifted.push_ineq(hi, point[j].clone());
        }
        let mut t = zeros(d + 1);
        t[d] = Rat::one();
        lifted.push_ineq(t.clone(), Rat::zero());
        match lifted.lp(&t, Sense::Min) {
            LpResult::Optimal { value, .. } => Ok(value),
            LpResult::Infeasible => Err(Error::EmptyPolyhedron),
            LpResult::Unbounded { .. } => unreachable!("distance is bounded below by zero"),
        }
    }

    pub fn boxed(&self, half_width: &Rat) -> HPolyhedron {
        self.intersect(&HPolyhedron::cube(self.dim, half_width))
    }
}

/// `sup_{p in P∩box} dist(p, Q∩box)` where `P` and `Q` are finite unions of
/// polyhedra (lists of pieces, all in the same space).
pub fn deviation_boxed(from: &[HPolyhedron], to: &[HPolyhedron], half_width: &Rat) -> Result<Rat> {
    let boxed = |pieces: &[HPolyhedron]| -> Result<Vec<HPolyhedron>> {
        let kept: Vec<HPolyhedron> = pieces
            .iter()
            .map(|p| p.boxed(half_width))
            .filter(|p| !p.is_empty())
            .collect();
        if kept.is_empty() {
            return Err(Error::EmptyAfterBoxing(fmt_rat(half_width)));
        }
        Ok(kept)
    };
    let from = boxed(from)?;
    let to = boxed(to)?;
    let mut worst = Rat::zero();
    for piece in &from {
        for v in piece.vrep()?.vertices {
            let mut best: Option<Rat> = None;
            for q in &to {
                let dist = q.dist_linf(&v)?;
                if best.as_ref().is_none_or(|b| dist < *b) {
                    best = Some(dist);
                }
                if best.as_ref().is_some_and(Zero::is_zero) {
                    break;
                }
            }
            let best = best.expect("nonempty target");
            if best > worst {
                worst = best;
            }
        }
    }
    Ok(worst)
}

/// The two one-sided deviations `(P -> Q, Q -> P)` between box-truncated
/// polyhedra.
pub fn hausdorff_boxed(p: &HPolyhedron, q: &HPolyhedron, half_width: &Rat) -> Result<(Rat, Rat)> {
    let pq = deviation_boxed(std::slice::from_ref(p), std::slice::from_ref(q), half_width)?;
    let qp = deviation_boxed(std::slice::from_ref(q), std::slice::from_ref(p), half_width)?;
    Ok((pq, qp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn distance_to_halfplane() {
        let mut p = HPolyhedron::universe(2);
        p.push_ineq(vec![int(-1), int(0)], int(0));
        assert_eq!(p.dist_linf(&[int(2), int(0)]).unwrap(), int(2));
        assert_eq!(p.dist_linf(&[int(-2), int(5)]).unwrap(), int(0));
    }

    #[test]
    fn segment_to_origin_deviation() {
        // {lambda (1,0,-1) : lambda <= 0} vs {0}, in portfolio coordinates (cash, Z).
        let mut ray = HPolyhedron::universe(2);
        ray.push_eq(vec![int(1), int(0)], int(0));
        ray.push_ineq(vec![int(0), int(-1)], int(0));
        let mut origin = HPolyhedron::universe(2);
        origin.push_eq(vec![int(1), int(0)], int(0));
        origin.push_eq(vec![int(0), int(1)], int(0));
        let (lsc, outer) = hausdorff_boxed(&ray, &origin, &int(10)).unwrap();
        assert_eq!(lsc, int(10));
        assert_eq!(outer, int(0));
        assert_eq!(
            hausdorff_boxed(&ray, &ray, &int(10)).unwrap(),
            (int(0), int(0))
        );
    }

    #[test]
    fn empty_after_boxing() {
        let mut far = HPolyhedron::universe(1);
        far.push_ineq(vec![int(1)], int(20));
        assert!(matches!(
            hausdorff_boxed(&far, &far, &int(10)),
            Err(Error::EmptyAfterBoxing(_))
        ));
    }
}
