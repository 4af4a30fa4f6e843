//! Two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Free variables are split as `x = x+ - x-`, every inequality row gets a
//! surplus column and every row an artificial column. Artificial columns
//! stay in the tableau after phase one so that the optimal dual can be read
//! off their reduced costs.

use num_traits::{Signed, Zero};

use super::HPolyhedron;
use crate::rational::{dot, zeros, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Multipliers certifying optimality of the minimization form of the
/// problem (`c` replaced by `-c` for maximization): `ineq >= 0`,
/// `sum ineq_i a_i + sum eq_j e_j = c` and `sum y_i b_i = value`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCertificate {
    pub ineq: Vec<Rat>,
    pub eq: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult {
    Optimal {
        value: Rat,
        point: Vec<Rat>,
        dual: DualCertificate,
    },
    Infeasible,
    /// `point` is feasible and `ray` is a recession direction along which
    /// the objective improves without bound.
    Unbounded {
        point: Vec<Rat>,
        ray: Vec<Rat>,
    },
}

impl LpResult {
    pub fn status(&self) -> LpStatus {
        match self {
            LpResult::Optimal { .. } => LpStatus::Optimal,
            LpResult::Infeasible => LpStatus::Infeasible,
            LpResult::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    /// Optimal point, or the feasible point of an unbounded problem.
    pub fn point(&self) -> Option<&[Rat]> {
        match self {
            LpResult::Optimal { point, .. } | LpResult::Unbounded { point, .. } => Some(point),
            LpResult::Infeasible => None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, LpResult::Optimal { .. })
    }
}

/// Checks primal feasibility of the point, dual feasibility of the
/// multipliers and exact equality of the two objective values.
pub fn verify_certificate(p: &HPolyhedron, c: &[Rat], sense: Sense, result: &LpResult) -> bool {
    let LpResult::Optimal { value, point, dual } = result else {
        return true;
    };
    if !p.contains_point(point) || dot(c, point) != *value {
        return false;
    }
    let (obj, target): (Vec<Rat>, Rat) = match sense {
        Sense::Min => (c.to_vec(), value.clone()),
        Sense::Max => (c.iter().map(|x| -x).collect(), -value.clone()),
    };
    if dual.ineq.len() != p.ineqs.len() || dual.eq.len() != p.eqs.len() {
        return false;
    }
    if dual.ineq.iter().any(Signed::is_negative) {
        return false;
    }
    let mut combo = zeros(p.dim);
    let mut rhs = Rat::zero();
    for (y, row) in dual
        .ineq
        .iter()
        .zip(&p.ineqs)
        .chain(dual.eq.iter().zip(&p.eqs))
    {
        for (acc, a) in combo.iter_mut().zip(&row.phi.0) {
            *acc += y * a;
        }
        rhs += y * &row.rhs;
    }
    combo == obj && rhs == target
}

pub fn solve(p: &HPolyhedron, c: &[Rat], sense: Sense) -> LpResult {
    assert_eq!(c.len(), p.dim, "objective dimension");
    let obj: Vec<Rat> = match sense {
        Sense::Min => c.to_vec(),
        Sense::Max => c.iter().map(|x| -x).collect(),
    };
    let result = match Tableau::build(p).run(&obj) {
        LpResult::Optimal { value, point, dual } => LpResult::Optimal {
            value: if sense == Sense::Max { -value } else { value },
            point,
            dual,
        },
        other => other,
    };
    debug_assert!(
        verify_certificate(p, c, sense, &result),
        "LP certificate failed"
    );
    result
}

struct Tableau {
    dim: usize,
    n_ineq: usize,
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    sign: Vec<bool>,
    ncols: usize,
}

impl Tableau {
    fn art(&self, i: usize) -> usize {
        2 * self.dim + self.n_ineq + i
    }

    fn is_art(&self, j: usize) -> bool {
        j >= 2 * self.dim + self.n_ineq
    }

    fn build(p: &HPolyhedron) -> Tableau {
        let d = p.dim;
        let mi = p.ineqs.len();
        let m = mi + p.eqs.len();
        let ncols = 2 * d + mi + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut sign = Vec::with_capacity(m);
        for (i, con) in p.ineqs.iter().chain(&p.eqs).enumerate() {
            let mut row = zeros(ncols);
            for (j, a) in con.phi.0.iter().enumerate() {
                row[j] = a.clone();
                row[d + j] = -a.clone();
            }
            if i < mi {
                row[2 * d + i] = Rat::from_integer((-1).into());
            }
            let mut b = con.rhs.clone();
            let flip = b.is_negative();
            if flip {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
            }
            row[2 * d + mi + i] = Rat::from_integer(1.into());
            rows.push(row);
            rhs.push(b);
            sign.push(flip);
        }
        let basis = (0..m).map(|i| 2 * d + mi + i).collect();
        Tableau {
            dim: d,
            n_ineq: mi,
            rows,
            rhs,
            basis,
            sign,
            ncols,
        }
    }

    fn pivot(&mut self, r: usize, e: usize, reduced: &mut [Rat]) {
        let inv = Rat::from_integer(1.into()) / &self.rows[r][e];
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !reduced[e].is_zero() {
            let f = reduced[e].clone();
            for (x, y) in reduced.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = e;
    }

    fn reduced_costs(&self, cost: &[Rat]) -> Vec<Rat> {
        let mut d = cost.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if cost[b].is_zero() {
                continue;
            }
            for (x, y) in d.iter_mut().zip(row) {
                *x -= &cost[b] * y;
            }
        }
        d
    }

    /// Bland's rule iterations. Returns the entering column of an unbounded
    /// direction, if any.
    fn iterate(&mut self, reduced: &mut [Rat]) -> Option<usize> {
        loop {
            let entering = (0..self.ncols).find(|&j| !self.is_art(j) && reduced[j].is_negative());
            let e = entering?;
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, e, reduced),
                None => return Some(e),
            }
        }
    }

    fn primal(&self) -> Vec<Rat> {
        let mut z = zeros(self.ncols);
        for (i, &b) in self.basis.iter().enumerate() {
            z[b] = self.rhs[i].clone();
        }
        (0..self.dim).map(|j| &z[j] - &z[self.dim + j]).collect()
    }

    fn run(mut self, obj: &[Rat]) -> LpResult {
        let m = self.rows.len();
        let one = Rat::from_integer(1.into());
        let mut phase1 = zeros(self.ncols);
        for i in 0..m {
            phase1[self.art(i)] = one.clone();
        }
        let mut reduced = self.reduced_costs(&phase1);
        self.iterate(&mut reduced);
        let infeasibility: Rat = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(b, _)| self.is_art(**b))
            .fold(Rat::zero(), |acc, (_, v)| acc + v);
        if infeasibility.is_positive() {
            return LpResult::Infeasible;
        }
        // Drive zero-level artificials out of the basis where possible.
        for i in 0..m {
            if !self.is_art(self.basis[i]) {
                continue;
            }
            if let Some(j) =
                (0..self.ncols).find(|&j| !self.is_art(j) && !self.rows[i][j].is_zero())
            {
                let mut scratch = zeros(self.ncols);
                self.pivot(i, j, &mut scratch);
            }
        }

        let mut cost = zeros(self.ncols);
        for j in 0..self.dim {
            cost[j] = obj[j].clone();
            cost[self.dim + j] = -obj[j].clone();
        }
        let mut reduced = self.reduced_costs(&cost);
        if let Some(e) = self.iterate(&mut reduced) {
            let mut z = zeros(self.ncols);
            z[e] = one;
            for (i, &b) in self.basis.iter().enumerate() {
                z[b] = -self.rows[i][e].clone();
            }
            let ray = (0..self.dim).map(|j| &z[j] - &z[self.dim + j]).collect();
            return LpResult::Unbounded {
                point: self.primal(),
                ray,
            };
        }
        let point = self.primal();
        let value = dot(obj, &point);
        let mut y: Vec<Rat> = (0..m)
            .map(|i| {
                let v = -reduced[self.art(i)].clone();
                if self.sign[i] {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let eq = y.split_off(self.n_ineq);
        LpResult::Optimal {
            value,
            point,
            dual: DualCertificate { ineq: y, eq },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn poly(dim: usize, ineqs: &[(&[i64], Rat)]) -> HPolyhedron {
        let mut p = HPolyhedron::universe(dim);
        for (a, b) in ineqs {
            p.push_ineq(a.iter().map(|&x| int(x)).collect(), b.clone());
        }
        p
    }

    #[test]
    fn min_over_halfline() {
        let p = poly(1, &[(&[1], int(0))]);
        let r = solve(&p, &[int(1)], Sense::Min);
        assert_eq!(r.value(), Some(&int(0)));
        assert_eq!(r.point().unwrap(), &[int(0)]);
        match solve(&p, &[int(-1)], Sense::Min) {
            LpResult::Unbounded { ray, .. } => assert_eq!(ray, vec![int(1)]),
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn separable_sum() {
        let p = poly(2, &[(&[1, 0], int(1)), (&[0, 1], int(2))]);
        assert_eq!(
            solve(&p, &[int(1), int(1)], Sense::Min).value(),
            Some(&int(3))
        );
    }

    #[test]
    fn infeasible_and_equalities() {
        let p = poly(1, &[(&[1], int(1)), (&[-1], int(0))]);
        assert_eq!(solve(&p, &[int(1)], Sense::Min), LpResult::Infeasible);

        let mut q = poly(2, &[(&[1, 0], int(0)), (&[0, 1], int(0))]);
        q.push_eq(vec![int(1), int(1)], int(1));
        let r = solve(&q, &[int(1), int(2)], Sense::Max);
        assert_eq!(r.value(), Some(&int(2)));
        assert!(verify_certificate(&q, &[int(1), int(2)], Sense::Max, &r));
    }

    #[test]
    fn degenerate_redundant_equalities() {
        let mut q = HPolyhedron::universe(2);
        q.push_eq(vec![int(1), int(1)], int(1));
        q.push_eq(vec![int(2), int(2)], int(2));
        q.push_ineq(vec![int(1), int(0)], int(0));
        q.push_ineq(vec![int(0), int(1)], int(0));
        let c = [rat(1, 3), int(-1)];
        let r = solve(&q, &c, Sense::Min);
        assert_eq!(r.value(), Some(&int(-1)));
        assert!(verify_certificate(&q, &c, Sense::Min, &r));
    }
}
