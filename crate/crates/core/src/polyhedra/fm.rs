//! Fourier–Motzkin elimination along arbitrary directions.
//!
//! `P + span(d)` is obtained by eliminating the scalar `t` from
//! `a.(x + t d) >= b`: rows with `a.d = 0` are kept, and every pair of rows
//! with opposite signs on `d` is combined with positive multipliers so that
//! the `d`-component cancels. Equalities with `a.d != 0` are used for
//! substitution first. Redundant rows are pruned by one LP per row after
//! each direction.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{Constraint, HPolyhedron, LpResult, Sense};
use crate::rational::{dot, Rat};

impl HPolyhedron {
    /// H-representation of the Minkowski sum `P + span(directions)`.
    pub fn fm_project(&self, directions: &[Vec<Rat>]) -> HPolyhedron {
        let mut p = self.clone();
        for d in directions {
            assert_eq!(d.len(), self.dim, "direction dimension");
            p = p.eliminate(d);
            p = p.without_redundancy();
        }
        p
    }

    fn eliminate(&self, d: &[Rat]) -> HPolyhedron {
        let along = |c: &Constraint| dot(&c.phi.0, d);
        if let Some(k) = self.eqs.iter().position(|c| !along(c).is_zero()) {
            let pivot = self.eqs[k].clone();
            let pd = along(&pivot);
            let substitute = |c: &Constraint| {
                let f = along(c) / &pd;
                if f.is_zero() {
                    return c.clone();
                }
                Constraint::new(
                    c.phi
                        .0
                        .iter()
                        .zip(&pivot.phi.0)
                        .map(|(a, p)| a - &f * p)
                        .collect(),
                    &c.rhs - &f * &pivot.rhs,
                )
            };
            let eqs = self
                .eqs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, c)| substitute(c))
                .collect();
            return HPolyhedron {
                dim: self.dim,
                ineqs: self.ineqs.iter().map(substitute).collect(),
                eqs,
            };
        }
        let mut kept = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for c in &self.ineqs {
            let s = along(c);
            if s.is_zero() {
                kept.push(c.clone());
            } else if s.is_positive() {
                pos.push((c, s));
            } else {
                neg.push((c, s));
            }
        }
        for (cp, sp) in &pos {
            for (cn, sn) in &neg {
                let wp = -sn.clone();
                let coeffs = cp
                    .phi
                    .0
                    .iter()
                    .zip(&cn.phi.0)
                    .map(|(a, b)| &wp * a + sp * b)
                    .collect();
                kept.push(Constraint::new(coeffs, &wp * &cp.rhs + sp * &cn.rhs));
            }
        }
        HPolyhedron {
            dim: self.dim,
            ineqs: kept,
            eqs: self.eqs.clone(),
        }
    }

    /// Normalizes rows, merges parallel rows, and drops every inequality
    /// implied by the others.
    pub fn without_redundancy(&self) -> HPolyhedron {
        let mut eqs: Vec<Constraint> = Vec::new();
        for c in &self.eqs {
            let mut n = c.normalized();
            if n.phi.0.iter().all(Zero::is_zero) {
                if !n.rhs.is_zero() {
                    return HPolyhedron::empty(self.dim);
                }
                continue;
            }
            if n.phi
                .0
                .iter()
                .find(|x| !x.is_zero())
                .is_some_and(|x| x.is_negative())
            {
                n = Constraint::new(n.phi.0.iter().map(|x| -x).collect(), -n.rhs);
            }
            if !eqs.contains(&n) {
                eqs.push(n);
            }
        }
        // Strongest right-hand side per normalized direction.
        let mut by_dir: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
        for c in &self.ineqs {
            let n = c.normalized();
            if n.phi.0.iter().all(Zero::is_zero) {
                if n.rhs.is_positive() {
                    return HPolyhedron::empty(self.dim);
                }
                continue;
            }
            by_dir
                .entry(n.phi.0)
                .and_modify(|r| {
                    if n.rhs > *r {
                        *r = n.rhs.clone();
                    }
                })
                .or_insert(n.rhs);
        }
        let mut p = HPolyhedron {
            dim: self.dim,
            ineqs: by_dir
                .into_iter()
                .map(|(a, b)| Constraint::new(a, b))
                .collect(),
            eqs,
        };
        if p.is_empty() {
            return HPolyhedron::empty(self.dim);
        }
        let mut i = 0;
        while i < p.ineqs.len() {
            let row = p.ineqs.remove(i);
            let implied = match p.lp(&row.phi.0, Sense::Min) {
                LpResult::Optimal { value, .. } => value >= row.rhs,
                _ => false,
            };
            if !implied {
                p.ineqs.insert(i, row);
                i += 1;
            }
        }
        p
    }
}
