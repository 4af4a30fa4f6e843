//! Exact rational polyhedral kernel.
//!
//! A polyhedron is stored in H-representation as inequalities `a.x >= b`
//! and equalities `a.x = b`. Everything that needs an optimization goes
//! through the exact simplex in [`lp`]; generator conversion lives in
//! [`dd`], subspace projection in [`fm`], and ℓ∞ distances in [`distance`].

pub mod dd;
pub mod distance;
pub mod fm;
pub mod lp;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{
    dot, fmt_mat, fmt_rat, fmt_vec, int, primitive_factor, unit_vector, zeros, Rat,
};

pub use dd::VRep;
pub use lp::{DualCertificate, LpResult, LpStatus, Sense};

/// Default cap on the ambient dimension accepted by generator conversion.
pub const DEFAULT_DIM_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearFunctional(pub Vec<Rat>);

impl LinearFunctional {
    pub fn apply(&self, x: &[Rat]) -> Rat {
        dot(&self.0, x)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Nonnegative in every coordinate, i.e. a positive functional in atom
    /// coordinates.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub phi: LinearFunctional,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint {
            phi: LinearFunctional(coeffs),
            rhs,
        }
    }

    pub fn slack(&self, x: &[Rat]) -> Rat {
        self.phi.apply(x) - &self.rhs
    }

    /// Same constraint scaled by a positive factor so that the coefficients
    /// are primitive integers. Rows with zero coefficients are untouched.
    pub fn normalized(&self) -> Constraint {
        match primitive_factor(&self.phi.0) {
            Some(f) => Constraint::new(self.phi.0.iter().map(|x| x * &f).collect(), &self.rhs * &f),
            None => self.clone(),
        }
    }
}

/// `{x : a.x >= b for every inequality, a.x = b for every equality}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolyhedron {
    pub dim: usize,
    pub ineqs: Vec<Constraint>,
    pub eqs: Vec<Constraint>,
}

#[derive(Serialize)]
struct HRepDump {
    dim: usize,
    ineqs: Vec<RowDump>,
    eqs: Vec<RowDump>,
}

#[derive(Serialize)]
struct RowDump {
    phi: Vec<String>,
    rhs: String,
}

impl HPolyhedron {
    pub fn universe(dim: usize) -> Self {
        HPolyhedron {
            dim,
            ineqs: Vec::new(),
            eqs: Vec::new(),
        }
    }

    pub fn empty(dim: usize) -> Self {
        let mut p = HPolyhedron::universe(dim);
        p.push_ineq(zeros(dim), int(1));
        p
    }

    /// `[-half_width, half_width]^dim`.
    pub fn cube(dim: usize, half_width: &Rat) -> Self {
        let mut p = HPolyhedron::universe(dim);
        for i in 0..dim {
            let e = unit_vector(dim, i);
            p.push_ineq(e.clone(), -half_width.clone());
            p.push_ineq(e.iter().map(|x| -x).collect(), -half_width.clone());
        }
        p
    }

    pub fn nonnegative_orthant(dim: usize) -> Self {
        let mut p = HPolyhedron::universe(dim);
        for i in 0..dim {
            p.push_ineq(unit_vector(dim, i), Rat::zero());
        }
        p
    }

    pub fn push_ineq(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        assert_eq!(coeffs.len(), self.dim, "row dimension");
        self.ineqs.push(Constraint::new(coeffs, rhs));
    }

    pub fn push_eq(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        assert_eq!(coeffs.len(), self.dim, "row dimension");
        self.eqs.push(Constraint::new(coeffs, rhs));
    }

    pub fn rows(&self) -> impl Iterator<Item = &Constraint> {
        self.ineqs.iter().chain(&self.eqs)
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        x.len() == self.dim
            && self.ineqs.iter().all(|c| !c.slack(x).is_negative())
            && self.eqs.iter().all(|c| c.slack(x).is_zero())
    }

    pub fn intersect(&self, other: &HPolyhedron) -> HPolyhedron {
        assert_eq!(self.dim, other.dim, "ambient dimension");
        let mut p = self.clone();
        p.ineqs.extend(other.ineqs.iter().cloned());
        p.eqs.extend(other.eqs.iter().cloned());
        p
    }

    pub fn lp(&self, c: &[Rat], sense: Sense) -> LpResult {
        lp::solve(self, c, sense)
    }

    pub fn feasible_point(&self) -> Option<Vec<Rat>> {
        match self.lp(&zeros(self.dim), Sense::Min) {
            LpResult::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.feasible_point().is_none()
    }

    /// Argmin set of `c` over the polyhedron.
    pub fn optimal_face(&self, c: &[Rat]) -> Result<HPolyhedron> {
        match self.lp(c, Sense::Min) {
            LpResult::Optimal { value, .. } => {
                let mut face = self.clone();
                if !linalg_is_zero(c) {
                    face.push_eq(c.to_vec(), value);
                }
                Ok(face)
            }
            _ => Err(Error::NotOptimal),
        }
    }

    /// Inequalities that hold with equality on the whole polyhedron.
    pub fn implicit_equalities(&self) -> Result<Vec<usize>> {
        if self.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        Ok((0..self.ineqs.len())
            .filter(|&i| {
                let row = &self.ineqs[i];
                matches!(self.lp(&row.phi.0, Sense::Max), LpResult::Optimal { value, .. } if value == row.rhs)
            })
            .collect())
    }

    pub fn dimension(&self) -> Result<usize> {
        let implicit = self.implicit_equalities()?;
        let mut rows: Vec<Vec<Rat>> = self.eqs.iter().map(|c| c.phi.0.clone()).collect();
        rows.extend(implicit.iter().map(|&i| self.ineqs[i].phi.0.clone()));
        Ok(self.dim - linalg::rank(&rows, self.dim))
    }

    /// Same rows with right-hand sides set to zero.
    pub fn recession_cone(&self) -> Result<HPolyhedron> {
        if self.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        Ok(self.homogenized())
    }

    pub(crate) fn homogenized(&self) -> HPolyhedron {
        let strip = |rows: &[Constraint]| {
            rows.iter()
                .map(|c| Constraint::new(c.phi.0.clone(), Rat::zero()))
                .collect()
        };
        HPolyhedron {
            dim: self.dim,
            ineqs: strip(&self.ineqs),
            eqs: strip(&self.eqs),
        }
    }

    /// Basis of the null space of every row.
    pub fn lineality_space(&self) -> Result<Vec<Vec<Rat>>> {
        if self.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        Ok(self.lineality_basis())
    }

    pub(crate) fn lineality_basis(&self) -> Vec<Vec<Rat>> {
        let rows: Vec<Vec<Rat>> = self.rows().map(|c| c.phi.0.clone()).collect();
        linalg::null_space(&rows, self.dim)
    }

    /// `inf { phi.x : x in P }`; `None` encodes minus infinity.
    pub fn support_value(&self, phi: &[Rat]) -> Result<Option<Rat>> {
        match self.lp(phi, Sense::Min) {
            LpResult::Optimal { value, .. } => Ok(Some(value)),
            LpResult::Unbounded { .. } => Ok(None),
            LpResult::Infeasible => Err(Error::EmptyPolyhedron),
        }
    }

    /// Whether `other` is a subset of `self`.
    pub fn contains(&self, other: &HPolyhedron) -> bool {
        assert_eq!(self.dim, other.dim, "ambient dimension");
        if other.is_empty() {
            return true;
        }
        let lower_ok = |row: &Constraint| match other.lp(&row.phi.0, Sense::Min) {
            LpResult::Optimal { value, .. } => value >= row.rhs,
            _ => false,
        };
        let upper_ok = |row: &Constraint| match other.lp(&row.phi.0, Sense::Max) {
            LpResult::Optimal { value, .. } => value <= row.rhs,
            _ => false,
        };
        self.ineqs.iter().all(lower_ok) && self.eqs.iter().all(|r| lower_ok(r) && upper_ok(r))
    }

    pub fn same_set(&self, other: &HPolyhedron) -> bool {
        self.contains(other) && other.contains(self)
    }

    /// `{y : m y + offset in P}` where `m` has `self.dim` rows.
    pub fn preimage(&self, m: &[Vec<Rat>], offset: &[Rat], new_dim: usize) -> HPolyhedron {
        let map = |c: &Constraint| {
            let coeffs = linalg::vec_mat(&c.phi.0, m, new_dim);
            Constraint::new(coeffs, &c.rhs - c.phi.apply(offset))
        };
        HPolyhedron {
            dim: new_dim,
            ineqs: self.ineqs.iter().map(map).collect(),
            eqs: self.eqs.iter().map(map).collect(),
        }
    }

    /// `P + v`.
    pub fn translate(&self, v: &[Rat]) -> HPolyhedron {
        let shift = |c: &Constraint| Constraint::new(c.phi.0.clone(), &c.rhs + c.phi.apply(v));
        HPolyhedron {
            dim: self.dim,
            ineqs: self.ineqs.iter().map(shift).collect(),
            eqs: self.eqs.iter().map(shift).collect(),
        }
    }

    /// Keeps the first `keep` coordinates. Every dropped coordinate must
    /// already have zero coefficients (e.g. after [`HPolyhedron::fm_project`]).
    pub fn truncate_coords(&self, keep: usize) -> HPolyhedron {
        let cut = |c: &Constraint| {
            debug_assert!(c.phi.0[keep..].iter().all(Zero::is_zero));
            Constraint::new(c.phi.0[..keep].to_vec(), c.rhs.clone())
        };
        HPolyhedron {
            dim: keep,
            ineqs: self.ineqs.iter().map(cut).collect(),
            eqs: self.eqs.iter().map(cut).collect(),
        }
    }

    /// Pads every row with zero coefficients for `extra` new trailing
    /// coordinates (cylinder over the polyhedron).
    pub fn extend_coords(&self, extra: usize) -> HPolyhedron {
        let pad = |c: &Constraint| {
            let mut a = c.phi.0.clone();
            a.extend(zeros(extra));
            Constraint::new(a, c.rhs.clone())
        };
        HPolyhedron {
            dim: self.dim + extra,
            ineqs: self.ineqs.iter().map(pad).collect(),
            eqs: self.eqs.iter().map(pad).collect(),
        }
    }

    /// Projection onto the first `keep` coordinates.
    pub fn project_onto_leading(&self, keep: usize) -> HPolyhedron {
        if keep == self.dim {
            return self.clone();
        }
        let dirs: Vec<Vec<Rat>> = (keep..self.dim).map(|i| unit_vector(self.dim, i)).collect();
        self.fm_project(&dirs).truncate_coords(keep)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dump = |rows: &[Constraint]| {
            rows.iter()
                .map(|c| RowDump {
                    phi: fmt_vec(&c.phi.0),
                    rhs: fmt_rat(&c.rhs),
                })
                .collect()
        };
        serde_json::to_value(HRepDump {
            dim: self.dim,
            ineqs: dump(&self.ineqs),
            eqs: dump(&self.eqs),
        })
        .expect("serializable")
    }

    /// Inequality rows as `[coeffs..., rhs]` strings, for compact display.
    pub fn ineq_table(&self) -> Vec<Vec<String>> {
        let rows: Vec<Vec<Rat>> = self
            .ineqs
            .iter()
            .map(|c| {
                let mut r = c.phi.0.clone();
                r.push(c.rhs.clone());
                r
            })
            .collect();
        fmt_mat(&rows)
    }
}

fn linalg_is_zero(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn square() -> HPolyhedron {
        let mut p = HPolyhedron::nonnegative_orthant(2);
        p.push_ineq(vec![int(-1), int(0)], int(-1));
        p.push_ineq(vec![int(0), int(-1)], int(-1));
        p
    }

    #[test]
    fn optimal_face_of_square_is_an_edge() {
        let face = square().optimal_face(&[int(1), int(0)]).unwrap();
        assert_eq!(face.dimension().unwrap(), 1);
        assert!(face.contains_point(&[int(0), rat(1, 2)]));
        assert!(!face.contains_point(&[rat(1, 2), rat(1, 2)]));
        let whole = square().optimal_face(&[int(0), int(0)]).unwrap();
        assert!(whole.same_set(&square()));
    }

    #[test]
    fn optimal_face_of_slice() {
        let mut p = HPolyhedron::universe(3);
        p.push_ineq(vec![int(1), int(1), int(1)], rat(-1, 2));
        let face = p.optimal_face(&[int(1), int(1), int(1)]).unwrap();
        assert_eq!(face.dimension().unwrap(), 2);
        assert!(face.contains_point(&[rat(-1, 2), int(0), int(0)]));
        assert!(!face.contains_point(&[int(0), int(0), int(0)]));
    }

    #[test]
    fn implicit_equalities_and_dimension() {
        let mut p = HPolyhedron::universe(1);
        p.push_ineq(vec![int(1)], int(0));
        p.push_ineq(vec![int(-1)], int(0));
        assert_eq!(p.implicit_equalities().unwrap(), vec![0, 1]);
        assert_eq!(p.dimension().unwrap(), 0);
        assert!(square().implicit_equalities().unwrap().is_empty());
        assert_eq!(square().dimension().unwrap(), 2);
        assert_eq!(
            HPolyhedron::empty(2).dimension(),
            Err(Error::EmptyPolyhedron)
        );
    }

    #[test]
    fn recession_and_lineality() {
        let cone = square().recession_cone().unwrap();
        assert_eq!(cone.dimension().unwrap(), 0);
        assert!(square().lineality_space().unwrap().is_empty());

        let mut h = HPolyhedron::universe(3);
        h.push_ineq(vec![int(1), int(1), int(1)], rat(-1, 2));
        let rec = h.recession_cone().unwrap();
        assert_eq!(rec.ineqs[0].rhs, int(0));
        let lin = h.lineality_space().unwrap();
        assert_eq!(lin.len(), 2);
        for v in &lin {
            assert!(dot(v, &[int(1), int(1), int(1)]).is_zero());
        }
    }

    #[test]
    fn support_values() {
        let orthant = HPolyhedron::nonnegative_orthant(3);
        assert_eq!(
            orthant.support_value(&[int(1), int(2), int(0)]).unwrap(),
            Some(int(0))
        );
        let mut h = HPolyhedron::universe(3);
        h.push_ineq(vec![int(1), int(1), int(1)], rat(-1, 2));
        assert_eq!(h.support_value(&[int(1), int(1), int(0)]).unwrap(), None);
        match h.lp(&[int(1), int(1), int(0)], Sense::Min) {
            LpResult::Unbounded { ray, .. } => {
                assert!(dot(&ray, &[int(1), int(1), int(0)]).is_negative());
                assert!(h.recession_cone().unwrap().contains_point(&ray));
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn normalized_rows_are_primitive() {
        let c = Constraint::new(vec![int(2), int(2), int(2)], int(-1)).normalized();
        assert_eq!(c, Constraint::new(vec![int(1), int(1), int(1)], rat(-1, 2)));
    }
}
