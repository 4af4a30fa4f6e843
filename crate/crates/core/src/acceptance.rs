//! Acceptance sets and their compiled forms.
//!
//! Every variant except the smooth utility set and the exponential-boundary
//! star set compiles to a finite list of polyhedral branches, possibly in
//! lifted coordinates `(x, aux)`. A position is acceptable when some branch
//! admits some auxiliary completion.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::FiniteSampleSpace;
use crate::polyhedra::HPolyhedron;
use crate::rational::{fmt_rat, int, rat, to_f64, unit_vector, zeros, Rat};

pub const DEFAULT_VAR_BRANCH_CAP: usize = 1 << 14;

/// Number of steps kept from the infinite staircase.
pub const STAIRCASE_STEPS: i64 = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub phi: Vec<Rat>,
    pub rhs: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalyticSet {
    /// `{x1 >= 0, x2 >= -1} ∪ {x1 < 0, x2 >= e^{x1} - x1 - 2}` in ℝ².
    Star2d,
    /// `ℝ²₊` plus the steps `[α_{k+1}, α_k] × [k+1, ∞)`, `α_k = -k + 1/k`,
    /// for `k = 1..=6`.
    Staircase2d,
}

impl AnalyticSet {
    pub fn id(self) -> &'static str {
        match self {
            AnalyticSet::Star2d => "star2d",
            AnalyticSet::Staircase2d => "staircase2d",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "star2d" => Ok(AnalyticSet::Star2d),
            "staircase2d" => Ok(AnalyticSet::Staircase2d),
            other => Err(Error::InvalidInput(format!(
                "unknown analytic set {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AcceptanceSet {
    /// `{x : phi_i . x >= rhs_i}`.
    Polyhedral {
        rows: Vec<Row>,
    },
    /// `x_i >= 0` on every atom of the event.
    Scenario {
        event: Vec<usize>,
    },
    ExpectedShortfall {
        alpha: Rat,
    },
    /// `E_Q[x] >= floor_Q` for each test measure.
    GeneralizedScenarios {
        measures: Vec<Vec<Rat>>,
        floors: Vec<Rat>,
    },
    ValueAtRisk {
        alpha: Rat,
    },
    /// `E[1 - e^{-a x}] >= floor`.
    ExpUtility {
        a: Rat,
        floor: Rat,
    },
    Analytic(AnalyticSet),
}

/// Convexity and scaling properties of a compiled set, as far as they are
/// known from the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub convex: bool,
    pub conic: bool,
    pub star_shaped: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedralAcceptance {
    pub n: usize,
    pub aux_dim: usize,
    /// Each branch lives in `ℝ^{n + aux_dim}`.
    pub branches: Vec<HPolyhedron>,
    pub shape: Shape,
    /// Whether every branch is monotone on its own (nonnegative position
    /// coefficients), as opposed to only the union being monotone.
    pub branchwise_monotone: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UtilityConstraint {
    pub a: f64,
    pub floor: f64,
    pub probs: Vec<f64>,
}

impl UtilityConstraint {
    /// `floor - Σ p_i (1 - e^{-a x_i})`; acceptable iff `g <= 0`.
    pub fn g(&self, x: &[f64]) -> f64 {
        let eu: f64 = self
            .probs
            .iter()
            .zip(x)
            .map(|(p, xi)| p * (1.0 - (-self.a * xi).exp()))
            .sum();
        self.floor - eu
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        self.probs
            .iter()
            .zip(x)
            .map(|(p, xi)| -p * self.a * (-self.a * xi).exp())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CompiledAcceptance {
    Polyhedral(PolyhedralAcceptance),
    Utility(UtilityConstraint),
    Star2d,
}

impl AcceptanceSet {
    pub fn compile(&self, space: &FiniteSampleSpace) -> Result<CompiledAcceptance> {
        self.compile_with_cap(space, DEFAULT_VAR_BRANCH_CAP)
    }

    pub fn compile_with_cap(
        &self,
        space: &FiniteSampleSpace,
        var_cap: usize,
    ) -> Result<CompiledAcceptance> {
        let n = space.n_atoms();
        let single = |branch: HPolyhedron, aux_dim: usize, conic: bool| {
            CompiledAcceptance::Polyhedral(PolyhedralAcceptance {
                n,
                aux_dim,
                branches: vec![branch],
                shape: Shape {
                    convex: true,
                    conic,
                    star_shaped: true,
                },
                branchwise_monotone: true,
            })
        };
        match self {
            AcceptanceSet::Polyhedral { rows } => {
                let mut p = HPolyhedron::universe(n);
                for r in rows {
                    if r.phi.len() != n {
                        return Err(Error::DimensionMismatch(format!(
                            "acceptance row has {} coefficients, expected {n}",
                            r.phi.len()
                        )));
                    }
                    p.push_ineq(r.phi.clone(), r.rhs.clone());
                }
                let conic = rows.iter().all(|r| r.rhs.is_zero());
                Ok(single(p, 0, conic))
            }
            AcceptanceSet::Scenario { event } => {
                if event.is_empty() {
                    return Err(Error::BadParameter("scenario event is empty".into()));
                }
                let mut p = HPolyhedron::universe(n);
                for &i in event {
                    if i >= n {
                        return Err(Error::BadParameter(format!("atom {i} out of range")));
                    }
                    p.push_ineq(unit_vector(n, i), Rat::zero());
                }
                Ok(single(p, 0, true))
            }
            AcceptanceSet::ExpectedShortfall { alpha } => {
                check_level(alpha)?;
                Ok(single(es_lifting(space.probs(), alpha), n + 1, true))
            }
            AcceptanceSet::GeneralizedScenarios { measures, floors } => {
                if measures.is_empty() || measures.len() != floors.len() {
                    return Err(Error::BadParameter(
                        "one floor per test measure required".into(),
                    ));
                }
                let mut p = HPolyhedron::universe(n);
                for (q, f) in measures.iter().zip(floors) {
                    if q.len() != n {
                        return Err(Error::DimensionMismatch(format!(
                            "test measure needs {n} weights"
                        )));
                    }
                    if q.iter().any(Signed::is_negative) || !q.iter().sum::<Rat>().is_one() {
                        return Err(Error::BadParameter(
                            "test measure is not a probability vector".into(),
                        ));
                    }
                    if f.is_positive() {
                        return Err(Error::BadParameter(format!(
                            "floor {} is positive",
                            fmt_rat(f)
                        )));
                    }
                    p.push_ineq(q.clone(), f.clone());
                }
                let conic = floors.iter().all(Zero::is_zero);
                Ok(single(p, 0, conic))
            }
            AcceptanceSet::ValueAtRisk { alpha } => {
                check_level(alpha)?;
                let branches = var_branches(space.probs(), alpha, var_cap)?;
                let convex = branches.len() == 1;
                Ok(CompiledAcceptance::Polyhedral(PolyhedralAcceptance {
                    n,
                    aux_dim: 0,
                    branches,
                    shape: Shape {
                        convex,
                        conic: true,
                        star_shaped: true,
                    },
                    branchwise_monotone: true,
                }))
            }
            AcceptanceSet::ExpUtility { a, floor } => {
                if !a.is_positive() {
                    return Err(Error::BadParameter(
                        "utility parameter a must be positive".into(),
                    ));
                }
                if floor.is_positive() {
                    return Err(Error::BadParameter(
                        "utility floor must not exceed u(0) = 0".into(),
                    ));
                }
                Ok(CompiledAcceptance::Utility(UtilityConstraint {
                    a: to_f64(a),
                    floor: to_f64(floor),
                    probs: space.probs().iter().map(to_f64).collect(),
                }))
            }
            AcceptanceSet::Analytic(which) => {
                if n != 2 {
                    return Err(Error::BadParameter(format!(
                        "{} lives on two atoms",
                        which.id()
                    )));
                }
                match which {
                    AnalyticSet::Star2d => Ok(CompiledAcceptance::Star2d),
                    AnalyticSet::Staircase2d => {
                        Ok(CompiledAcceptance::Polyhedral(PolyhedralAcceptance {
                            n,
                            aux_dim: 0,
                            branches: staircase_branches(),
                            shape: Shape {
                                convex: false,
                                conic: false,
                                star_shaped: false,
                            },
                            branchwise_monotone: false,
                        }))
                    }
                }
            }
        }
    }
}

fn check_level(alpha: &Rat) -> Result<()> {
    if !alpha.is_positive() || *alpha >= Rat::one() {
        return Err(Error::BadParameter(format!(
            "level {} outside (0,1)",
            fmt_rat(alpha)
        )));
    }
    Ok(())
}

/// Lifted ES set in `(x, t, s_1..s_n)`:
/// `s >= 0`, `s_i + x_i + t >= 0`, `-t - (1/α) Σ p_i s_i >= 0`.
fn es_lifting(probs: &[Rat], alpha: &Rat) -> HPolyhedron {
    let n = probs.len();
    let dim = 2 * n + 1;
    let t = n;
    let s = |i: usize| n + 1 + i;
    let mut p = HPolyhedron::universe(dim);
    for i in 0..n {
        p.push_ineq(unit_vector(dim, s(i)), Rat::zero());
        let mut row = zeros(dim);
        row[s(i)] = Rat::one();
        row[i] = Rat::one();
        row[t] = Rat::one();
        p.push_ineq(row, Rat::zero());
    }
    let mut row = zeros(dim);
    row[t] = -Rat::one();
    for i in 0..n {
        row[s(i)] = -(&probs[i] / alpha);
    }
    p.push_ineq(row, Rat::zero());
    p
}

/// One branch `{x_i >= 0 : i ∉ J}` per maximal atom set `J` with `P(J) <= α`.
fn var_branches(probs: &[Rat], alpha: &Rat, cap: usize) -> Result<Vec<HPolyhedron>> {
    let n = probs.len();
    let count = 1usize.checked_shl(n as u32).unwrap_or(usize::MAX);
    if n >= usize::BITS as usize || count > cap {
        return Err(Error::TooManyBranches { count, cap });
    }
    let mass = |mask: usize| -> Rat {
        (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| probs[i].clone())
            .sum()
    };
    let mut branches = Vec::new();
    for mask in 0..count {
        if mass(mask) > *alpha {
            continue;
        }
        let maximal = (0..n)
            .filter(|i| mask >> i & 1 == 0)
            .all(|i| mass(mask | 1 << i) > *alpha);
        if !maximal {
            continue;
        }
        let mut p = HPolyhedron::universe(n);
        for i in (0..n).filter(|i| mask >> i & 1 == 0) {
            p.push_ineq(unit_vector(n, i), Rat::zero());
        }
        branches.push(p);
    }
    Ok(branches)
}

pub fn staircase_level(k: i64) -> Rat {
    int(-k) + rat(1, k)
}

fn staircase_branches() -> Vec<HPolyhedron> {
    let mut branches = vec![HPolyhedron::nonnegative_orthant(2)];
    for k in 1..=STAIRCASE_STEPS {
        let mut p = HPolyhedron::universe(2);
        p.push_ineq(vec![int(1), int(0)], staircase_level(k + 1));
        p.push_ineq(vec![int(-1), int(0)], -staircase_level(k));
        p.push_ineq(vec![int(0), int(1)], int(k + 1));
        branches.push(p);
    }
    branches
}

/// Membership in the star-shaped set with exponential boundary.
pub fn star2d_contains(x1: f64, x2: f64) -> bool {
    if x1 >= 0.0 {
        x2 >= -1.0
    } else {
        x2 >= x1.exp() - x1 - 2.0
    }
}

impl PolyhedralAcceptance {
    pub fn lifted_dim(&self) -> usize {
        self.n + self.aux_dim
    }

    /// Does some auxiliary completion put `x` in branch `j`?
    pub fn branch_accepts(&self, j: usize, x: &[Rat]) -> bool {
        let b = &self.branches[j];
        if self.aux_dim == 0 {
            return b.contains_point(x);
        }
        let m: Vec<Vec<Rat>> = (0..self.lifted_dim())
            .map(|r| {
                if r < self.n {
                    zeros(self.aux_dim)
                } else {
                    unit_vector(self.aux_dim, r - self.n)
                }
            })
            .collect();
        let mut offset = x.to_vec();
        offset.extend(zeros(self.aux_dim));
        !b.preimage(&m, &offset, self.aux_dim).is_empty()
    }

    pub fn accepts(&self, x: &[Rat]) -> bool {
        (0..self.branches.len()).any(|j| self.branch_accepts(j, x))
    }

    /// Branch `j` with the auxiliary variables projected out.
    pub fn projected_branch(&self, j: usize) -> HPolyhedron {
        if self.aux_dim == 0 {
            return self.branches[j].clone();
        }
        self.branches[j].project_onto_leading(self.n)
    }
}

impl CompiledAcceptance {
    pub fn accepts(&self, x: &[Rat]) -> bool {
        match self {
            CompiledAcceptance::Polyhedral(p) => p.accepts(x),
            CompiledAcceptance::Utility(u) => {
                let xf: Vec<f64> = x.iter().map(to_f64).collect();
                u.g(&xf) <= 0.0
            }
            CompiledAcceptance::Star2d => star2d_contains(to_f64(&x[0]), to_f64(&x[1])),
        }
    }

    pub fn polyhedral(&self) -> Option<&PolyhedralAcceptance> {
        match self {
            CompiledAcceptance::Polyhedral(p) => Some(p),
            _ => None,
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            CompiledAcceptance::Polyhedral(p) => p.shape,
            CompiledAcceptance::Utility(_) => Shape {
                convex: true,
                conic: false,
                star_shaped: true,
            },
            CompiledAcceptance::Star2d => Shape {
                convex: false,
                conic: false,
                star_shaped: true,
            },
        }
    }

    /// Contains zero, is monotone, and is not the whole space.
    pub fn check_admissible(&self, _source: &AcceptanceSet) -> Result<()> {
        let p = match self {
            CompiledAcceptance::Polyhedral(p) => p,
            // Both oracle sets satisfy the three properties by construction
            // (floor <= u(0) is enforced at compile time).
            _ => return Ok(()),
        };
        if !p.accepts(&zeros(p.n)) {
            return Err(Error::NotAdmissible(
                "zero position is not acceptable".into(),
            ));
        }
        if p.branchwise_monotone {
            for b in &p.branches {
                let bad_ineq = b
                    .ineqs
                    .iter()
                    .any(|c| c.phi.0[..p.n].iter().any(Signed::is_negative));
                let bad_eq = b
                    .eqs
                    .iter()
                    .any(|c| c.phi.0[..p.n].iter().any(|v| !v.is_zero()));
                if bad_ineq || bad_eq {
                    return Err(Error::NotAdmissible(
                        "acceptance row with a negative position coefficient".into(),
                    ));
                }
            }
        }
        // With every branch monotone, the union is the whole space iff some
        // branch recedes along -1.
        let minus_one = vec![-Rat::one(); p.n];
        for b in &p.branches {
            if b.is_empty() {
                continue;
            }
            let mut cone = b.recession_cone()?;
            for (i, v) in minus_one.iter().enumerate() {
                cone.push_eq(unit_vector(p.lifted_dim(), i), v.clone());
            }
            if !cone.is_empty() {
                return Err(Error::NotAdmissible("every position is acceptable".into()));
            }
        }
        Ok(())
    }
}

/// Expected Shortfall at level `alpha`: minus the average of the worst
/// outcomes carrying total probability `alpha`.
pub fn es_direct(x: &[Rat], alpha: &Rat, space: &FiniteSampleSpace) -> Rat {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| x[i].cmp(&x[j]));
    let mut left = alpha.clone();
    let mut acc = Rat::zero();
    for i in order {
        if !left.is_positive() {
            break;
        }
        let w = std::cmp::min(left.clone(), space.probs()[i].clone());
        acc += &w * &x[i];
        left -= w;
    }
    -acc / alpha
}

/// `inf { m : P(x + m < 0) <= alpha }`.
pub fn var_direct(x: &[Rat], alpha: &Rat, space: &FiniteSampleSpace) -> Rat {
    let p = space.probs();
    (0..x.len())
        .filter(|&i| {
            let below: Rat = (0..x.len())
                .filter(|&j| x[j] < x[i])
                .map(|j| p[j].clone())
                .sum();
            below <= *alpha
        })
        .map(|i| -x[i].clone())
        .min()
        .expect("the smallest outcome always qualifies")
}

pub fn utility_constraint(
    acc: &AcceptanceSet,
    space: &FiniteSampleSpace,
) -> Result<UtilityConstraint> {
    match acc.compile(space)? {
        CompiledAcceptance::Utility(u) => Ok(u),
        _ => Err(Error::UnsupportedVariant(
            "not a utility acceptance set".into(),
        )),
    }
}
