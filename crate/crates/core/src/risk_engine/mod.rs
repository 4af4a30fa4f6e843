//! Capital requirements `ρ(X) = inf { π(Z) : Z ∈ M, X + Z ∈ A }`, the sets
//! of optimal and ε-optimal eligible payoffs, and the augmented set
//! `A + ker π`.
//!
//! All results are in portfolio coordinates `λ`. For a polyhedral branch in
//! lifted coordinates `(x, aux)`, the constraint set of `X` is the preimage
//! of the branch under `(λ, aux) ↦ (X + Pλ, aux)`.

mod smooth;

pub use smooth::{smooth_rho, SmoothOptions, SmoothResult};

use num_traits::{One, Signed};

use crate::acceptance::{CompiledAcceptance, PolyhedralAcceptance};
use crate::error::{Error, Result};
use crate::model::ProblemInstance;
use crate::polyhedra::{HPolyhedron, LpResult, Sense, VRep};
use crate::rational::{add, fmt_vec, int, rat, unit_vector, zeros, Rat};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ValueKind {
    Exact,
    Numeric { tol: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhoResult {
    pub value: Rat,
    pub attained: bool,
    pub kind: ValueKind,
    /// Branches whose own minimum equals the overall minimum.
    pub optimal_branches: Vec<usize>,
}

/// Constraint set of `x` inside branch `j`, in `(λ, aux)` coordinates.
pub fn branch_feasible_set(
    inst: &ProblemInstance,
    pa: &PolyhedralAcceptance,
    j: usize,
    x: &[Rat],
) -> HPolyhedron {
    let big_n = inst.n_assets();
    let k = pa.aux_dim;
    let payoffs = inst.market.payoffs();
    let m: Vec<Vec<Rat>> = (0..pa.n + k)
        .map(|r| {
            if r < pa.n {
                let mut row = payoffs[r].clone();
                row.extend(zeros(k));
                row
            } else {
                unit_vector(big_n + k, big_n + r - pa.n)
            }
        })
        .collect();
    let mut offset = x.to_vec();
    offset.extend(zeros(k));
    pa.branches[j].preimage(&m, &offset, big_n + k)
}

fn lifted_prices(inst: &ProblemInstance, aux_dim: usize) -> Vec<Rat> {
    let mut c = inst.market.prices().to_vec();
    c.extend(zeros(aux_dim));
    c
}

fn polyhedral(inst: &ProblemInstance) -> Result<&PolyhedralAcceptance> {
    inst.compiled
        .polyhedral()
        .ok_or_else(|| Error::UnsupportedVariant("acceptance set is not polyhedral".into()))
}

/// The price functional on atoms must be `(x1 + x2)/2` for the star set's
/// closed forms to apply.
fn star2d_prices_ok(inst: &ProblemInstance) -> Result<()> {
    match inst.market.price_functional_on_atoms() {
        Some(c) if c == vec![rat(1, 2), rat(1, 2)] => Ok(()),
        _ => Err(Error::UnsupportedVariant(
            "star2d closed forms need M = ℝ² priced by (x1 + x2)/2".into(),
        )),
    }
}

pub fn rho(inst: &ProblemInstance, x: &[Rat]) -> Result<RhoResult> {
    inst.check_position(x)?;
    match &inst.compiled {
        CompiledAcceptance::Polyhedral(pa) => {
            let c = lifted_prices(inst, pa.aux_dim);
            let mut best: Option<Rat> = None;
            let mut values: Vec<Option<Rat>> = Vec::new();
            for j in 0..pa.branches.len() {
                match branch_feasible_set(inst, pa, j, x).lp(&c, Sense::Min) {
                    LpResult::Optimal { value, .. } => {
                        if best.as_ref().is_none_or(|b| value < *b) {
                            best = Some(value.clone());
                        }
                        values.push(Some(value));
                    }
                    LpResult::Infeasible => values.push(None),
                    LpResult::Unbounded { ray, .. } => {
                        return Err(Error::AcceptabilityArbitrage {
                            ray: fmt_vec(&ray[..inst.n_assets()]),
                        })
                    }
                }
            }
            let value = best.ok_or(Error::NeverAcceptable)?;
            let optimal_branches = (0..values.len())
                .filter(|&j| values[j].as_ref() == Some(&value))
                .collect();
            Ok(RhoResult {
                value,
                attained: true,
                kind: ValueKind::Exact,
                optimal_branches,
            })
        }
        CompiledAcceptance::Utility(_) => {
            let opts = SmoothOptions::default();
            let r = smooth_rho(inst, x, &opts)?;
            Ok(RhoResult {
                value: r.value_rat(),
                attained: true,
                kind: ValueKind::Numeric { tol: opts.tol },
                optimal_branches: vec![0],
            })
        }
        CompiledAcceptance::Star2d => {
            star2d_prices_ok(inst)?;
            Ok(RhoResult {
                value: -(&x[0] + &x[1] + int(2)) / int(2),
                attained: false,
                kind: ValueKind::Exact,
                optimal_branches: vec![],
            })
        }
    }
}

/// One convex piece of an optimal set: a face of some branch problem,
/// projected to portfolio coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalPiece {
    pub branches: Vec<usize>,
    pub face: HPolyhedron,
    /// Recession cone of the face.
    pub cone: HPolyhedron,
    /// Vertices lie in the orthogonal complement of the lineality space.
    pub vrep: VRep,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimalSet {
    pub rho: Rat,
    pub kind: ValueKind,
    pub pieces: Vec<OptimalPiece>,
    /// Reason the set is empty, when it is.
    pub certificate: Option<String>,
}

pub const STAR2D_EMPTY_CERTIFICATE: &str = "A + ker(pi) = {x : x2 > -x1 - 2} is open, so the boundaries of A and A + ker(pi) are disjoint and no eligible payoff attains rho";

impl OptimalSet {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.pieces.iter().all(|p| p.vrep.is_bounded())
    }

    pub fn contains(&self, lambda: &[Rat]) -> bool {
        self.pieces.iter().any(|p| p.face.contains_point(lambda))
    }

    /// Largest dimension over the pieces.
    pub fn dimension(&self) -> Result<usize> {
        let mut d = 0;
        for p in &self.pieces {
            d = d.max(p.face.dimension()?);
        }
        Ok(d)
    }

    fn collect(&self, f: impl Fn(&VRep) -> &Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
        let mut all: Vec<Vec<Rat>> = self
            .pieces
            .iter()
            .flat_map(|p| f(&p.vrep).iter().cloned())
            .collect();
        all.sort();
        all.dedup();
        all
    }

    pub fn vertices(&self) -> Vec<Vec<Rat>> {
        self.collect(|v| &v.vertices)
    }

    pub fn rays(&self) -> Vec<Vec<Rat>> {
        self.collect(|v| &v.rays)
    }

    pub fn lineality(&self) -> Vec<Vec<Rat>> {
        self.collect(|v| &v.lineality)
    }

    pub fn faces(&self) -> Vec<HPolyhedron> {
        self.pieces.iter().map(|p| p.face.clone()).collect()
    }
}

pub fn optimal_set(inst: &ProblemInstance, x: &[Rat]) -> Result<OptimalSet> {
    let r = rho(inst, x)?;
    match &inst.compiled {
        CompiledAcceptance::Polyhedral(pa) => {
            let c = lifted_prices(inst, pa.aux_dim);
            let big_n = inst.n_assets();
            let mut pieces: Vec<OptimalPiece> = Vec::new();
            for &j in &r.optimal_branches {
                let lifted = branch_feasible_set(inst, pa, j, x);
                let mut face = lifted.clone();
                face.push_eq(c.clone(), r.value.clone());
                let face = face.project_onto_leading(big_n).without_redundancy();
                pieces.push(OptimalPiece {
                    branches: vec![j],
                    cone: face.recession_cone()?,
                    vrep: face.vrep()?,
                    face,
                });
            }
            Ok(OptimalSet {
                rho: r.value,
                kind: r.kind,
                pieces: prune_pieces(pieces),
                certificate: None,
            })
        }
        CompiledAcceptance::Utility(_) => {
            let s = smooth_rho(inst, x, &SmoothOptions::default())?;
            let point = s.lambda_rat();
            let mut face = HPolyhedron::universe(point.len());
            for (i, v) in point.iter().enumerate() {
                face.push_eq(unit_vector(point.len(), i), v.clone());
            }
            Ok(OptimalSet {
                rho: r.value,
                kind: r.kind,
                pieces: vec![OptimalPiece {
                    branches: vec![0],
                    cone: face.recession_cone()?,
                    vrep: VRep {
                        dim: point.len(),
                        vertices: vec![point],
                        rays: vec![],
                        lineality: vec![],
                    },
                    face,
                }],
                certificate: None,
            })
        }
        CompiledAcceptance::Star2d => Ok(OptimalSet {
            rho: r.value,
            kind: r.kind,
            pieces: vec![],
            certificate: Some(STAR2D_EMPTY_CERTIFICATE.into()),
        }),
    }
}

/// Drops pieces contained in another piece, keeping the branch labels.
fn prune_pieces(mut pieces: Vec<OptimalPiece>) -> Vec<OptimalPiece> {
    let mut i = 0;
    while i < pieces.len() {
        let host = (0..pieces.len()).find(|&k| k != i && pieces[k].face.contains(&pieces[i].face));
        match host {
            Some(k) => {
                let labels = pieces[i].branches.clone();
                pieces[k].branches.extend(labels);
                pieces[k].branches.sort_unstable();
                pieces.remove(i);
            }
            None => i += 1,
        }
    }
    pieces
}

#[derive(Clone, Debug, PartialEq)]
pub enum Closedness {
    /// Finite union of polyhedra; the pieces are the certificate.
    Closed,
    NotClosed {
        formula: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedSet {
    /// One polyhedron in position space per acceptance branch.
    pub pieces: Vec<HPolyhedron>,
    pub closedness: Closedness,
}

impl AugmentedSet {
    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.pieces.iter().any(|p| p.contains_point(x))
    }
}

pub fn augmented_set(inst: &ProblemInstance) -> Result<AugmentedSet> {
    match &inst.compiled {
        CompiledAcceptance::Polyhedral(pa) => {
            let dim = pa.lifted_dim();
            let mut dirs: Vec<Vec<Rat>> = inst
                .kernel_payoffs()
                .into_iter()
                .map(|mut v| {
                    v.extend(zeros(pa.aux_dim));
                    v
                })
                .collect();
            dirs.extend((pa.n..dim).map(|i| unit_vector(dim, i)));
            let pieces = pa
                .branches
                .iter()
                .map(|b| b.fm_project(&dirs).truncate_coords(pa.n))
                .collect();
            Ok(AugmentedSet {
                pieces,
                closedness: Closedness::Closed,
            })
        }
        CompiledAcceptance::Star2d => {
            star2d_prices_ok(inst)?;
            Ok(AugmentedSet {
                pieces: vec![],
                closedness: Closedness::NotClosed {
                    formula: "{x : x2 > -x1 - 2}".into(),
                },
            })
        }
        CompiledAcceptance::Utility(_) => Err(Error::UnsupportedVariant(
            "augmented set of a utility acceptance set is not polyhedral".into(),
        )),
    }
}

/// `inf { m : X + m U ∈ A + ker π }`, one LP in `m` per augmented piece.
pub fn rho_via_augmented(inst: &ProblemInstance, x: &[Rat]) -> Result<Rat> {
    inst.check_position(x)?;
    let aug = augmented_set(inst)?;
    if let Closedness::NotClosed { .. } = aug.closedness {
        return rho(inst, x).map(|r| r.value);
    }
    let u = inst.market.unit_payoff();
    let column: Vec<Vec<Rat>> = u.iter().map(|ui| vec![ui.clone()]).collect();
    let mut best: Option<Rat> = None;
    for piece in &aug.pieces {
        match piece.preimage(&column, x, 1).lp(&[Rat::one()], Sense::Min) {
            LpResult::Optimal { value, .. } => {
                if best.as_ref().is_none_or(|b| value < *b) {
                    best = Some(value);
                }
            }
            LpResult::Infeasible => {}
            LpResult::Unbounded { .. } => {
                return Err(Error::AcceptabilityArbitrage {
                    ray: fmt_vec(inst.market.unit_coeffs()),
                })
            }
        }
    }
    best.ok_or(Error::NeverAcceptable)
}

/// Every eligible payoff making `x` acceptable, one polyhedron per feasible
/// branch, in portfolio coordinates.
pub fn feasible_sets(inst: &ProblemInstance, x: &[Rat]) -> Result<Vec<HPolyhedron>> {
    let pa = polyhedral(inst)?;
    let big_n = inst.n_assets();
    Ok((0..pa.branches.len())
        .map(|j| branch_feasible_set(inst, pa, j, x))
        .filter(|p| !p.is_empty())
        .map(|p| p.project_onto_leading(big_n))
        .collect())
}

pub const EPSILON_STRICTNESS_NOTE: &str =
    "price constraint is closed (<= rho + eps); the open version has the same interior";

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonSet {
    pub epsilon: Rat,
    pub rho: Rat,
    /// `(branch, polyhedron in portfolio coordinates)`.
    pub pieces: Vec<(usize, HPolyhedron)>,
    pub strictness_note: &'static str,
}

impl EpsilonSet {
    pub fn contains(&self, lambda: &[Rat]) -> bool {
        self.pieces.iter().any(|(_, p)| p.contains_point(lambda))
    }

    pub fn polyhedra(&self) -> Vec<HPolyhedron> {
        self.pieces.iter().map(|(_, p)| p.clone()).collect()
    }
}

pub fn epsilon_optimal_set(inst: &ProblemInstance, x: &[Rat], eps: &Rat) -> Result<EpsilonSet> {
    if !eps.is_positive() {
        return Err(Error::BadParameter("epsilon must be positive".into()));
    }
    let pa = polyhedral(inst)?;
    let r = rho(inst, x)?;
    let big_n = inst.n_assets();
    let c = lifted_prices(inst, pa.aux_dim);
    let level = &r.value + eps;
    let mut pieces = Vec::new();
    for j in 0..pa.branches.len() {
        let mut p = branch_feasible_set(inst, pa, j, x);
        p.push_ineq(c.iter().map(|v| -v).collect(), -level.clone());
        if p.is_empty() {
            continue;
        }
        pieces.push((j, p.project_onto_leading(big_n).without_redundancy()));
    }
    Ok(EpsilonSet {
        epsilon: eps.clone(),
        rho: r.value,
        pieces,
        strictness_note: EPSILON_STRICTNESS_NOTE,
    })
}

/// Shifts every piece of an optimal set by `shift` in portfolio space.
pub fn translate_optimal_set(set: &OptimalSet, shift: &[Rat]) -> Vec<Vec<Rat>> {
    set.vertices().iter().map(|v| add(v, shift)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::{AcceptanceSet, Row};
    use crate::model::{market_from_assets, validate_market, FiniteSampleSpace};

    fn orthant_full_market() -> ProblemInstance {
        let s = FiniteSampleSpace::uniform(2);
        let m = validate_market(
            &s,
            vec![vec![int(1), int(0)], vec![int(0), int(1)]],
            vec![rat(1, 2), rat(1, 2)],
        )
        .unwrap();
        let acc = AcceptanceSet::Polyhedral {
            rows: vec![
                Row {
                    phi: vec![int(1), int(0)],
                    rhs: int(0),
                },
                Row {
                    phi: vec![int(0), int(1)],
                    rhs: int(0),
                },
            ],
        };
        ProblemInstance::new("orthant", s, m, acc).unwrap()
    }

    #[test]
    fn orthant_rho_and_singleton() {
        let inst = orthant_full_market();
        let r = rho(&inst, &[int(1), int(-3)]).unwrap();
        assert_eq!(r.value, int(1));
        let set = optimal_set(&inst, &[int(1), int(-3)]).unwrap();
        assert_eq!(set.vertices(), vec![vec![int(-1), int(3)]]);
        assert!(set.is_bounded());
        assert_eq!(
            rho_via_augmented(&inst, &[int(1), int(-3)]).unwrap(),
            int(1)
        );
    }

    #[test]
    fn scalable_direction_gives_ray() {
        // A = {x1 >= 0}, full market priced by x1: (0, ±1) is free.
        let s = FiniteSampleSpace::uniform(2);
        let m = validate_market(
            &s,
            vec![vec![int(1), int(0)], vec![int(0), int(1)]],
            vec![int(1), int(0)],
        )
        .unwrap();
        let acc = AcceptanceSet::Polyhedral {
            rows: vec![Row {
                phi: vec![int(1), int(0)],
                rhs: int(0),
            }],
        };
        let inst = ProblemInstance::new("halfplane", s, m, acc).unwrap();
        let set = optimal_set(&inst, &[int(2), int(5)]).unwrap();
        assert_eq!(set.rho, int(-2));
        assert_eq!(set.lineality(), vec![vec![int(0), int(1)]]);
    }

    #[test]
    fn arbitrage_is_reported() {
        // Z = (1, -1) costs nothing and A = {x1 + x2 >= 0} absorbs it; Z' = (1,0)
        // priced at zero gives an improving unbounded direction.
        let s = FiniteSampleSpace::uniform(2);
        let m = market_from_assets(
            &s,
            &[
                (vec![int(1), int(1)], int(1)),
                (vec![int(1), int(0)], int(0)),
            ],
        )
        .unwrap();
        let acc = AcceptanceSet::Polyhedral {
            rows: vec![Row {
                phi: vec![int(1), int(1)],
                rhs: int(0),
            }],
        };
        let inst = ProblemInstance::new("arb", s, m, acc).unwrap();
        assert!(matches!(
            rho(&inst, &[int(0), int(0)]),
            Err(Error::AcceptabilityArbitrage { .. })
        ));
    }

    #[test]
    fn epsilon_set_contains_optimal_set() {
        let inst = orthant_full_market();
        let x = [int(0), int(0)];
        let eps = epsilon_optimal_set(&inst, &x, &rat(1, 10)).unwrap();
        assert!(eps.contains(&[int(0), int(0)]));
        assert!(eps.contains(&[rat(1, 10), rat(1, 10)]));
        assert!(!eps.contains(&[rat(1, 5), rat(1, 5)]));
        assert!(matches!(
            epsilon_optimal_set(&inst, &x, &int(0)),
            Err(Error::BadParameter(_))
        ));
    }
}
