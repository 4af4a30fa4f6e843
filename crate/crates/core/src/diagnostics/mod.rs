//! Executable checks for existence, uniqueness and stability of optimal
//! payoffs, plus perturbation probes for semicontinuity.

mod probe;

pub use probe::{
    epsilon_lsc_probe, lsc_probe, Classification, Hypotheses, ProbeOptions, ProbeReport,
};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::acceptance::{star2d_contains, CompiledAcceptance, PolyhedralAcceptance};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::ProblemInstance;
use crate::polyhedra::{HPolyhedron, LpResult, Sense, VRep};
use crate::rational::{dot, int, linf_norm, rat, unit_vector, zeros, Rat};
use crate::risk_engine::{branch_feasible_set, optimal_set, rho};

#[derive(Clone, Debug, PartialEq)]
pub struct DealReport {
    /// Nonzero zero-price portfolio whose payoff is acceptable.
    pub good_deal: Option<Vec<Rat>>,
    /// Nonzero zero-price portfolio whose payoff is a recession direction.
    pub scalable_good_deal: Option<Vec<Rat>>,
    pub note: Option<String>,
}

/// Finds a nonzero point of `{λ : prices·λ = 0} ∩ S` by maximizing and
/// minimizing each portfolio coordinate, where `S` is given in `(λ, aux)`.
fn nonzero_kernel_point(set: &HPolyhedron, prices: &[Rat]) -> Option<Vec<Rat>> {
    let big_n = prices.len();
    let mut s = set.clone();
    let mut price_row = prices.to_vec();
    price_row.extend(zeros(set.dim - big_n));
    s.push_eq(price_row, Rat::zero());
    for i in 0..big_n {
        for sense in [Sense::Max, Sense::Min] {
            let c = unit_vector(set.dim, i);
            match s.lp(&c, sense) {
                LpResult::Optimal { value, point, .. } if !value.is_zero() => {
                    return Some(point[..big_n].to_vec())
                }
                LpResult::Unbounded { ray, .. } => return Some(ray[..big_n].to_vec()),
                _ => {}
            }
        }
    }
    None
}

pub fn deal_check(inst: &ProblemInstance) -> Result<DealReport> {
    let prices = inst.market.prices();
    let zero = zeros(inst.n_atoms());
    match &inst.compiled {
        CompiledAcceptance::Polyhedral(pa) => {
            let mut good = None;
            let mut scalable = None;
            for j in 0..pa.branches.len() {
                let set = branch_feasible_set(inst, pa, j, &zero);
                if set.is_empty() {
                    continue;
                }
                if good.is_none() {
                    good = nonzero_kernel_point(&set, prices);
                }
                if scalable.is_none() {
                    scalable = nonzero_kernel_point(&set.recession_cone()?, prices);
                }
            }
            Ok(DealReport {
                good_deal: good,
                scalable_good_deal: scalable,
                note: None,
            })
        }
        CompiledAcceptance::Utility(_) => {
            // The recession cone of an exponential-utility set is the
            // positive orthant, which also sits inside the set itself.
            let n = inst.n_atoms();
            let orthant = HPolyhedron::nonnegative_orthant(n);
            let pa = PolyhedralAcceptance {
                n,
                aux_dim: 0,
                branches: vec![orthant],
                shape: inst.compiled.shape(),
                branchwise_monotone: true,
            };
            let set = branch_feasible_set(inst, &pa, 0, &zero);
            let w = nonzero_kernel_point(&set, prices);
            Ok(DealReport {
                good_deal: w.clone(),
                scalable_good_deal: w,
                note: Some(
                    "recession cone taken as the positive orthant; good deals searched inside it only".into(),
                ),
            })
        }
        CompiledAcceptance::Star2d => {
            let good = vec![int(1), int(-1)];
            let scalable = vec![int(-1), int(1)];
            let g = inst.market.payoff(&good);
            let ok_good = inst.market.price(&good).is_zero()
                && star2d_contains(
                    crate::rational::to_f64(&g[0]),
                    crate::rational::to_f64(&g[1]),
                );
            let s = inst.market.payoff(&scalable);
            let ok_scalable = inst.market.price(&scalable).is_zero()
                && [1.0, 10.0, 100.0, 1000.0].iter().all(|t| {
                    let x1 = crate::rational::to_f64(&s[0]) * t;
                    let x2 = crate::rational::to_f64(&s[1]) * t;
                    star2d_contains(x1, x2)
                });
            Ok(DealReport {
                good_deal: ok_good.then_some(good),
                scalable_good_deal: ok_scalable.then_some(scalable),
                note: Some("witnesses checked against the membership oracle".into()),
            })
        }
    }
}

/// Does the payoff of `w` belong to the acceptance set (some branch)?
pub fn verify_good_deal(inst: &ProblemInstance, w: &[Rat]) -> bool {
    !w.iter().all(Zero::is_zero)
        && inst.market.price(w).is_zero()
        && inst.accepts(&inst.market.payoff(w))
}

/// Is the payoff of `d` a recession direction of some branch?
pub fn verify_scalable_deal(inst: &ProblemInstance, d: &[Rat]) -> bool {
    if d.iter().all(Zero::is_zero) || !inst.market.price(d).is_zero() {
        return false;
    }
    let y = inst.market.payoff(d);
    match &inst.compiled {
        CompiledAcceptance::Polyhedral(pa) => pa.branches.iter().any(|b| {
            let cone = b.homogenized();
            let probe = PolyhedralAcceptance {
                n: pa.n,
                aux_dim: pa.aux_dim,
                branches: vec![cone],
                shape: pa.shape,
                branchwise_monotone: true,
            };
            probe.branch_accepts(0, &y)
        }),
        CompiledAcceptance::Utility(_) => y.iter().all(|v| !v.is_negative()),
        CompiledAcceptance::Star2d => [1i64, 10, 100, 1000]
            .iter()
            .all(|&t| inst.accepts(&y.iter().map(|v| v * int(t)).collect::<Vec<_>>())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Existence {
    AllExist,
    NoneExistCertificate,
    PerPosition,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExistenceReport {
    pub verdict: Existence,
    pub reasons: Vec<String>,
}

pub fn existence_report(inst: &ProblemInstance) -> Result<ExistenceReport> {
    let deals = deal_check(inst)?;
    let shape = inst.compiled.shape();
    let mut reasons = Vec::new();
    let verdict = match &inst.compiled {
        CompiledAcceptance::Polyhedral(pa) if shape.star_shaped => {
            if pa.branches.len() == 1 {
                reasons.push(
                    "polyhedral acceptance set: A + ker(pi) is polyhedral, hence closed".into(),
                );
            } else {
                reasons.push(
                    "finite union of polyhedra: every branch LP attains its finite optimum".into(),
                );
            }
            if deals.scalable_good_deal.is_none() {
                reasons.push("no scalable good deals".into());
            }
            if deals.good_deal.is_none() {
                reasons.push("star-shaped with no good deals".into());
            }
            Existence::AllExist
        }
        CompiledAcceptance::Polyhedral(_) => {
            reasons.push(
                "not star-shaped: no global criterion applies; each branch LP attains where rho is finite".into(),
            );
            Existence::PerPosition
        }
        CompiledAcceptance::Utility(_) => {
            if deals.scalable_good_deal.is_none() {
                reasons.push("closed convex set with no scalable good deals".into());
                Existence::AllExist
            } else {
                reasons.push("scalable good deal present".into());
                Existence::PerPosition
            }
        }
        CompiledAcceptance::Star2d => {
            reasons.push(crate::risk_engine::STAR2D_EMPTY_CERTIFICATE.into());
            Existence::NoneExistCertificate
        }
    };
    Ok(ExistenceReport { verdict, reasons })
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessAt {
    /// Dimension of the optimal set; zero means a single payoff.
    pub face_dim: usize,
    /// Acceptance rows tight on the whole optimal face (single-branch
    /// instances without auxiliary variables only).
    pub active_rows: Option<Vec<usize>>,
    /// `dim(ker π ∩ ⋂_{i active} ker(φ_i ∘ P))`.
    pub test_subspace_dim: Option<usize>,
}

impl UniquenessAt {
    pub fn is_singleton(&self) -> bool {
        self.face_dim == 0
    }
}

pub fn uniqueness_at(inst: &ProblemInstance, x: &[Rat]) -> Result<UniquenessAt> {
    let set = optimal_set(inst, x)?;
    if set.is_empty() {
        return Err(Error::EmptyOptimalSet);
    }
    let face_dim = set.dimension()?;
    let mut active_rows = None;
    let mut test_subspace_dim = None;
    if let CompiledAcceptance::Polyhedral(pa) = &inst.compiled {
        if pa.branches.len() == 1 && pa.aux_dim == 0 {
            let branch = &pa.branches[0];
            let face = &set.pieces[0].face;
            let payoffs = inst.market.payoffs();
            let big_n = inst.n_assets();
            let mut active = Vec::new();
            let mut rows = vec![inst.market.prices().to_vec()];
            for (i, c) in branch.ineqs.iter().enumerate() {
                // φ_i(X + Pλ) = φ_i(X) + (φ_i P)·λ
                let psi = linalg::vec_mat(&c.phi.0, payoffs, big_n);
                let base = dot(&c.phi.0, x);
                let tight = match face.lp(&psi, Sense::Max) {
                    LpResult::Optimal { value, .. } => value + &base == c.rhs,
                    _ => false,
                };
                if tight {
                    active.push(i);
                    rows.push(psi);
                }
            }
            for c in &branch.eqs {
                rows.push(linalg::vec_mat(&c.phi.0, payoffs, big_n));
            }
            test_subspace_dim = Some(big_n - linalg::rank(&rows, big_n));
            active_rows = Some(active);
        }
    }
    Ok(UniquenessAt {
        face_dim,
        active_rows,
        test_subspace_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlobalUniqueness {
    /// Conic polyhedral set with `ker π ∩ ker(φ_i ∘ P) = {0}` for every row.
    ConeCorollary,
    /// Strictly convex acceptance set.
    StrictConvexity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessReport {
    pub global_certificate: Option<GlobalUniqueness>,
    /// A sampled position whose optimal set has positive dimension.
    pub falsification_witness: Option<(Vec<Rat>, usize)>,
    pub samples_checked: usize,
}

pub const DEFAULT_UNIQUENESS_SAMPLES: usize = 200;

/// Random rational position with entries in `[-range, range]` on a grid of
/// pitch `1/den`.
pub fn random_position(rng: &mut impl Rng, n: usize, range: i64, den: i64) -> Vec<Rat> {
    (0..n)
        .map(|_| rat(rng.gen_range(-range * den..=range * den), den))
        .collect()
}

pub fn uniqueness_report(
    inst: &ProblemInstance,
    samples: usize,
    seed: u64,
) -> Result<UniquenessReport> {
    let mut global = None;
    match &inst.compiled {
        CompiledAcceptance::Utility(_) => global = Some(GlobalUniqueness::StrictConvexity),
        CompiledAcceptance::Polyhedral(pa)
            if pa.branches.len() == 1 && pa.aux_dim == 0 && pa.shape.conic =>
        {
            let b = &pa.branches[0];
            let big_n = inst.n_assets();
            let all_rows_ok = b.ineqs.iter().chain(&b.eqs).all(|c| {
                let psi = linalg::vec_mat(&c.phi.0, inst.market.payoffs(), big_n);
                linalg::rank(&[inst.market.prices().to_vec(), psi], big_n) == big_n
            });
            if all_rows_ok {
                global = Some(GlobalUniqueness::ConeCorollary);
            }
        }
        _ => {}
    }
    let mut witness = None;
    let mut checked = 0;
    if global.is_none() && inst.compiled.polyhedral().is_some() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = random_position(&mut rng, inst.n_atoms(), 2, 8);
            checked += 1;
            let u = uniqueness_at(inst, &x)?;
            if u.face_dim >= 1 {
                witness = Some((x, u.face_dim));
                break;
            }
        }
    }
    Ok(UniquenessReport {
        global_certificate: global,
        falsification_witness: witness,
        samples_checked: checked,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum UscVerdict {
    Usc,
    NotUsc { scalable_witness: Vec<Rat> },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct UscReport {
    pub verdict: UscVerdict,
    /// Zero position's optimal set is unbounded (corroboration).
    pub unbounded_at_zero: Option<bool>,
}

pub fn usc_report(inst: &ProblemInstance) -> Result<UscReport> {
    if !inst.compiled.shape().star_shaped {
        return Ok(UscReport {
            verdict: UscVerdict::Inconclusive {
                reason: "acceptance set is not star-shaped".into(),
            },
            unbounded_at_zero: optimal_set(inst, &zeros(inst.n_atoms()))
                .ok()
                .filter(|s| !s.is_empty())
                .map(|s| !s.is_bounded()),
        });
    }
    let deals = deal_check(inst)?;
    let unbounded_at_zero = match optimal_set(inst, &zeros(inst.n_atoms())) {
        Ok(s) if !s.is_empty() => Some(!s.is_bounded()),
        _ => None,
    };
    let verdict = match deals.scalable_good_deal {
        None => UscVerdict::Usc,
        Some(w) => UscVerdict::NotUsc {
            scalable_witness: w,
        },
    };
    Ok(UscReport {
        verdict,
        unbounded_at_zero,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionReport {
    /// `conv(vertices) + cone` reproduces the optimal face.
    pub reconstruction: bool,
    /// Every vertex along the segment stays in the common box.
    pub bounded: bool,
    pub common_bound: Rat,
    pub max_vertex_norm: Rat,
}

impl DecompositionReport {
    pub fn holds(&self) -> bool {
        self.reconstruction && self.bounded
    }
}

pub const SEGMENT_SAMPLES: i64 = 9;

/// Checks the decomposition of optimal sets into recession cone plus a
/// bounded part along the segment `X + s D`, `s ∈ [0, 1]`.
///
/// Each vertex `v` of the bounded part solves a square system `A_I v =
/// β_I(X)` made of the price equation, the complement equations, and tight
/// acceptance rows. The bound `||A_I^{-1}||_inf · max_s ||β_I(X_s)||_inf`
/// is computed for every system met, and the largest one is the common box.
pub fn decomposition_check(
    inst: &ProblemInstance,
    x: &[Rat],
    d: &[Rat],
) -> Result<DecompositionReport> {
    let pa =
        match &inst.compiled {
            CompiledAcceptance::Polyhedral(pa) if pa.branches.len() == 1 && pa.aux_dim == 0 => pa,
            _ => return Err(Error::UnsupportedVariant(
                "decomposition check needs a single polyhedral branch without auxiliary variables"
                    .into(),
            )),
        };
    let branch = &pa.branches[0];
    let big_n = inst.n_assets();
    let payoffs = inst.market.payoffs();
    let prices = inst.market.prices().to_vec();
    let psi: Vec<Vec<Rat>> = branch
        .ineqs
        .iter()
        .map(|c| linalg::vec_mat(&c.phi.0, payoffs, big_n))
        .collect();
    let eq_psi: Vec<Vec<Rat>> = branch
        .eqs
        .iter()
        .map(|c| linalg::vec_mat(&c.phi.0, payoffs, big_n))
        .collect();

    let samples: Vec<Vec<Rat>> = (0..SEGMENT_SAMPLES)
        .map(|k| {
            let s = rat(k, SEGMENT_SAMPLES - 1);
            x.iter().zip(d).map(|(a, b)| a + &s * b).collect()
        })
        .collect();
    let mut rhos = Vec::new();
    let mut sets = Vec::new();
    for xs in &samples {
        let set = optimal_set(inst, xs)?;
        if set.is_empty() {
            return Err(Error::EmptyOptimalSet);
        }
        rhos.push(set.rho.clone());
        sets.push(set);
    }

    let mut reconstruction = true;
    for set in &sets {
        let piece = &set.pieces[0];
        reconstruction &= piece.vrep.hrep()?.same_set(&piece.face);
    }

    // Row kinds: 0 = price, 1 = complement, 2 = inequality i, 3 = equality i.
    #[derive(Clone, Copy, PartialEq)]
    enum Kind {
        Price,
        Complement,
        Ineq(usize),
        Eq(usize),
    }
    let beta = |kind: Kind, s: usize| -> Rat {
        match kind {
            Kind::Price => rhos[s].clone(),
            Kind::Complement => Rat::zero(),
            Kind::Ineq(i) => &branch.ineqs[i].rhs - dot(&branch.ineqs[i].phi.0, &samples[s]),
            Kind::Eq(i) => &branch.eqs[i].rhs - dot(&branch.eqs[i].phi.0, &samples[s]),
        }
    };

    let mut common = Rat::zero();
    let mut max_norm = Rat::zero();
    let mut per_vertex: Vec<(Rat, Rat)> = Vec::new();
    for (s, set) in sets.iter().enumerate() {
        let VRep {
            vertices,
            lineality,
            ..
        } = &set.pieces[0].vrep;
        for v in vertices {
            let mut cand: Vec<(Kind, Vec<Rat>)> = vec![(Kind::Price, prices.clone())];
            cand.extend(lineality.iter().map(|l| (Kind::Complement, l.clone())));
            cand.extend(
                eq_psi
                    .iter()
                    .enumerate()
                    .map(|(i, r)| (Kind::Eq(i), r.clone())),
            );
            for (i, r) in psi.iter().enumerate() {
                if dot(r, v) == beta(Kind::Ineq(i), s) {
                    cand.push((Kind::Ineq(i), r.clone()));
                }
            }
            let mut chosen: Vec<(Kind, Vec<Rat>)> = Vec::new();
            for (k, r) in cand {
                let mut rows: Vec<Vec<Rat>> = chosen.iter().map(|(_, r)| r.clone()).collect();
                rows.push(r.clone());
                if linalg::rank(&rows, big_n) == rows.len() {
                    chosen.push((k, r));
                }
                if chosen.len() == big_n {
                    break;
                }
            }
            if chosen.len() < big_n {
                return Err(Error::InvalidInput(
                    "vertex is not determined by its tight rows".into(),
                ));
            }
            let a: Vec<Vec<Rat>> = chosen.iter().map(|(_, r)| r.clone()).collect();
            let inv_norm = inverse_linf_norm(&a);
            let beta_max = (0..samples.len())
                .map(|t| {
                    let b: Vec<Rat> = chosen.iter().map(|(k, _)| beta(*k, t)).collect();
                    linf_norm(&b)
                })
                .max()
                .unwrap_or_else(Rat::zero);
            let bound = &inv_norm * &beta_max;
            let vn = linf_norm(v);
            if bound > common {
                common = bound.clone();
            }
            if vn > max_norm {
                max_norm = vn.clone();
            }
            per_vertex.push((vn, bound));
        }
    }
    let bounded = per_vertex.iter().all(|(vn, _)| *vn <= common);
    Ok(DecompositionReport {
        reconstruction,
        bounded,
        common_bound: common,
        max_vertex_norm: max_norm,
    })
}

/// `||A^{-1}||_inf` (max absolute row sum) of an invertible square matrix.
fn inverse_linf_norm(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let cols: Vec<Vec<Rat>> = (0..n)
        .map(|j| linalg::solve(a, &unit_vector(n, j)).expect("invertible"))
        .collect();
    (0..n)
        .map(|i| cols.iter().map(|c| c[i].abs()).sum::<Rat>())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// Convenience: `rho` finite and the optimal set nonempty at `x`.
pub fn has_optimal_payoff(inst: &ProblemInstance, x: &[Rat]) -> Result<bool> {
    rho(inst, x)?;
    Ok(!optimal_set(inst, x)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::{AcceptanceSet, Row};
    use crate::fixtures::FixtureId;
    use crate::model::{validate_market, FiniteSampleSpace};

    fn full_market(prices: Vec<Rat>, rows: Vec<Row>) -> ProblemInstance {
        let s = FiniteSampleSpace::uniform(2);
        let m =
            validate_market(&s, vec![vec![int(1), int(0)], vec![int(0), int(1)]], prices).unwrap();
        ProblemInstance::new("t", s, m, AcceptanceSet::Polyhedral { rows }).unwrap()
    }

    fn orthant_rows() -> Vec<Row> {
        vec![
            Row {
                phi: vec![int(1), int(0)],
                rhs: int(0),
            },
            Row {
                phi: vec![int(0), int(1)],
                rhs: int(0),
            },
        ]
    }

    #[test]
    fn halfplane_has_scalable_deal() {
        let inst = full_market(
            vec![int(1), int(0)],
            vec![Row {
                phi: vec![int(1), int(0)],
                rhs: int(0),
            }],
        );
        let r = deal_check(&inst).unwrap();
        let w = r.scalable_good_deal.unwrap();
        assert!(verify_scalable_deal(&inst, &w));
        assert!(w[0].is_zero() && !w[1].is_zero());
        assert!(matches!(
            usc_report(&inst).unwrap().verdict,
            UscVerdict::NotUsc { .. }
        ));
    }

    #[test]
    fn orthant_has_no_deals() {
        let inst = full_market(vec![rat(1, 2), rat(1, 2)], orthant_rows());
        let r = deal_check(&inst).unwrap();
        assert_eq!(r.good_deal, None);
        assert_eq!(r.scalable_good_deal, None);
        let u = uniqueness_at(&inst, &[int(0), int(0)]).unwrap();
        assert_eq!(u.face_dim, 0);
        assert_eq!(u.test_subspace_dim, Some(0));
        assert_eq!(usc_report(&inst).unwrap().verdict, UscVerdict::Usc);
    }

    #[test]
    fn orthant_priced_by_first_coordinate() {
        let inst = full_market(vec![int(1), int(0)], orthant_rows());
        let rep = decomposition_check(&inst, &[int(0), int(1)], &[int(1), int(-1)]).unwrap();
        assert!(rep.holds());
    }

    #[test]
    fn p2_deals_and_usc() {
        let inst = FixtureId::P2VarLsc.build();
        let r = deal_check(&inst).unwrap();
        let w = r.good_deal.clone().unwrap();
        assert!(verify_good_deal(&inst, &w));
        let d = r.scalable_good_deal.unwrap();
        assert!(verify_scalable_deal(&inst, &d));
        let usc = usc_report(&inst).unwrap();
        assert!(matches!(usc.verdict, UscVerdict::NotUsc { .. }));
        assert_eq!(usc.unbounded_at_zero, Some(true));
        let u = uniqueness_at(&inst, &zeros(3)).unwrap();
        assert_eq!(u.face_dim, 1);
    }

    #[test]
    fn p1_reports() {
        let inst = FixtureId::P1R3Unique.build();
        assert_eq!(
            existence_report(&inst).unwrap().verdict,
            Existence::AllExist
        );
        assert_eq!(usc_report(&inst).unwrap().verdict, UscVerdict::Usc);
        let rep = decomposition_check(&inst, &zeros(3), &[int(1), int(0), int(0)]).unwrap();
        assert!(rep.holds());
    }

    #[test]
    fn star2d_reports() {
        let inst = FixtureId::P3Star2d.build();
        let r = deal_check(&inst).unwrap();
        assert!(r.good_deal.is_some() && r.scalable_good_deal.is_some());
        assert_eq!(
            existence_report(&inst).unwrap().verdict,
            Existence::NoneExistCertificate
        );
    }
}
