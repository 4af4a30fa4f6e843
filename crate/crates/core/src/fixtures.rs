//! Built-in instances: the small worked examples of the theory.
//!
//! * `p1_r3_unique`: full market on ℝ³ priced by the average, acceptance
//!   set `conv{(0,-1,1), (-1,0,1), (-1/2,0,0)} + ℝ³₊`.
//! * `p2_var_lsc`: VaR at level 1/4 on three atoms with weights
//!   (1/4, 1/4, 1/2), cash and the zero-price payoff `Z = (1,0,-1)`.
//! * `p3_star2d`: the star-shaped set with exponential boundary on ℝ².
//! * `p4_es_cash`: ES at level 1/2 on four equally likely atoms, cash only.
//! * `p5_staircase_trunc`: the staircase set on ℝ², six steps.

use std::fmt;
use std::str::FromStr;

use crate::acceptance::{AcceptanceSet, AnalyticSet, Row};
use crate::error::{Error, Result};
use crate::model::{market_from_assets, FiniteSampleSpace, Market, ProblemInstance};
use crate::polyhedra::VRep;
use crate::rational::{int, rat, unit_vector, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixtureId {
    P1R3Unique,
    P2VarLsc,
    P3Star2d,
    P4EsCash,
    P5StaircaseTrunc,
}

impl FixtureId {
    pub const ALL: [FixtureId; 5] = [
        FixtureId::P1R3Unique,
        FixtureId::P2VarLsc,
        FixtureId::P3Star2d,
        FixtureId::P4EsCash,
        FixtureId::P5StaircaseTrunc,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FixtureId::P1R3Unique => "p1_r3_unique",
            FixtureId::P2VarLsc => "p2_var_lsc",
            FixtureId::P3Star2d => "p3_star2d",
            FixtureId::P4EsCash => "p4_es_cash",
            FixtureId::P5StaircaseTrunc => "p5_staircase_trunc",
        }
    }

    pub fn build(self) -> ProblemInstance {
        let built = match self {
            FixtureId::P1R3Unique => p1_r3_unique(),
            FixtureId::P2VarLsc => p2_var_lsc(),
            FixtureId::P3Star2d => p3_star2d(),
            FixtureId::P4EsCash => p4_es_cash(),
            FixtureId::P5StaircaseTrunc => p5_staircase_trunc(),
        };
        built.expect("built-in fixture is valid")
    }
}

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FixtureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FixtureId::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown fixture {s:?}")))
    }
}

fn identity_market(space: &FiniteSampleSpace, price: Rat) -> Result<Market> {
    let n = space.n_atoms();
    let assets: Vec<(Vec<Rat>, Rat)> = (0..n).map(|i| (unit_vector(n, i), price.clone())).collect();
    market_from_assets(space, &assets)
}

/// The three generators of the ℝ³ example.
pub fn p1_generators() -> Vec<Vec<Rat>> {
    vec![
        vec![int(0), int(-1), int(1)],
        vec![int(-1), int(0), int(1)],
        vec![rat(-1, 2), int(0), int(0)],
    ]
}

pub fn p1_r3_unique() -> Result<ProblemInstance> {
    let space = FiniteSampleSpace::with_probs(vec![rat(1, 3); 3])?;
    let gens = VRep {
        dim: 3,
        vertices: p1_generators(),
        rays: (0..3).map(|i| unit_vector(3, i)).collect(),
        lineality: vec![],
    };
    let h = gens.hrep()?.without_redundancy();
    let rows = h
        .ineqs
        .iter()
        .map(|c| Row {
            phi: c.phi.0.clone(),
            rhs: c.rhs.clone(),
        })
        .collect();
    let market = identity_market(&space, rat(1, 3))?;
    ProblemInstance::new(
        "p1_r3_unique",
        space,
        market,
        AcceptanceSet::Polyhedral { rows },
    )
}

pub fn p2_space() -> FiniteSampleSpace {
    FiniteSampleSpace::new(
        vec!["E".into(), "F".into(), "G".into()],
        vec![rat(1, 4), rat(1, 4), rat(1, 2)],
    )
    .expect("valid weights")
}

pub fn p2_z() -> Vec<Rat> {
    vec![int(1), int(0), int(-1)]
}

pub fn p2_var_lsc() -> Result<ProblemInstance> {
    let space = p2_space();
    let market = market_from_assets(&space, &[(vec![int(1); 3], int(1)), (p2_z(), int(0))])?;
    ProblemInstance::new(
        "p2_var_lsc",
        space,
        market,
        AcceptanceSet::ValueAtRisk { alpha: rat(1, 4) },
    )
}

fn plane_space() -> Result<FiniteSampleSpace> {
    FiniteSampleSpace::new(vec!["w1".into(), "w2".into()], vec![rat(1, 2), rat(1, 2)])
}

pub fn p3_star2d() -> Result<ProblemInstance> {
    let space = plane_space()?;
    let market = identity_market(&space, rat(1, 2))?;
    ProblemInstance::new(
        "p3_star2d",
        space,
        market,
        AcceptanceSet::Analytic(AnalyticSet::Star2d),
    )
}

pub fn p4_es_cash() -> Result<ProblemInstance> {
    let space = FiniteSampleSpace::uniform(4);
    let market = market_from_assets(&space, &[(vec![int(1); 4], int(1))])?;
    ProblemInstance::new(
        "p4_es_cash",
        space,
        market,
        AcceptanceSet::ExpectedShortfall { alpha: rat(1, 2) },
    )
}

pub fn p5_staircase_trunc() -> Result<ProblemInstance> {
    let space = plane_space()?;
    let market = identity_market(&space, rat(1, 2))?;
    ProblemInstance::new(
        "p5_staircase_trunc",
        space,
        market,
        AcceptanceSet::Analytic(AnalyticSet::Staircase2d),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_build_identically() {
        for f in FixtureId::ALL {
            let a = f.build();
            let b = f.build();
            assert_eq!(a.compiled, b.compiled);
            assert_eq!(f.id().parse::<FixtureId>().unwrap(), f);
        }
    }

    #[test]
    fn p1_generators_are_acceptable() {
        let inst = FixtureId::P1R3Unique.build();
        for g in p1_generators() {
            assert!(inst.accepts(&g));
        }
        assert!(!inst.accepts(&[rat(-1, 2), rat(-1, 100), int(0)]));
    }
}
