//! Semicontinuity probes along `X + t_k D`, `t_k = 2^{-k}`.
//!
//! For each scale the probe measures, on box-truncated sets, how far the
//! solution set at the base is from the solution set at the perturbed
//! position (lower deficit) and the reverse deviation (outer deficit).

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::acceptance::CompiledAcceptance;
use crate::error::{Error, Result};
use crate::model::ProblemInstance;
use crate::polyhedra::distance::deviation_boxed;
use crate::polyhedra::{HPolyhedron, LpResult, Sense};
use crate::rational::{fmt_rat, int, unit_vector, zeros, Rat};
use crate::risk_engine::{branch_feasible_set, epsilon_optimal_set, optimal_set};

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeOptions {
    /// Largest scale index `K`; scales are `2^{-k}` for `k = 0..=K`.
    pub k_max: u32,
    /// Half-width `B` of the truncation box.
    pub half_width: Rat,
    pub parallel: bool,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            k_max: 16,
            half_width: int(10),
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    ConsistentWithLsc,
    /// Lower deficits stay at or above `delta` over the second half of the
    /// scales and do not decrease there.
    ViolationWitness {
        delta: Rat,
    },
    Inconclusive,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::ConsistentWithLsc => "ConsistentWithLsc",
            Classification::ViolationWitness { .. } => "ViolationWitness",
            Classification::Inconclusive => "Inconclusive",
        }
    }
}

/// Conditions under which ε-optimal payoffs are lower semicontinuous.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypotheses {
    /// Every (projected) branch has full dimension.
    pub full_dimensional_branches: bool,
    /// Some eligible payoff puts the base strictly inside a branch.
    pub strictly_feasible: bool,
    /// Some eligible payoff is `>= 1` on every atom.
    pub interior_positive_payoff: bool,
    /// Some eligible payoff lies in the interior of a branch recession cone.
    pub interior_recession_payoff: bool,
    /// Some eligible payoff is strictly positive on every atom.
    pub strictly_positive_payoff: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub base: Vec<Rat>,
    pub direction: Vec<Rat>,
    pub epsilon: Option<Rat>,
    pub scales: Vec<Rat>,
    pub half_width: Rat,
    pub deficits_lsc: Vec<Rat>,
    pub deficits_outer: Vec<Rat>,
    pub classification: Classification,
    pub hypotheses: Option<Hypotheses>,
}

impl ProbeReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("k,t_k,deficit_lsc,deficit_outer\n");
        for (k, t) in self.scales.iter().enumerate() {
            out.push_str(&format!(
                "{k},{},{},{}\n",
                fmt_rat(t),
                fmt_rat(&self.deficits_lsc[k]),
                fmt_rat(&self.deficits_outer[k])
            ));
        }
        out
    }
}

pub fn scales(k_max: u32) -> Vec<Rat> {
    (0..=k_max)
        .map(|k| Rat::new(1.into(), num_bigint::BigInt::from(2).pow(k)))
        .collect()
}

fn classify(deficits: &[Rat], half_width: &Rat, k_max: u32) -> Classification {
    let last = deficits.last().expect("at least one scale");
    let threshold = half_width * Rat::new(1.into(), num_bigint::BigInt::from(2).pow(k_max / 2));
    if last.is_zero() || *last < threshold {
        return Classification::ConsistentWithLsc;
    }
    let tail = &deficits[(k_max / 2) as usize..];
    let min = tail.iter().min().expect("nonempty tail").clone();
    let nondecreasing = tail.windows(2).all(|w| w[0] <= w[1]);
    if min.is_positive() && nondecreasing {
        Classification::ViolationWitness { delta: min }
    } else {
        Classification::Inconclusive
    }
}

fn run_probe<F>(
    x: &[Rat],
    d: &[Rat],
    opts: &ProbeOptions,
    sets_at: F,
) -> Result<(Vec<Rat>, Vec<Rat>, Vec<Rat>)>
where
    F: Fn(&[Rat]) -> Result<Vec<HPolyhedron>> + Sync,
{
    let base = sets_at(x)?;
    let ts = scales(opts.k_max);
    let one = |t: &Rat| -> Result<(Rat, Rat)> {
        let y: Vec<Rat> = x.iter().zip(d).map(|(a, b)| a + t * b).collect();
        let moved = sets_at(&y)?;
        let lsc = deviation_boxed(&base, &moved, &opts.half_width)?;
        let outer = deviation_boxed(&moved, &base, &opts.half_width)?;
        Ok((lsc, outer))
    };
    let pairs: Vec<(Rat, Rat)> = if opts.parallel {
        ts.par_iter().map(one).collect::<Result<_>>()?
    } else {
        ts.iter().map(one).collect::<Result<_>>()?
    };
    let (lsc, outer) = pairs.into_iter().unzip();
    Ok((ts, lsc, outer))
}

fn check_probe_args(
    inst: &ProblemInstance,
    x: &[Rat],
    d: &[Rat],
    opts: &ProbeOptions,
) -> Result<()> {
    inst.check_position(x)?;
    inst.check_position(d)?;
    if !opts.half_width.is_positive() {
        return Err(Error::BadParameter(
            "box half-width must be positive".into(),
        ));
    }
    Ok(())
}

pub fn lsc_probe(
    inst: &ProblemInstance,
    x: &[Rat],
    d: &[Rat],
    opts: &ProbeOptions,
) -> Result<ProbeReport> {
    check_probe_args(inst, x, d, opts)?;
    let sets_at = |y: &[Rat]| -> Result<Vec<HPolyhedron>> {
        let set = optimal_set(inst, y)?;
        if set.is_empty() {
            return Err(Error::EmptyOptimalSet);
        }
        Ok(set.faces())
    };
    let (scales, lsc, outer) = run_probe(x, d, opts, sets_at)?;
    Ok(ProbeReport {
        base: x.to_vec(),
        direction: d.to_vec(),
        epsilon: None,
        classification: classify(&lsc, &opts.half_width, opts.k_max),
        scales,
        half_width: opts.half_width.clone(),
        deficits_lsc: lsc,
        deficits_outer: outer,
        hypotheses: None,
    })
}

pub fn epsilon_lsc_probe(
    inst: &ProblemInstance,
    x: &[Rat],
    d: &[Rat],
    eps: &Rat,
    opts: &ProbeOptions,
) -> Result<ProbeReport> {
    if !eps.is_positive() {
        return Err(Error::BadParameter("epsilon must be positive".into()));
    }
    check_probe_args(inst, x, d, opts)?;
    let sets_at = |y: &[Rat]| -> Result<Vec<HPolyhedron>> {
        let set = epsilon_optimal_set(inst, y, eps)?;
        if set.pieces.is_empty() {
            return Err(Error::EmptyOptimalSet);
        }
        Ok(set.polyhedra())
    };
    let (scales, lsc, outer) = run_probe(x, d, opts, sets_at)?;
    Ok(ProbeReport {
        base: x.to_vec(),
        direction: d.to_vec(),
        epsilon: Some(eps.clone()),
        classification: classify(&lsc, &opts.half_width, opts.k_max),
        scales,
        half_width: opts.half_width.clone(),
        deficits_lsc: lsc,
        deficits_outer: outer,
        hypotheses: Some(hypotheses(inst, x)?),
    })
}

/// `max s` subject to every inequality row holding with slack `s`, `s <= 1`.
/// Equality rows are kept as they are.
fn max_uniform_slack(p: &HPolyhedron) -> Option<Rat> {
    let dim = p.dim + 1;
    let mut q = HPolyhedron::universe(dim);
    for c in &p.ineqs {
        let mut a = c.phi.0.clone();
        a.push(-Rat::from_integer(1.into()));
        q.push_ineq(a, c.rhs.clone());
    }
    for c in &p.eqs {
        let mut a = c.phi.0.clone();
        a.push(Rat::zero());
        q.push_eq(a, c.rhs.clone());
    }
    let mut cap = zeros(dim);
    cap[dim - 1] = -Rat::from_integer(1.into());
    q.push_ineq(cap, -Rat::from_integer(1.into()));
    match q.lp(&unit_vector(dim, dim - 1), Sense::Max) {
        LpResult::Optimal { value, .. } => Some(value),
        _ => None,
    }
}

pub fn hypotheses(inst: &ProblemInstance, x: &[Rat]) -> Result<Hypotheses> {
    let n = inst.n_atoms();
    let big_n = inst.n_assets();
    let pa = match &inst.compiled {
        CompiledAcceptance::Polyhedral(pa) => pa,
        _ => {
            return Err(Error::UnsupportedVariant(
                "hypothesis checks need a polyhedral set".into(),
            ))
        }
    };
    let mut full = true;
    for j in 0..pa.branches.len() {
        if pa.projected_branch(j).dimension()? != n {
            full = false;
        }
    }
    let positive_slack = |p: &HPolyhedron| max_uniform_slack(p).is_some_and(|s| s.is_positive());
    let strictly_feasible = (0..pa.branches.len()).any(|j| {
        let f = branch_feasible_set(inst, pa, j, x);
        f.eqs.is_empty() && positive_slack(&f)
    });
    let interior_recession_payoff = (0..pa.branches.len()).any(|j| {
        let f = branch_feasible_set(inst, pa, j, &zeros(n)).homogenized();
        f.eqs.is_empty() && positive_slack(&f)
    });
    // Pλ >= 1 componentwise.
    let mut pos = HPolyhedron::universe(big_n);
    for row in inst.market.payoffs() {
        pos.push_ineq(row.clone(), int(1));
    }
    let interior_positive_payoff = !pos.is_empty();
    let strictly_positive_payoff = {
        let mut cone = HPolyhedron::universe(big_n);
        for row in inst.market.payoffs() {
            cone.push_ineq(row.clone(), Rat::zero());
        }
        positive_slack(&cone)
    };
    Ok(Hypotheses {
        full_dimensional_branches: full,
        strictly_feasible,
        interior_positive_payoff,
        interior_recession_payoff,
        strictly_positive_payoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::FixtureId;
    use crate::rational::rat;

    #[test]
    fn zero_direction_has_zero_deficits() {
        let inst = FixtureId::P1R3Unique.build();
        let opts = ProbeOptions {
            k_max: 4,
            ..ProbeOptions::default()
        };
        let r = lsc_probe(&inst, &zeros(3), &zeros(3), &opts).unwrap();
        assert!(r.deficits_lsc.iter().all(Zero::is_zero));
        assert!(r.deficits_outer.iter().all(Zero::is_zero));
        assert_eq!(r.classification, Classification::ConsistentWithLsc);
    }

    #[test]
    fn classification_rules() {
        let b = int(10);
        assert_eq!(
            classify(&vec![int(10); 17], &b, 16),
            Classification::ViolationWitness { delta: int(10) }
        );
        let mut falling: Vec<Rat> = (0..17).map(|k| rat(1, 1 << k)).collect();
        assert_eq!(
            classify(&falling, &b, 16),
            Classification::ConsistentWithLsc
        );
        falling[16] = int(1);
        assert_eq!(classify(&falling, &b, 16), Classification::Inconclusive);
    }
}
