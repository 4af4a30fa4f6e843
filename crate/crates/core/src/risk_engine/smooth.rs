//! Capital requirement for the exponential-utility acceptance set.
//!
//! Minimizes `prices·λ` over `{G(λ) <= 0}` with `G(λ) = g(X + Pλ)` convex,
//! by a cutting-plane method: each round solves an exact LP over the box
//! and the current cuts, then cuts both at the LP point and at the boundary
//! point found by bisection toward a strictly feasible cash position. The
//! bisection points are feasible, so they give the upper bound; the LP
//! values give the lower bound.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::acceptance::{CompiledAcceptance, UtilityConstraint};
use crate::error::{Error, Result};
use crate::model::ProblemInstance;
use crate::polyhedra::{HPolyhedron, LpResult, Sense};
use crate::rational::{from_f64, to_f64, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothOptions {
    pub tol: f64,
    /// Initial half-width of the artificial box on `λ`.
    pub box_half_width: f64,
    pub max_doublings: usize,
    pub max_iter: usize,
}

impl Default for SmoothOptions {
    fn default() -> Self {
        SmoothOptions {
            tol: 1e-9,
            box_half_width: 16.0,
            max_doublings: 3,
            max_iter: 400,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothResult {
    pub value: f64,
    pub lambda: Vec<f64>,
    pub lower_bound: f64,
    pub iterations: usize,
    /// `||prices + μ ∇G(λ*)||_inf` for the least-squares multiplier `μ`.
    pub kkt_residual: f64,
    pub multiplier: f64,
    pub box_half_width: f64,
}

/// Decimal rounding to 12 places, which keeps printed rationals short.
pub(crate) fn approx_rat(x: f64) -> Rat {
    let scaled = (x * 1e12).round();
    match scaled.to_i64() {
        Some(n) => Rat::new(BigInt::from(n), BigInt::from(1_000_000_000_000i64)),
        None => from_f64(x),
    }
}

impl SmoothResult {
    pub fn value_rat(&self) -> Rat {
        approx_rat(self.value)
    }

    pub fn lambda_rat(&self) -> Vec<Rat> {
        self.lambda.iter().map(|v| approx_rat(*v)).collect()
    }
}

struct Problem<'a> {
    u: &'a UtilityConstraint,
    x: Vec<f64>,
    payoffs: Vec<Vec<f64>>,
    prices: Vec<f64>,
}

impl Problem<'_> {
    fn position(&self, lambda: &[f64]) -> Vec<f64> {
        self.x
            .iter()
            .zip(&self.payoffs)
            .map(|(xi, row)| xi + row.iter().zip(lambda).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }

    fn g(&self, lambda: &[f64]) -> f64 {
        self.u.g(&self.position(lambda))
    }

    fn grad(&self, lambda: &[f64]) -> Vec<f64> {
        let gx = self.u.grad(&self.position(lambda));
        (0..lambda.len())
            .map(|k| {
                self.payoffs
                    .iter()
                    .zip(&gx)
                    .map(|(row, gi)| row[k] * gi)
                    .sum()
            })
            .collect()
    }

    fn price(&self, lambda: &[f64]) -> f64 {
        self.prices.iter().zip(lambda).map(|(a, b)| a * b).sum()
    }
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

pub fn smooth_rho(inst: &ProblemInstance, x: &[Rat], opts: &SmoothOptions) -> Result<SmoothResult> {
    let u = match &inst.compiled {
        CompiledAcceptance::Utility(u) => u,
        _ => {
            return Err(Error::UnsupportedVariant(
                "smooth solver needs a utility acceptance set".into(),
            ))
        }
    };
    if opts.tol <= 0.0 {
        return Err(Error::BadParameter("tolerance must be positive".into()));
    }
    inst.check_position(x)?;
    let prob = Problem {
        u,
        x: x.iter().map(to_f64).collect(),
        payoffs: inst
            .market
            .payoffs()
            .iter()
            .map(|row| row.iter().map(to_f64).collect())
            .collect(),
        prices: inst.market.prices().iter().map(to_f64).collect(),
    };
    let n = inst.n_assets();
    let unit: Vec<f64> = inst.market.unit_coeffs().iter().map(to_f64).collect();

    // Strictly feasible cash-type position m·U.
    let mut m = 1.0;
    let inner = loop {
        let cand: Vec<f64> = unit.iter().map(|v| v * m).collect();
        if prob.g(&cand) < 0.0 {
            break cand;
        }
        m *= 2.0;
        if m > 1e18 {
            return Err(Error::NeverAcceptable);
        }
    };
    let inner_norm = inner.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut half_width = opts.box_half_width.max(2.0 * inner_norm);

    let mut cuts: Vec<(Vec<f64>, f64)> = Vec::new();
    let add_cut = |cuts: &mut Vec<(Vec<f64>, f64)>, at: &[f64]| {
        // G(at) + ∇G(at)·(λ - at) <= 0  <=>  -∇G·λ >= G(at) - ∇G·at
        let gr = prob.grad(at);
        let rhs = prob.g(at) - gr.iter().zip(at).map(|(a, b)| a * b).sum::<f64>();
        cuts.push((gr, rhs));
    };
    add_cut(&mut cuts, &inner);

    let mut iterations = 0;
    for _ in 0..=opts.max_doublings {
        let mut best = (prob.price(&inner), inner.clone());
        let mut lower = f64::NEG_INFINITY;
        while iterations < opts.max_iter {
            iterations += 1;
            let mut lp = HPolyhedron::cube(n, &from_f64(half_width));
            for (gr, rhs) in &cuts {
                lp.push_ineq(gr.iter().map(|v| from_f64(-v)).collect(), from_f64(*rhs));
            }
            let c: Vec<Rat> = inst.market.prices().to_vec();
            let point: Vec<f64> = match lp.lp(&c, Sense::Min) {
                LpResult::Optimal { point, .. } => point.iter().map(to_f64).collect(),
                _ => return Err(Error::NeverAcceptable),
            };
            lower = prob.price(&point);
            let g_lp = prob.g(&point);
            if g_lp <= opts.tol {
                if lower < best.0 || g_lp <= 0.0 {
                    best = (lower, point);
                }
                break;
            }
            // Bisection on [inner, point]: g(inner) < 0 < g(point).
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if prob.g(&lerp(&inner, &point, mid)) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-17 {
                    break;
                }
            }
            let boundary = lerp(&inner, &point, lo);
            let price_b = prob.price(&boundary);
            if price_b < best.0 {
                best = (price_b, boundary.clone());
            }
            add_cut(&mut cuts, &boundary);
            add_cut(&mut cuts, &point);
            if best.0 - lower <= opts.tol {
                break;
            }
        }
        let (value, lambda) = best;
        let on_box = lambda.iter().any(|v| v.abs() >= half_width * (1.0 - 1e-9));
        if on_box {
            half_width *= 2.0;
            continue;
        }
        let h = prob.grad(&lambda);
        let hh: f64 = h.iter().map(|v| v * v).sum();
        let ch: f64 = prob.prices.iter().zip(&h).map(|(a, b)| a * b).sum();
        let mu = if hh > 0.0 { -ch / hh } else { 0.0 };
        let kkt_residual = prob
            .prices
            .iter()
            .zip(&h)
            .map(|(c, hv)| (c + mu * hv).abs())
            .fold(0.0, f64::max);
        return Ok(SmoothResult {
            value,
            lambda,
            lower_bound: lower,
            iterations,
            kkt_residual,
            multiplier: mu,
            box_half_width: half_width,
        });
    }
    Err(Error::BoxBoundaryHit(half_width / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::AcceptanceSet;
    use crate::model::{validate_market, FiniteSampleSpace};
    use crate::rational::int;

    fn cash_utility() -> ProblemInstance {
        let s = FiniteSampleSpace::uniform(2);
        let m = validate_market(&s, vec![vec![int(1)]; 2], vec![int(1)]).unwrap();
        let acc = AcceptanceSet::ExpUtility {
            a: int(1),
            floor: int(0),
        };
        ProblemInstance::new("util", s, m, acc).unwrap()
    }

    #[test]
    fn log_cosh_value() {
        let r = smooth_rho(
            &cash_utility(),
            &[int(-1), int(1)],
            &SmoothOptions::default(),
        )
        .unwrap();
        let exact = 1f64.cosh().ln();
        assert!((r.value - exact).abs() < 1e-8, "{} vs {}", r.value, exact);
        assert!(r.kkt_residual < 1e-8);
        assert!(r.multiplier > 0.0);
    }

    #[test]
    fn constants_translate() {
        let r = smooth_rho(
            &cash_utility(),
            &[int(3), int(3)],
            &SmoothOptions::default(),
        )
        .unwrap();
        assert!((r.value + 3.0).abs() < 1e-8);
    }
}
