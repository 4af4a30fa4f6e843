use proptest::prelude::*;

use capreq::acceptance::{es_direct, utility_constraint, var_direct, AcceptanceSet};
use capreq::model::{validate_market, FiniteSampleSpace, ProblemInstance};
use capreq::rational::{add, int, rat, scale, to_f64, Rat};

mod common;
use common::{instance, rats};

fn space(weights: &[i64]) -> FiniteSampleSpace {
    let total: i64 = weights.iter().sum();
    FiniteSampleSpace::with_probs(weights.iter().map(|w| rat(*w, total)).collect()).unwrap()
}

fn cash_instance(s: &FiniteSampleSpace, acc: AcceptanceSet) -> ProblemInstance {
    let m = validate_market(s, vec![vec![int(1)]; s.n_atoms()], vec![int(1)]).unwrap();
    ProblemInstance::new("prop", s.clone(), m, acc).unwrap()
}

fn alpha() -> impl Strategy<Value = Rat> {
    prop_oneof![
        Just(rat(1, 4)),
        Just(rat(1, 3)),
        Just(rat(1, 2)),
        Just(rat(3, 4))
    ]
}

/// Weights, a position and a nonnegative shift of matching length.
fn sample() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    (3usize..=6).prop_flat_map(|n| {
        (
            prop::collection::vec(1i64..=4, n),
            prop::collection::vec(-12i64..=12, n),
            prop::collection::vec(0i64..=6, n),
        )
    })
}

fn variants(n: usize, a: &Rat) -> Vec<AcceptanceSet> {
    vec![
        AcceptanceSet::ExpectedShortfall { alpha: a.clone() },
        AcceptanceSet::ValueAtRisk { alpha: a.clone() },
        AcceptanceSet::Scenario {
            event: vec![0, n - 1],
        },
        AcceptanceSet::GeneralizedScenarios {
            measures: vec![
                vec![rat(1, n as i64); n],
                (0..n)
                    .map(|i| if i == 0 { int(1) } else { int(0) })
                    .collect(),
            ],
            floors: vec![int(-1), int(0)],
        },
        AcceptanceSet::ExpUtility {
            a: int(1),
            floor: rat(-1, 2),
        },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zero_accepted_and_monotone((w, x, y) in sample(), a in alpha()) {
        let s = space(&w);
        let x = rats(&x, 4);
        let y = rats(&y, 2);
        for acc in variants(w.len(), &a) {
            let inst = cash_instance(&s, acc);
            prop_assert!(inst.accepts(&vec![int(0); w.len()]));
            for shift in [int(0), int(4)] {
                let xs: Vec<Rat> = x.iter().map(|v| v + &shift).collect();
                if inst.accepts(&xs) {
                    prop_assert!(inst.accepts(&add(&xs, &y)), "{:?}", inst.acceptance);
                }
            }
        }
    }

    #[test]
    fn es_lifting_matches_direct((w, x, _) in sample(), a in alpha(), c in -8i64..=8) {
        let s = space(&w);
        let inst = cash_instance(&s, AcceptanceSet::ExpectedShortfall { alpha: a.clone() });
        let raw = rats(&x, 4);
        // Moves the position next to the boundary.
        let shift = es_direct(&raw, &a, &s) + rat(c, 16);
        let x: Vec<Rat> = raw.iter().map(|v| v + &shift).collect();
        prop_assert_eq!(inst.accepts(&x), es_direct(&x, &a, &s) <= int(0));
    }

    #[test]
    fn var_branches_match_direct((w, x, _) in sample(), a in alpha(), c in -4i64..=4) {
        let s = space(&w);
        let inst = cash_instance(&s, AcceptanceSet::ValueAtRisk { alpha: a.clone() });
        let raw = rats(&x, 4);
        let shift = var_direct(&raw, &a, &s) + rat(c, 8);
        let x: Vec<Rat> = raw.iter().map(|v| v + &shift).collect();
        prop_assert_eq!(inst.accepts(&x), var_direct(&x, &a, &s) <= int(0));
    }

    #[test]
    fn scenario_sets_with_zero_floors_are_cones((w, x, _) in sample()) {
        let n = w.len();
        let s = space(&w);
        let probs = s.probs().to_vec();
        let acc = AcceptanceSet::GeneralizedScenarios {
            measures: vec![probs, (0..n).map(|i| if i == 1 { int(1) } else { int(0) }).collect()],
            floors: vec![int(0), int(0)],
        };
        let inst = cash_instance(&s, acc);
        let x = rats(&x, 3);
        if inst.accepts(&x) {
            prop_assert!(inst.accepts(&scale(&x, &int(2))));
        }
    }

    #[test]
    fn utility_boundary_midpoints_are_interior((w, x, y) in sample()) {
        let s = space(&w);
        let acc = AcceptanceSet::ExpUtility { a: int(1), floor: rat(-1, 2) };
        let u = utility_constraint(&acc, &s).unwrap();
        let probs: Vec<f64> = s.probs().iter().map(to_f64).collect();
        // Cash m with E[1 - e^{-(x+m)}] = floor, i.e. e^{-m} E[e^{-x}] = 3/2.
        let to_boundary = |v: &[f64]| -> Vec<f64> {
            let mgf: f64 = probs.iter().zip(v).map(|(p, xi)| p * (-xi).exp()).sum();
            let m = (mgf / 1.5).ln();
            v.iter().map(|xi| xi + m).collect()
        };
        let a: Vec<f64> = x.iter().map(|v| *v as f64 / 4.0).collect();
        let b: Vec<f64> = x.iter().zip(&y).map(|(v, d)| *v as f64 / 4.0 + *d as f64 - 3.0).collect();
        let (pa, pb) = (to_boundary(&a), to_boundary(&b));
        let spread = pa.iter().zip(&pb).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        prop_assume!(spread > 1e-3);
        let mid: Vec<f64> = pa.iter().zip(&pb).map(|(p, q)| 0.5 * (p + q)).collect();
        prop_assert!(u.g(&pa).abs() < 1e-9 && u.g(&pb).abs() < 1e-9);
        prop_assert!(u.g(&mid) < 0.0);
    }

    #[test]
    fn generated_sets_are_monotone(seed in any::<u64>(), x in prop::collection::vec(-6i64..=6, 5), y in prop::collection::vec(0i64..=4, 5)) {
        let inst = instance(seed);
        let n = inst.n_atoms();
        let x = rats(&x[..n], 2);
        prop_assert!(inst.accepts(&vec![int(0); n]));
        if inst.accepts(&x) {
            prop_assert!(inst.accepts(&add(&x, &rats(&y[..n], 1))));
        }
    }
}
