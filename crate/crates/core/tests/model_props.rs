use proptest::prelude::*;

use capreq::model::{flatten_multivariate, kernel_basis, validate_market, FiniteSampleSpace};
use capreq::rational::{dot, int, rat, Rat};
use capreq::Error;

mod common;
use common::ints;

fn market_parts() -> impl Strategy<Value = (usize, Vec<Vec<i64>>, Vec<i64>)> {
    (2usize..=5).prop_flat_map(|n| {
        (1usize..=n).prop_flat_map(move |big_n| {
            (
                Just(n),
                prop::collection::vec(prop::collection::vec(-2i64..=2, big_n), n),
                prop::collection::vec(-2i64..=2, big_n),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn validated_markets_have_a_unit_payoff((n, rows, prices) in market_parts()) {
        let space = FiniteSampleSpace::uniform(n);
        let payoffs: Vec<Vec<Rat>> = rows.iter().map(|r| ints(r)).collect();
        match validate_market(&space, payoffs, ints(&prices)) {
            Ok(m) => {
                let u = m.unit_payoff();
                prop_assert!(u.iter().all(|v| *v >= int(0)));
                prop_assert_eq!(dot(m.prices(), m.unit_coeffs()), int(1));
                let k = kernel_basis(&m);
                for l in &k.basis {
                    prop_assert_eq!(dot(m.prices(), l), int(0));
                }
                prop_assert_eq!(k.basis.len() + 1, m.n_assets());
            }
            Err(e) => prop_assert!(matches!(e, Error::NoUnitPayoff | Error::DegenerateMarket)),
        }
    }

    #[test]
    fn flattening_keeps_block_mass(weights in prop::collection::vec(prop::collection::vec(1i64..=5, 2..=4), 1..=3)) {
        let d = weights.len() as i64;
        let mut spaces = Vec::new();
        let mut markets = Vec::new();
        for w in &weights {
            let total: i64 = w.iter().sum();
            let s = FiniteSampleSpace::with_probs(w.iter().map(|x| rat(*x, total)).collect()).unwrap();
            markets.push(validate_market(&s, vec![vec![int(1)]; w.len()], vec![int(1)]).unwrap());
            spaces.push(s);
        }
        let (space, market) = flatten_multivariate(&spaces, &markets).unwrap();
        let mut offset = 0;
        for w in &weights {
            let block: Rat = space.probs()[offset..offset + w.len()].iter().sum();
            prop_assert_eq!(block * int(d), int(1));
            offset += w.len();
        }
        prop_assert_eq!(market.n_assets(), weights.len());
    }
}

#[test]
fn flattening_rejects_mismatched_lists() {
    let s = FiniteSampleSpace::uniform(2);
    assert!(flatten_multivariate(&[s.clone(), s], &[]).is_err());
}
