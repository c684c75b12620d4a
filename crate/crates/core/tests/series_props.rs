//! Property tests for the series kernel: exact ring laws, inversion
//! roundtrips, the diagonal-division identity, norm submultiplicativity,
//! and truncation functoriality.

mod common;

use rand::Rng;

use num_rational::BigRational;
use proptest::prelude::*;
use rroch::series::{divide_diagonal, embed_univariate, MultiSeries};

fn arb_ring() -> impl Strategy<Value = (usize, u32)> {
    (1usize..=3, 2u32..=8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws((nvars, trunc) in arb_ring(), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let a = common::random_series(&mut rng, nvars, trunc, 5);
        let b = common::random_series(&mut rng, nvars, trunc, 5);
        let c = common::random_series(&mut rng, nvars, trunc, 5);
        // commutativity
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        // associativity
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        // distributivity
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn truncation_commutes_with_operations((nvars, trunc) in arb_ring(), seed in any::<u64>()) {
        prop_assume!(trunc >= 3);
        let mut rng = common::rng(seed);
        let a = common::random_series(&mut rng, nvars, trunc, 5);
        let b = common::random_series(&mut rng, nvars, trunc, 5);
        let lower = trunc - 2;
        let product_then_truncate = a.mul(&b).unwrap().truncated(lower);
        let truncate_then_product = a.truncated(lower).mul(&b.truncated(lower)).unwrap();
        prop_assert_eq!(product_then_truncate, truncate_then_product);
    }

    #[test]
    fn norm_submultiplicative_with_surrogate((nvars, trunc) in arb_ring(), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let a = common::random_series(&mut rng, nvars, trunc, 5);
        let b = common::random_series(&mut rng, nvars, trunc, 5);
        let radii: Vec<BigRational> = (0..nvars)
            .map(|_| {
                let n = rng.gen_range(1i64..=3);
                let d = rng.gen_range(1i64..=3);
                common::rat(n, d)
            })
            .collect();
        let p = common::rat(1, 1);
        let na = a.weighted_norm(&radii, &p).unwrap().value;
        let nb = b.weighted_norm(&radii, &p).unwrap().value;
        let nab = a.mul(&b).unwrap().weighted_norm(&radii, &p).unwrap().value;
        prop_assert!(nab <= common::rat(2, 1) * na * nb);
    }
}

#[test]
fn invert_unit_roundtrip_100_random_units() {
    let mut rng = common::rng(0x5e71e5);
    for case in 0..100 {
        let nvars = rng.gen_range(1..=3);
        let trunc = rng.gen_range(2..=8);
        let f = common::random_unit_series(&mut rng, nvars, trunc, 5);
        let inv = f.invert_unit().expect("unit");
        assert_eq!(
            f.mul(&inv).unwrap(),
            MultiSeries::one(nvars, trunc),
            "case {case}"
        );
    }
}

#[test]
fn divide_diagonal_identity_100_random_series() {
    let mut rng = common::rng(0xd1a60);
    for case in 0..100 {
        let trunc = rng.gen_range(2..=8);
        let f = common::random_series(&mut rng, 2, trunc, 6);
        let (q, r) = divide_diagonal(&f).expect("two variables");
        // U - T
        let u_minus_t = rroch::series::parse_series("U - T", 2, trunc).unwrap();
        let reconstructed = u_minus_t
            .mul(&q)
            .unwrap()
            .add(&embed_univariate(&r, 2, 0, trunc))
            .unwrap();
        assert_eq!(reconstructed, f, "case {case}");
    }
}

