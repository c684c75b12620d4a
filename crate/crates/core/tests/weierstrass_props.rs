//! Weierstrass preparation properties: exact reconstruction over a random
//! corpus, agreement with an independent order-by-order linear solve,
//! division remainder degrees, and the randomized coordinate change.

mod common;

use rroch::scalar::ExactScalar;
use rroch::series::{embed_univariate, MultiSeries};
use rroch::weierstrass::{
    divide, generic_coordinate_change, prepare, reduce_aux_order, x1_vanishing_order,
};

/// Test-only helpers kept separate from the library's internals.
fn aux_degree(exp: &[u32]) -> u32 {
    exp[1..].iter().sum()
}

fn select_terms(f: &MultiSeries, keep: impl Fn(&[u32]) -> bool) -> MultiSeries {
    MultiSeries::from_terms(
        f.nvars(),
        f.trunc(),
        f.terms()
            .filter(|(e, _)| keep(e))
            .map(|(e, c)| (e.clone(), c.clone())),
    )
}

fn shift_down(f: &MultiSeries, k: u32) -> MultiSeries {
    MultiSeries::from_terms(
        f.nvars(),
        f.trunc(),
        f.terms().filter(|(e, _)| e[0] >= k).map(|(e, c)| {
            let mut e = e.clone();
            e[0] -= k;
            (e, c.clone())
        }),
    )
}

/// Independent uniqueness oracle: solve f = g u layer by layer in the
/// (X_2..X_n)-adic grading. Each layer is a triangular linear solve
/// X1^k u_m + g_m u_0 = R_m with deg_{X1} g_m < k.
fn prepare_order_by_order(f: &MultiSeries, order: u32) -> (MultiSeries, MultiSeries) {
    let k = x1_vanishing_order(f).expect("regular input");
    let nvars = f.nvars();
    let trunc = f.trunc();
    let f = reduce_aux_order(f, order);
    let axis = f.restrict_to_first();
    let u0_uni = MultiSeries::from_terms(
        1,
        trunc,
        axis.terms().map(|(e, c)| (vec![e[0] - k], c.clone())),
    );
    let u0 = embed_univariate(&u0_uni, nvars, 0, trunc);
    let u0_inv = u0.invert_unit().expect("unit by regularity");

    let mut x1k = vec![0u32; nvars];
    x1k[0] = k;
    let mut g = MultiSeries::from_terms(nvars, trunc, [(x1k, ExactScalar::one())]);
    let mut u = u0.clone();
    for m in 1..order {
        let residual = f.sub(&g.mul(&u).unwrap()).unwrap();
        let layer = select_terms(&residual, |e| aux_degree(e) == m);
        if layer.is_zero() {
            continue;
        }
        let g_m = select_terms(&layer.mul(&u0_inv).unwrap(), |e| {
            e[0] < k && aux_degree(e) == m
        });
        let u_m = shift_down(&layer.sub(&g_m.mul(&u0).unwrap()).unwrap(), k);
        g = g.add(&g_m).unwrap();
        u = u.add(&u_m).unwrap();
    }
    (g, u)
}

fn assert_prepared_invariants(f: &MultiSeries, g: &MultiSeries, u: &MultiSeries, k: u32, m: u32) {
    // g is monic of X1-degree k.
    let mut monic_exp = vec![0u32; f.nvars()];
    monic_exp[0] = k;
    assert!(g.coeff(&monic_exp).is_one(), "g is monic in X1^{k}");
    for (e, c) in g.terms() {
        assert!(e[0] <= k, "g has X1-degree <= k");
        if e[0] < k {
            assert!(
                aux_degree(e) >= 1,
                "lower coefficient {c} at {e:?} must vanish at the origin"
            );
        }
    }
    assert!(!u.constant_term().is_zero(), "u is a unit");
    // Reconstruction at working order.
    let product = reduce_aux_order(&g.mul(u).unwrap(), m);
    assert_eq!(product, reduce_aux_order(f, m), "g*u reconstructs f");
}

#[test]
fn reconstruction_and_uniqueness_on_random_corpus() {
    let mut rng = common::rng(0x77e1e5);
    let order = 6;
    for case in 0..20 {
        let nvars = if case % 2 == 0 { 2 } else { 3 };
        let f = common::random_x1_regular(&mut rng, nvars, 8, 6);
        let p = prepare(&f, order).expect("regular");
        assert_prepared_invariants(&f, &p.g, &p.u, p.k, order);

        let (g_oracle, u_oracle) = prepare_order_by_order(&f, order);
        assert_eq!(p.g, g_oracle, "case {case}: g agrees with the linear solve");
        assert_eq!(p.u, u_oracle, "case {case}: u agrees with the linear solve");
    }
}

#[test]
fn division_remainder_degree_and_reconstruction() {
    let mut rng = common::rng(0xd171de);
    let order = 6;
    for case in 0..20 {
        let nvars = if case % 2 == 0 { 2 } else { 3 };
        let f = common::random_series(&mut rng, nvars, 8, 6);
        let regular = common::random_x1_regular(&mut rng, nvars, 8, 4);
        let p = prepare(&regular, order).expect("regular divisor source");
        let (q, r) = divide(&f, &p.g, order).expect("monic divisor");
        for (e, _) in r.terms() {
            assert!(e[0] < p.k, "case {case}: remainder X1-degree below k");
        }
        let reconstructed = reduce_aux_order(&q.mul(&p.g).unwrap().add(&r).unwrap(), order);
        assert_eq!(reconstructed, reduce_aux_order(&f, order), "case {case}");
    }
}

#[test]
fn prepare_is_idempotent_on_monic_parts() {
    let mut rng = common::rng(0x1de2);
    for _ in 0..10 {
        let f = common::random_x1_regular(&mut rng, 2, 8, 5);
        let p = prepare(&f, 5).expect("regular");
        let again = prepare(&p.g, 5).expect("monic stays regular");
        assert_eq!(again.g, p.g);
        assert_eq!(again.u, MultiSeries::one(2, 8));
    }
}

#[test]
fn coordinate_change_regularizes_random_series() {
    let mut rng = common::rng(0xc00d);
    let mut produced = 0;
    for seed in 0..40u64 {
        let f = common::random_series(&mut rng, 3, 6, 5);
        if f.is_zero() {
            continue;
        }
        let (changed, matrix, retries) =
            generic_coordinate_change(&f, seed, 5).expect("regular within 5 retries");
        assert!(retries < 5);
        assert!(x1_vanishing_order(&changed).is_ok());
        assert_eq!(matrix.len(), 3);
        produced += 1;
        if produced >= 20 {
            break;
        }
    }
    assert!(produced >= 20, "corpus too small: {produced}");
}
