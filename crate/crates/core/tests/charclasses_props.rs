//! Characteristic-class invariants over random root data: Whitney
//! multiplicativity, permutation invariance of symmetric outputs, the
//! trivial-bundle projectivization consistency, and integrality of the
//! verifier's outputs.

mod common;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use rroch::charclasses::{
    chern_character, hrr, integrate, is_integer, point, proj_bundle, proj_space, product,
    pushforward, todd, total_chern, twist_line, twist_line_product, BundleSpec, CohClass, Space,
};

fn random_roots<R: Rng>(rng: &mut R, space: &Space, count: usize) -> Vec<CohClass> {
    (0..count)
        .map(|_| {
            let mut acc = CohClass::zero(&space.ring);
            for idx in 0..space.ring.ngens() {
                let c = common::rat(rng.gen_range(-3..=3), 1);
                acc = acc
                    .add(&CohClass::generator(&space.ring, idx).scale(&c))
                    .unwrap();
            }
            acc
        })
        .collect()
}

fn poly_mul(a: &[CohClass], b: &[CohClass]) -> Vec<CohClass> {
    let ring = &a[0].ring;
    let n = a.len();
    let mut out = vec![CohClass::zero(ring); n];
    for i in 0..n {
        for j in 0..n - i {
            let prod = a[i].mul(&b[j]).unwrap();
            out[i + j] = out[i + j].add(&prod).unwrap();
        }
    }
    out
}

#[test]
fn whitney_multiplicativity_on_random_roots() {
    let mut rng = common::rng(0x3417);
    let space = product(&proj_space(2), &proj_space(1));
    for _ in 0..20 {
        let v = BundleSpec::new(random_roots(&mut rng, &space, 2), Vec::new()).unwrap();
        let w = BundleSpec::new(random_roots(&mut rng, &space, 2), Vec::new()).unwrap();
        let sum = v.direct_sum(&w);
        let lhs = total_chern(&sum).unwrap();
        let rhs = poly_mul(&total_chern(&v).unwrap(), &total_chern(&w).unwrap());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn class_outputs_invariant_under_root_permutation() {
    let mut rng = common::rng(0x9e43);
    let space = proj_space(3);
    for _ in 0..20 {
        let mut roots = random_roots(&mut rng, &space, 4);
        let v = BundleSpec::new(roots.clone(), Vec::new()).unwrap();
        roots.shuffle(&mut rng);
        let shuffled = BundleSpec::new(roots, Vec::new()).unwrap();
        assert_eq!(total_chern(&v).unwrap(), total_chern(&shuffled).unwrap());
        assert_eq!(
            chern_character(&v).unwrap(),
            chern_character(&shuffled).unwrap()
        );
        assert_eq!(todd(&v).unwrap(), todd(&shuffled).unwrap());
    }
}

#[test]
fn ch_is_a_ring_map_on_sums_of_lines() {
    let mut rng = common::rng(0xc4a9);
    let space = product(&proj_space(1), &proj_space(1));
    for _ in 0..20 {
        let v = BundleSpec::new(random_roots(&mut rng, &space, 2), Vec::new()).unwrap();
        let w = BundleSpec::new(random_roots(&mut rng, &space, 2), Vec::new()).unwrap();
        let tensor = v.tensor(&w).unwrap();
        let lhs = chern_character(&tensor).unwrap();
        let rhs = chern_character(&v)
            .unwrap()
            .mul(&chern_character(&w).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        // additivity on direct sums
        let sum = v.direct_sum(&w);
        assert_eq!(
            chern_character(&sum).unwrap(),
            chern_character(&v)
                .unwrap()
                .add(&chern_character(&w).unwrap())
                .unwrap()
        );
    }
}

#[test]
fn ch_of_virtual_difference_is_the_difference() {
    let mut rng = common::rng(0xd1ff);
    let space = proj_space(2);
    for _ in 0..10 {
        let v = BundleSpec::new(random_roots(&mut rng, &space, 3), Vec::new()).unwrap();
        let w = BundleSpec::new(random_roots(&mut rng, &space, 2), Vec::new()).unwrap();
        let diff = v.difference(&w);
        assert_eq!(
            chern_character(&diff).unwrap(),
            chern_character(&v)
                .unwrap()
                .sub(&chern_character(&w).unwrap())
                .unwrap()
        );
    }
}

#[test]
fn projection_formula_on_random_classes() {
    // f_*(x . f^* y) = f_* x . y, exactly, on both supported projections.
    let mut rng = common::rng(0x960);
    let total_product = product(&proj_space(1), &proj_space(2));
    let base_product = proj_space(1);
    let base_bundle = proj_space(1);
    let e = base_bundle
        .structure_sheaf()
        .direct_sum(&twist_line(&base_bundle, 1).unwrap());
    let total_bundle = proj_bundle(&base_bundle, &e).unwrap();
    let random_class = |rng: &mut rand_chacha::ChaCha8Rng, space: &Space| -> CohClass {
        let mut acc = CohClass::scalar(&space.ring, common::rat(rng.gen_range(-3..=3), 1));
        for idx in 0..space.ring.ngens() {
            let g = CohClass::generator(&space.ring, idx);
            for power in 1..=2u32 {
                let c = common::rat(rng.gen_range(-2..=2), 1);
                acc = acc.add(&g.pow(power).scale(&c)).unwrap();
            }
        }
        acc
    };
    for case in 0..100 {
        let (total, base, pull): (&Space, &Space, fn(&Space, &CohClass) -> _) = if case % 2 == 0 {
            (&total_product, &base_product, rroch::charclasses::pullback_to_product)
        } else {
            (&total_bundle, &base_bundle, rroch::charclasses::pullback_to_bundle)
        };
        let x = random_class(&mut rng, total);
        let y = random_class(&mut rng, base);
        let pulled = pull(total, &y).unwrap();
        let lhs = pushforward(total, &x.mul(&pulled).unwrap()).unwrap();
        let rhs = pushforward(total, &x).unwrap().mul(&y).unwrap();
        assert_eq!(lhs, rhs, "case {case}");
    }
}

#[test]
fn trivial_projectivization_pushforward_matches_product() {
    let base = proj_space(1);
    let bundle_total = proj_bundle(&base, &BundleSpec::trivial(&base.ring, 2)).unwrap();
    let product_total = product(&proj_space(1), &proj_space(1));
    // Same generator layout on both sides: (h, fiber class); compare the
    // pushforward of every basis monomial.
    for h_exp in 0..2u32 {
        for f_exp in 0..2u32 {
            let mono = vec![h_exp, f_exp];
            let via_bundle = {
                let class = CohClass::from_raw(
                    &bundle_total.ring,
                    [(mono.clone(), BigRational::from_integer(1.into()))]
                        .into_iter()
                        .collect(),
                );
                pushforward(&bundle_total, &class).unwrap()
            };
            let via_product = {
                let class = CohClass::from_raw(
                    &product_total.ring,
                    [(mono.clone(), BigRational::from_integer(1.into()))]
                        .into_iter()
                        .collect(),
                );
                pushforward(&product_total, &class).unwrap()
            };
            assert_eq!(via_bundle.coeffs, via_product.coeffs, "monomial {mono:?}");
        }
    }
}

#[test]
fn hrr_outputs_are_integers_on_the_catalog() {
    let mut rng = common::rng(0x147e6e4);
    for _ in 0..30 {
        let chi = match rng.gen_range(0..3) {
            0 => {
                let n = rng.gen_range(1..=3);
                let space = proj_space(n);
                let v = twist_line(&space, rng.gen_range(-5..=5)).unwrap();
                hrr(&space, &v).unwrap()
            }
            1 => {
                let x = product(&proj_space(1), &proj_space(rng.gen_range(1..=2)));
                let v =
                    twist_line_product(&x, rng.gen_range(-4..=4), rng.gen_range(-4..=4)).unwrap();
                hrr(&x, &v).unwrap()
            }
            _ => {
                let base = proj_space(1);
                let e = base
                    .structure_sheaf()
                    .direct_sum(&twist_line(&base, rng.gen_range(0..=2)).unwrap());
                let total = proj_bundle(&base, &e).unwrap();
                let v = BundleSpec::relative_twist(&total, rng.gen_range(0..=2)).unwrap();
                hrr(&total, &v).unwrap()
            }
        };
        assert!(is_integer(&chi), "chi = {chi} must be an integer");
    }
}

#[test]
fn point_integrates_scalars() {
    let pt = point();
    let five = CohClass::scalar(&pt.ring, common::rat(5, 1));
    assert_eq!(integrate(&pt, &five).unwrap(), common::rat(5, 1));
}
