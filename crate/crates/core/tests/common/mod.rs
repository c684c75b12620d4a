//! Seeded random generators shared by the integration suites.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rroch::scalar::ExactScalar;
use rroch::series::MultiSeries;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn random_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> BigRational {
    let num = rng.gen_range(-max_num..=max_num);
    let den = rng.gen_range(1..=max_den);
    rat(num, den)
}

pub fn random_scalar<R: Rng>(rng: &mut R) -> ExactScalar {
    ExactScalar::new(random_rational(rng, 4, 3), random_rational(rng, 4, 3))
}

pub fn random_nonzero_scalar<R: Rng>(rng: &mut R) -> ExactScalar {
    loop {
        let s = random_scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Sparse random series with up to `max_terms` nonzero terms.
pub fn random_series<R: Rng>(
    rng: &mut R,
    nvars: usize,
    trunc: u32,
    max_terms: usize,
) -> MultiSeries {
    let nterms = rng.gen_range(0..=max_terms);
    let mut terms = Vec::with_capacity(nterms);
    for _ in 0..nterms {
        let mut exp = vec![0u32; nvars];
        let mut budget = trunc;
        for e in exp.iter_mut() {
            let k = rng.gen_range(0..=budget.min(3));
            *e = k;
            budget -= k;
        }
        terms.push((exp, random_scalar(rng)));
    }
    MultiSeries::from_terms(nvars, trunc, terms)
}

/// Random series with a nonzero constant term.
pub fn random_unit_series<R: Rng>(
    rng: &mut R,
    nvars: usize,
    trunc: u32,
    max_terms: usize,
) -> MultiSeries {
    let base = random_series(rng, nvars, trunc, max_terms);
    let unit = MultiSeries::constant(nvars, trunc, random_nonzero_scalar(rng));
    let candidate = base.add(&unit).expect("same ring");
    if candidate.constant_term().is_zero() {
        candidate
            .add(&MultiSeries::one(nvars, trunc))
            .expect("same ring")
    } else {
        candidate
    }
}

/// Random X1-regular series: an X1^k monomial with unit coefficient plus
/// random terms that keep the X1-axis restriction nonzero.
pub fn random_x1_regular<R: Rng>(
    rng: &mut R,
    nvars: usize,
    trunc: u32,
    max_terms: usize,
) -> MultiSeries {
    loop {
        let k = rng.gen_range(1..=3u32);
        let mut exp = vec![0u32; nvars];
        exp[0] = k;
        let pivot = MultiSeries::from_terms(
            nvars,
            trunc,
            [(exp, random_nonzero_scalar(rng))],
        );
        let candidate = pivot
            .add(&random_series(rng, nvars, trunc, max_terms))
            .expect("same ring");
        if rroch::weierstrass::x1_vanishing_order(&candidate).is_ok() {
            return candidate;
        }
    }
}
