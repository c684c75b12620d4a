//! Weierstrass preparation and division for series germs at the origin.
//!
//! All computations happen modulo the total-degree truncation of the input
//! and modulo (X_2, ..., X_n)^M for a caller-chosen working order M. The
//! preparation loop is the two-step inductive update on (g_i, u_i); the
//! convergence argument that upgrades the formal solution to an analytic one
//! is deliberately not modeled, truncation stands in for it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scalar::ExactScalar;
use crate::series::{embed_univariate, MultiSeries, SeriesError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeierstrassError {
    #[error("f(X1, 0, ..., 0) vanishes identically up to truncation; change coordinates first")]
    NotRegular,
    #[error("divisor is not monic in X1 with lower coefficients vanishing at the origin: {0}")]
    Divisor(String),
    #[error("no X1-regular coordinate change found after {retries} retries (last seed {seed})")]
    RetriesExhausted { seed: u64, retries: u32 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Weierstrass data f = g * u at working order M: g monic of X1-degree k with
/// lower coefficients vanishing at the origin, u a unit.
#[derive(Debug, Clone)]
pub struct PreparedForm {
    pub k: u32,
    pub g: MultiSeries,
    pub u: MultiSeries,
    pub working_order: u32,
}

/// Degree in the variables X_2..X_n only.
fn aux_degree(exp: &[u32]) -> u32 {
    exp[1..].iter().sum()
}

/// Reduce modulo (X_2, ..., X_n)^M.
pub fn reduce_aux_order(f: &MultiSeries, order: u32) -> MultiSeries {
    MultiSeries::from_terms(
        f.nvars(),
        f.trunc(),
        f.terms()
            .filter(|(e, _)| aux_degree(e) < order)
            .map(|(e, c)| (e.clone(), c.clone())),
    )
}

/// Terms with X1-exponent < k.
fn low_x1_part(f: &MultiSeries, k: u32) -> MultiSeries {
    MultiSeries::from_terms(
        f.nvars(),
        f.trunc(),
        f.terms()
            .filter(|(e, _)| e[0] < k)
            .map(|(e, c)| (e.clone(), c.clone())),
    )
}

/// (X1^{>=k} part of f) / X1^k.
fn shift_down_x1(f: &MultiSeries, k: u32) -> MultiSeries {
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

fn x1_power(nvars: usize, trunc: u32, k: u32) -> MultiSeries {
    let mut exp = vec![0u32; nvars];
    exp[0] = k;
    MultiSeries::from_terms(nvars, trunc, [(exp, ExactScalar::one())])
}

/// Smallest k with a nonzero X1^k coefficient in f(X1, 0, ..., 0).
pub fn x1_vanishing_order(f: &MultiSeries) -> Result<u32, WeierstrassError> {
    let axis = f.restrict_to_first();
    axis.valuation().ok_or(WeierstrassError::NotRegular)
}

/// The inductive preparation from the preparation theorem's proof:
/// g_1 = X1^k, u_1 = f(X1, 0, ..., 0) / X1^k, then M - 1 rounds of
/// h_i = low-X1 part of (f - g_i u_i) u_1^{-1}, g_{i+1} = g_i + h_i,
/// v_i = X1^k quotient of f - g_{i+1} u_i, u_{i+1} = u_i + v_i.
pub fn prepare(f: &MultiSeries, working_order: u32) -> Result<PreparedForm, WeierstrassError> {
    let k = x1_vanishing_order(f)?;
    let nvars = f.nvars();
    let trunc = f.trunc();
    let f = reduce_aux_order(f, working_order);

    let axis = f.restrict_to_first();
    let u1_uni = MultiSeries::from_terms(
        1,
        trunc,
        axis.terms().map(|(e, c)| (vec![e[0] - k], c.clone())),
    );
    let u1 = embed_univariate(&u1_uni, nvars, 0, trunc);
    let u1_inv = u1.invert_unit()?;

    let mut g = x1_power(nvars, trunc, k);
    let mut u = u1;
    for _ in 1..working_order {
        let residual = reduce_aux_order(&f.sub(&g.mul(&u)?)?, working_order);
        if residual.is_zero() {
            break;
        }
        let correction = reduce_aux_order(&residual.mul(&u1_inv)?, working_order);
        let h = low_x1_part(&correction, k);
        g = g.add(&h)?;
        let w = reduce_aux_order(&f.sub(&g.mul(&u)?)?, working_order);
        let v = shift_down_x1(&w, k);
        u = u.add(&v)?;
    }
    Ok(PreparedForm {
        k,
        g,
        u,
        working_order,
    })
}

/// Check that g is a monic X1-polynomial of degree k whose lower coefficients
/// vanish at the origin, and return k.
pub fn monic_x1_degree(g: &MultiSeries) -> Result<u32, WeierstrassError> {
    let k = g
        .terms()
        .map(|(e, _)| e[0])
        .max()
        .ok_or_else(|| WeierstrassError::Divisor("zero divisor".into()))?;
    for (e, c) in g.terms() {
        if e[0] == k {
            if aux_degree(e) != 0 || !c.is_one() {
                return Err(WeierstrassError::Divisor(format!(
                    "X1^{k} coefficient is not the constant 1"
                )));
            }
        } else if aux_degree(e) == 0 {
            return Err(WeierstrassError::Divisor(format!(
                "coefficient of X1^{} does not vanish at the origin",
                e[0]
            )));
        }
    }
    Ok(k)
}

/// Division with remainder by a monic divisor: f = q * g + r with
/// deg_{X1} r < k, exact modulo truncation and (X_2, ..., X_n)^M.
pub fn divide(
    f: &MultiSeries,
    g: &MultiSeries,
    working_order: u32,
) -> Result<(MultiSeries, MultiSeries), WeierstrassError> {
    if f.nvars() != g.nvars() || f.trunc() != g.trunc() {
        return Err(SeriesError::Dimension("divide: mismatched rings".into()).into());
    }
    let k = monic_x1_degree(g)?;
    // gamma = g - X1^k has aux order >= 1, so every round of the reduction
    // X1^k a -> a g - a gamma pushes the high part one step deeper into
    // (X_2, ..., X_n).
    let gamma = g.sub(&x1_power(g.nvars(), g.trunc(), k))?;
    let mut q = MultiSeries::zero(f.nvars(), f.trunc());
    let mut rem = reduce_aux_order(f, working_order);
    for _ in 0..=working_order {
        let a = shift_down_x1(&rem, k);
        if a.is_zero() {
            break;
        }
        q = q.add(&a)?;
        rem = low_x1_part(&rem, k).sub(&reduce_aux_order(&a.mul(&gamma)?, working_order))?;
    }
    debug_assert!(shift_down_x1(&rem, k).is_zero());
    Ok((q, rem))
}

/// An invertible integer substitution X_i -> sum_j m[i][j] X_j applied to f.
pub fn apply_linear_change(
    f: &MultiSeries,
    matrix: &[Vec<i64>],
) -> Result<MultiSeries, WeierstrassError> {
    let n = f.nvars();
    if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(SeriesError::Dimension("change matrix shape".into()).into());
    }
    let forms: Vec<MultiSeries> = matrix
        .iter()
        .map(|row| {
            MultiSeries::from_terms(
                n,
                f.trunc(),
                row.iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| {
                    let mut exp = vec![0u32; n];
                    exp[j] = 1;
                    (exp, ExactScalar::from_int(c))
                }),
            )
        })
        .collect();
    Ok(f.substitute(&forms)?)
}

/// Random unimodular coordinate changes from `seed` until f becomes
/// X1-regular. Returns the changed series and the matrix used.
pub fn generic_coordinate_change(
    f: &MultiSeries,
    seed: u64,
    max_retries: u32,
) -> Result<(MultiSeries, Vec<Vec<i64>>, u32), WeierstrassError> {
    let n = f.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..max_retries {
        let matrix = random_unimodular(&mut rng, n);
        let changed = apply_linear_change(f, &matrix)?;
        if x1_vanishing_order(&changed).is_ok() {
            return Ok((changed, matrix, attempt));
        }
    }
    Err(WeierstrassError::RetriesExhausted {
        seed,
        retries: max_retries,
    })
}

/// Product of random shears and swaps; determinant is +/-1 by construction.
fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    if n == 1 {
        return m;
    }
    for _ in 0..(2 * n * n) {
        match rng.gen_range(0..3u8) {
            0 => {
                // shear: row_i += c * row_j
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let c = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
                let source = m[j].clone();
                for (entry, add) in m[i].iter_mut().zip(&source) {
                    *entry += c * add;
                }
            }
            1 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                m.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..n);
                for entry in m[i].iter_mut() {
                    *entry = -*entry;
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::parse_series;

    fn s(text: &str, nvars: usize, trunc: u32) -> MultiSeries {
        parse_series(text, nvars, trunc).unwrap()
    }

    #[test]
    fn vanishing_order_basic() {
        assert_eq!(x1_vanishing_order(&s("x1^2 - x2", 2, 4)).unwrap(), 2);
        assert_eq!(
            x1_vanishing_order(&s("x2", 2, 4)),
            Err(WeierstrassError::NotRegular)
        );
        assert_eq!(
            x1_vanishing_order(&s("x1 + x1^3 + x2*x1^2", 2, 4)).unwrap(),
            1
        );
    }

    #[test]
    fn prepare_already_prepared() {
        let f = s("x1^2 - x2", 2, 6);
        let p = prepare(&f, 5).unwrap();
        assert_eq!(p.k, 2);
        assert_eq!(p.g, f);
        assert_eq!(p.u, MultiSeries::one(2, 6));
    }

    #[test]
    fn prepare_linear_example() {
        let f = s("x1 + x1^2 - x2 - x1*x2", 2, 6);
        let p = prepare(&f, 5).unwrap();
        assert_eq!(p.g, s("x1 - x2", 2, 6));
        assert_eq!(p.u, s("1 + x1", 2, 6));
        let back = reduce_aux_order(&p.g.mul(&p.u).unwrap(), 5);
        assert_eq!(back, reduce_aux_order(&f, 5));
    }

    #[test]
    fn prepare_cubic_unit_example() {
        // f = (X1^2 - X2^3)(1 + X1 + X2)
        let f = s(
            "x1^2 + x1^3 + x1^2*x2 - x2^3 - x1*x2^3 - x2^4",
            2,
            6,
        );
        let p = prepare(&f, 5).unwrap();
        assert_eq!(p.g, s("x1^2 - x2^3", 2, 6));
        assert_eq!(p.u, s("1 + x1 + x2", 2, 6));
    }

    #[test]
    fn prepare_is_idempotent_on_prepared_input() {
        let g = s("x1^2 - x2^2*x1 - x2^3", 2, 8);
        let p = prepare(&g, 6).unwrap();
        assert_eq!(p.g, g);
        assert_eq!(p.u, MultiSeries::one(2, 8));
    }

    #[test]
    fn divide_by_quadratic() {
        let f = s("x1^3", 2, 6);
        let g = s("x1^2 - x2", 2, 6);
        let (q, r) = divide(&f, &g, 5).unwrap();
        assert_eq!(q, s("x1", 2, 6));
        assert_eq!(r, s("x1*x2", 2, 6));
    }

    #[test]
    fn divide_constant_and_linear() {
        let g = s("x1 - x2", 2, 6);
        let (q, r) = divide(&s("1", 2, 6), &g, 5).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, s("1", 2, 6));
        let (q, r) = divide(&s("x1", 2, 6), &g, 5).unwrap();
        assert_eq!(q, s("1", 2, 6));
        assert_eq!(r, s("x2", 2, 6));
    }

    #[test]
    fn divide_rejects_non_monic() {
        let f = s("x1", 2, 4);
        assert!(matches!(
            divide(&f, &s("2*x1 - x2", 2, 4), 3),
            Err(WeierstrassError::Divisor(_))
        ));
        assert!(matches!(
            divide(&f, &s("x1 - 1", 2, 4), 3),
            Err(WeierstrassError::Divisor(_))
        ));
    }

    #[test]
    fn swap_change_makes_regular() {
        let f = s("x2", 2, 4);
        let swap = vec![vec![0, 1], vec![1, 0]];
        let changed = apply_linear_change(&f, &swap).unwrap();
        assert_eq!(changed, s("x1", 2, 4));
        assert_eq!(x1_vanishing_order(&changed).unwrap(), 1);
    }

    #[test]
    fn shear_change_example() {
        // f = X1 X2 under X2 -> X2 + X1 becomes X1^2 + X1 X2, order 2.
        let f = s("x1*x2", 2, 4);
        let shear = vec![vec![1, 0], vec![1, 1]];
        let changed = apply_linear_change(&f, &shear).unwrap();
        assert_eq!(changed, s("x1^2 + x1*x2", 2, 4));
        assert_eq!(x1_vanishing_order(&changed).unwrap(), 2);
    }
}
