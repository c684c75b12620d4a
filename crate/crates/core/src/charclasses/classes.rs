//! Chern classes, the Chern character, Todd classes, Euler classes in both
//! normalizations, integration, and the two supported pushforwards.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{BundleSpec, CharError, CohClass, Space, SpaceKind};

/// c(V) as the coefficient list of 1 + c_1 t + ... + c_top t^top, computed as
/// prod (1 + x_j t) / prod (1 + y_j t) over the roots. Whitney additivity is
/// a consequence of the product form.
pub fn total_chern(v: &BundleSpec) -> Result<Vec<CohClass>, CharError> {
    let ring = roots_ring(v)?;
    let top = ring.top_degree() as usize;
    let mut numer: Vec<CohClass> = vec![CohClass::one(&ring)];
    numer.resize(top + 1, CohClass::zero(&ring));
    for root in &v.plus_roots {
        mul_linear(&mut numer, root)?;
    }
    let mut denom: Vec<CohClass> = vec![CohClass::one(&ring)];
    denom.resize(top + 1, CohClass::zero(&ring));
    for root in &v.minus_roots {
        mul_linear(&mut denom, root)?;
    }
    series_divide(&numer, &denom)
}

/// In-place multiplication of a t-truncated polynomial by (1 + root * t).
fn mul_linear(coeffs: &mut [CohClass], root: &CohClass) -> Result<(), CharError> {
    for i in (1..coeffs.len()).rev() {
        let shifted = coeffs[i - 1].mul(root)?;
        coeffs[i] = coeffs[i].add(&shifted)?;
    }
    Ok(())
}

/// Truncated quotient of t-polynomials with invertible constant term 1.
fn series_divide(
    numer: &[CohClass],
    denom: &[CohClass],
) -> Result<Vec<CohClass>, CharError> {
    let n = numer.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // out_i = numer_i - sum_{j>=1} denom_j out_{i-j}; denom_0 = 1.
        let mut acc = numer[i].clone();
        for j in 1..=i {
            let prod = denom[j].mul(&out[i - j])?;
            acc = acc.sub(&prod)?;
        }
        out.push(acc);
    }
    Ok(out)
}

fn roots_ring(v: &BundleSpec) -> Result<std::sync::Arc<super::HodgeRing>, CharError> {
    v.plus_roots
        .iter()
        .chain(&v.minus_roots)
        .map(|r| r.ring.clone())
        .next()
        .ok_or_else(|| CharError::Parameter("bundle with no roots needs a ring context".into()))
}

fn factorial(n: u32) -> BigRational {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

/// exp of a nilpotent degree-1 class, truncated at the ring's top degree.
fn exp_class(x: &CohClass) -> Result<CohClass, CharError> {
    let top = x.ring.top_degree();
    let mut acc = CohClass::one(&x.ring);
    let mut power = CohClass::one(&x.ring);
    for i in 1..=top {
        power = power.mul(x)?;
        if power.is_zero() {
            break;
        }
        acc = acc.add(&power.scale(&factorial(i).recip()))?;
    }
    Ok(acc)
}

/// ch(V) = sum e^{x_j} - sum e^{y_j}.
pub fn chern_character(v: &BundleSpec) -> Result<CohClass, CharError> {
    let ring = roots_ring(v)?;
    let mut acc = CohClass::zero(&ring);
    for root in &v.plus_roots {
        acc = acc.add(&exp_class(root)?)?;
    }
    for root in &v.minus_roots {
        acc = acc.sub(&exp_class(root)?)?;
    }
    Ok(acc)
}

/// Coefficients of the universal Todd series Q(x) = x / (1 - e^{-x}) up to
/// degree `max_deg`, from the Bernoulli recurrence
/// B_0 = 1, sum_{j<=m} C(m+1, j) B_j = 0; Q has coefficients B_n/n! with the
/// sign of B_1 flipped.
pub fn todd_q_coefficients(max_deg: u32) -> Vec<BigRational> {
    let n = max_deg as usize;
    let mut bernoulli: Vec<BigRational> = Vec::with_capacity(n + 1);
    bernoulli.push(BigRational::one());
    for m in 1..=n {
        // B_m = -(1/(m+1)) sum_{j<m} C(m+1, j) B_j
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, b) in bernoulli.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * b;
            // C(m+1, j+1) = C(m+1, j) * (m+1-j) / (j+1)
            binom = binom * BigInt::from((m + 1 - j) as u64) / BigInt::from((j + 1) as u64);
        }
        let denom = BigRational::from_integer(BigInt::from((m + 1) as u64));
        bernoulli.push(-acc / denom);
    }
    (0..=n)
        .map(|i| {
            let coeff = &bernoulli[i] / factorial(i as u32);
            if i == 1 {
                -coeff
            } else {
                coeff
            }
        })
        .collect()
}

/// Q(x) evaluated on a degree-1 class.
fn todd_of_root(x: &CohClass, q: &[BigRational]) -> Result<CohClass, CharError> {
    let mut acc = CohClass::zero(&x.ring);
    let mut power = CohClass::one(&x.ring);
    for (i, c) in q.iter().enumerate() {
        if i > 0 {
            power = power.mul(x)?;
            if power.is_zero() {
                break;
            }
        }
        acc = acc.add(&power.scale(c))?;
    }
    Ok(acc)
}

/// Q(x)^{-1} = (1 - e^{-x}) / x = sum (-x)^i / (i+1)!.
fn todd_inverse_of_root(x: &CohClass) -> Result<CohClass, CharError> {
    let top = x.ring.top_degree();
    let mut acc = CohClass::zero(&x.ring);
    let mut power = CohClass::one(&x.ring);
    for i in 0..=top {
        if i > 0 {
            power = power.mul(&x.neg())?;
            if power.is_zero() {
                break;
            }
        }
        acc = acc.add(&power.scale(&factorial(i + 1).recip()))?;
    }
    Ok(acc)
}

/// Td(V) over the roots; minus roots contribute Q(y)^{-1}.
pub fn todd(v: &BundleSpec) -> Result<CohClass, CharError> {
    let ring = roots_ring(v)?;
    let q = todd_q_coefficients(ring.top_degree());
    let mut acc = CohClass::one(&ring);
    for root in &v.plus_roots {
        acc = acc.mul(&todd_of_root(root, &q)?)?;
    }
    for root in &v.minus_roots {
        acc = acc.mul(&todd_inverse_of_root(root)?)?;
    }
    Ok(acc)
}

/// Euler classes of a line bundle in the two normalizations the pushforward
/// comparison cares about: c_1 on the Hodge side, 1 - e^{-c_1} on the
/// Hochschild side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerNormalization {
    Hodge,
    Hochschild,
}

pub fn euler_class(
    l: &BundleSpec,
    normalization: EulerNormalization,
) -> Result<CohClass, CharError> {
    if l.rank() != 1 || l.plus_roots.len() != 1 || !l.minus_roots.is_empty() {
        return Err(CharError::Parameter(
            "Euler classes are computed for honest line bundles".into(),
        ));
    }
    let c1 = l.plus_roots[0].clone();
    match normalization {
        EulerNormalization::Hodge => Ok(c1),
        EulerNormalization::Hochschild => {
            let one = CohClass::one(&c1.ring);
            one.sub(&exp_class(&c1.neg())?)
        }
    }
}

/// Coefficient of the unique top-degree basis monomial; the normalization
/// makes integral of h^n over P^n equal 1.
pub fn integrate(space: &Space, alpha: &CohClass) -> Result<BigRational, CharError> {
    if alpha.ring != space.ring {
        return Err(CharError::RingMismatch);
    }
    Ok(alpha.coefficient(&space.ring.top_monomial()))
}

/// Pushforward along the projection encoded in the space's construction:
/// X x Y -> X integrates out the Y factor; P(V) -> X extracts the xi^{d-1}
/// coefficient in normal form.
pub fn pushforward(total: &Space, alpha: &CohClass) -> Result<CohClass, CharError> {
    if alpha.ring != total.ring {
        return Err(CharError::RingMismatch);
    }
    match &total.kind {
        SpaceKind::Product(x, y) => {
            let nx = x.ring.ngens();
            let y_top = y.ring.top_monomial();
            let mut raw = super::PolyMap::new();
            for (mono, coeff) in &alpha.coeffs {
                if mono[nx..] == y_top[..] {
                    raw.insert(mono[..nx].to_vec(), coeff.clone());
                }
            }
            Ok(CohClass::from_raw(&x.ring, raw))
        }
        SpaceKind::ProjBundle(x, v) => {
            let d = v.plus_roots.len() as u32;
            let nx = x.ring.ngens();
            let mut raw = super::PolyMap::new();
            for (mono, coeff) in &alpha.coeffs {
                if mono[nx] == d - 1 {
                    raw.insert(mono[..nx].to_vec(), coeff.clone());
                }
            }
            Ok(CohClass::from_raw(&x.ring, raw))
        }
        _ => Err(CharError::Catalog(
            "pushforward supports product and bundle projections".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{proj_space, product, pullback_to_product};
    use super::super::spaces::{twist_line, twist_line_product};
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn chern_of_split_bundle_on_p2() {
        let p2 = proj_space(2);
        let v = twist_line(&p2, 2)
            .unwrap()
            .direct_sum(&twist_line(&p2, 3).unwrap());
        let c = total_chern(&v).unwrap();
        let h = CohClass::generator(&p2.ring, 0);
        assert_eq!(c[0], CohClass::one(&p2.ring));
        assert_eq!(c[1], h.scale(&rat(5, 1)));
        assert_eq!(c[2], h.pow(2).scale(&rat(6, 1)));
    }

    #[test]
    fn chern_of_tangent_p2() {
        let p2 = proj_space(2);
        let c = total_chern(&p2.tangent).unwrap();
        let h = CohClass::generator(&p2.ring, 0);
        assert_eq!(c[1], h.scale(&rat(3, 1)));
        assert_eq!(c[2], h.pow(2).scale(&rat(3, 1)));
    }

    #[test]
    fn chern_of_virtual_cancellation() {
        let p2 = proj_space(2);
        let v = twist_line(&p2, 2).unwrap();
        let virt = v.difference(&v);
        let c = total_chern(&virt).unwrap();
        assert_eq!(c[0], CohClass::one(&p2.ring));
        assert!(c[1].is_zero());
        assert!(c[2].is_zero());
    }

    #[test]
    fn chern_character_of_twist() {
        let p2 = proj_space(2);
        let v = twist_line(&p2, 3).unwrap();
        let ch = chern_character(&v).unwrap();
        let h = CohClass::generator(&p2.ring, 0);
        let expected = CohClass::one(&p2.ring)
            .add(&h.scale(&rat(3, 1)))
            .unwrap()
            .add(&h.pow(2).scale(&rat(9, 2)))
            .unwrap();
        assert_eq!(ch, expected);
    }

    #[test]
    fn chern_character_multiplicative_on_tensor() {
        let x = product(&proj_space(1), &proj_space(1));
        let a = twist_line_product(&x, 2, 0).unwrap();
        let b = twist_line_product(&x, 0, 3).unwrap();
        let ab = a.tensor(&b).unwrap();
        let lhs = chern_character(&ab).unwrap();
        let rhs = chern_character(&a)
            .unwrap()
            .mul(&chern_character(&b).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn todd_series_low_coefficients() {
        let q = todd_q_coefficients(4);
        assert_eq!(q[0], rat(1, 1));
        assert_eq!(q[1], rat(1, 2));
        assert_eq!(q[2], rat(1, 12));
        assert_eq!(q[3], rat(0, 1));
        assert_eq!(q[4], rat(-1, 720));
    }

    #[test]
    fn todd_of_p1_tangent() {
        let p1 = proj_space(1);
        let td = todd(&p1.tangent).unwrap();
        let h = CohClass::generator(&p1.ring, 0);
        assert_eq!(td, CohClass::one(&p1.ring).add(&h).unwrap());
    }

    #[test]
    fn todd_of_trivial_is_one() {
        let p2 = proj_space(2);
        let v = BundleSpec::trivial(&p2.ring, 3);
        assert_eq!(todd(&v).unwrap(), CohClass::one(&p2.ring));
    }

    #[test]
    fn euler_normalizations_on_p2() {
        let p2 = proj_space(2);
        let l = twist_line(&p2, 1).unwrap();
        let h = CohClass::generator(&p2.ring, 0);
        assert_eq!(euler_class(&l, EulerNormalization::Hodge).unwrap(), h);
        let hh = euler_class(&l, EulerNormalization::Hochschild).unwrap();
        let expected = h.sub(&h.pow(2).scale(&rat(1, 2))).unwrap();
        assert_eq!(hh, expected);
    }

    #[test]
    fn todd_twist_identity() {
        // (1 - e^{-c1}) * Q(c1) = c1 exactly.
        let p3 = proj_space(3);
        let l = twist_line(&p3, 2).unwrap();
        let e_hh = euler_class(&l, EulerNormalization::Hochschild).unwrap();
        let q = todd(&l).unwrap();
        let c1 = euler_class(&l, EulerNormalization::Hodge).unwrap();
        assert_eq!(e_hh.mul(&q).unwrap(), c1);
    }

    #[test]
    fn integrate_normalization() {
        let p2 = proj_space(2);
        let h = CohClass::generator(&p2.ring, 0);
        assert_eq!(integrate(&p2, &h.pow(2)).unwrap(), rat(1, 1));
        assert_eq!(integrate(&p2, &h).unwrap(), rat(0, 1));
        let x = product(&proj_space(1), &proj_space(1));
        let hh = CohClass::generator(&x.ring, 0)
            .mul(&CohClass::generator(&x.ring, 1))
            .unwrap();
        assert_eq!(integrate(&x, &hh).unwrap(), rat(1, 1));
    }

    #[test]
    fn pushforward_product_extracts_fiber_top() {
        let x = product(&proj_space(1), &proj_space(1));
        let h = CohClass::generator(&x.ring, 0);
        let hp = CohClass::generator(&x.ring, 1);
        let alpha = h.mul(&hp).unwrap();
        let down = pushforward(&x, &alpha).unwrap();
        let p1 = proj_space(1);
        assert_eq!(down, CohClass::generator(&p1.ring, 0));
    }

    #[test]
    fn pushforward_respects_projection_formula() {
        let x = product(&proj_space(1), &proj_space(2));
        let base = proj_space(1);
        let hb = CohClass::generator(&base.ring, 0);
        let alpha = CohClass::generator(&x.ring, 1).pow(2); // fiber top class
        let pulled = pullback_to_product(&x, &hb).unwrap();
        let lhs = pushforward(&x, &alpha.mul(&pulled).unwrap()).unwrap();
        let rhs = pushforward(&x, &alpha).unwrap().mul(&hb).unwrap();
        assert_eq!(lhs, rhs);
    }
}
