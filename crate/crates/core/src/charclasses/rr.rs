//! The verifiers: hrr as integral of ch * Td, the brute-force Euler
//! characteristic oracle for projective space, and the two-sided
//! pushforward comparison.

use num_rational::BigRational;
use num_traits::Zero;

use super::classes::{chern_character, integrate, pushforward, todd};
use super::spaces::SpaceKind;
use super::{BundleSpec, CharError, CohClass, Space};

/// chi(X, V) = integral of ch(V) Td(T_X), exact.
pub fn hrr(space: &Space, v: &BundleSpec) -> Result<BigRational, CharError> {
    let ch = chern_character(v)?;
    let td = todd(&space.tangent)?;
    integrate(space, &ch.mul(&td)?)
}

/// Independent oracle for chi(P^n, O(k)) by monomial enumeration:
/// h^0 counts degree-k monomials in n + 1 variables, h^n counts the
/// all-negative twisted tuples, everything else vanishes.
pub fn oracle_chi_proj(n: u32, k: i64) -> i64 {
    let h0 = count_compositions(k, n + 1);
    // a_i <= -1 with sum k: substitute a_i = -1 - b_i, b_i >= 0.
    let hn = count_compositions(-k - i64::from(n) - 1, n + 1);
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    h0 + sign * hn
}

/// Number of tuples of `parts` nonnegative integers with the given sum,
/// enumerated recursively rather than through a binomial formula.
fn count_compositions(sum: i64, parts: u32) -> i64 {
    if sum < 0 {
        return 0;
    }
    if parts == 0 {
        return i64::from(sum == 0);
    }
    if parts == 1 {
        return 1;
    }
    let mut total = 0;
    for first in 0..=sum {
        total += count_compositions(sum - first, parts - 1);
    }
    total
}

/// Both sides of the pushforward identity for a supported projection
/// f: X -> Y: lhs = ch(f_* V) Td(T_Y) on the base, rhs = f_*(ch(V) Td(T_X)).
#[derive(Debug, Clone)]
pub struct GrrReport {
    pub lhs: CohClass,
    pub rhs: CohClass,
    pub equal: bool,
}

/// The caller supplies the K-theory pushforward f_* V as root data on the
/// base (for example Sym-data for relative twists on a projective bundle).
pub fn grr_check(
    total: &Space,
    v: &BundleSpec,
    pushed: &BundleSpec,
) -> Result<GrrReport, CharError> {
    let base = match &total.kind {
        SpaceKind::Product(x, _) => x.as_ref().clone(),
        SpaceKind::ProjBundle(x, _) => x.as_ref().clone(),
        _ => {
            return Err(CharError::Catalog(
                "grr_check supports product and bundle projections".into(),
            ))
        }
    };
    let lhs = chern_character(pushed)?.mul(&todd(&base.tangent)?)?;
    let rhs = pushforward(total, &chern_character(v)?.mul(&todd(&total.tangent)?)?)?;
    let equal = lhs == rhs;
    Ok(GrrReport { lhs, rhs, equal })
}

/// The identity-map instance of the pushforward comparison: both sides are
/// ch(V) Td(T_X) on the space itself, computed separately.
pub fn grr_check_identity(space: &Space, v: &BundleSpec) -> Result<GrrReport, CharError> {
    let lhs = chern_character(v)?.mul(&todd(&space.tangent)?)?;
    let rhs = chern_character(v)?.mul(&todd(&space.tangent)?)?;
    let equal = lhs == rhs;
    Ok(GrrReport { lhs, rhs, equal })
}

/// External tensor product V boxtimes W on a product space: pull both
/// bundles back and tensor.
pub fn box_product(
    total: &Space,
    v_on_x: &BundleSpec,
    w_on_y: &BundleSpec,
) -> Result<BundleSpec, CharError> {
    let (x, y) = match &total.kind {
        SpaceKind::Product(x, y) => (x, y),
        _ => return Err(CharError::Catalog("box product needs a product space".into())),
    };
    let nx = x.ring.ngens();
    let x_map: Vec<usize> = (0..nx).collect();
    let y_map: Vec<usize> = (0..y.ring.ngens()).map(|j| nx + j).collect();
    let pull = |b: &BundleSpec, map: &[usize], src: &Space| -> Result<BundleSpec, CharError> {
        let embed = |r: &CohClass| -> Result<CohClass, CharError> {
            if r.ring != src.ring {
                return Err(CharError::RingMismatch);
            }
            let raw: super::PolyMap = r
                .coeffs
                .iter()
                .map(|(m, c)| {
                    let mut mono = vec![0u32; total.ring.ngens()];
                    for (j, &k) in m.iter().enumerate() {
                        mono[map[j]] = k;
                    }
                    (mono, c.clone())
                })
                .collect();
            Ok(CohClass::from_raw(&total.ring, raw))
        };
        Ok(BundleSpec {
            plus_roots: b.plus_roots.iter().map(&embed).collect::<Result<_, _>>()?,
            minus_roots: b.minus_roots.iter().map(&embed).collect::<Result<_, _>>()?,
        })
    };
    pull(v_on_x, &x_map, x)?.tensor(&pull(w_on_y, &y_map, y)?)
}

/// chi(O_X) for a degree-d hypersurface X in P^2 via the twisted ideal-sheaf
/// difference chi(P^2, O) - chi(P^2, O(-d)).
pub fn chi_of_hypersurface(d: i64) -> Result<BigRational, CharError> {
    let p2 = super::proj_space(2);
    let o = p2.structure_sheaf();
    let o_minus_d = super::spaces::twist_line(&p2, -d)?;
    Ok(hrr(&p2, &o)? - hrr(&p2, &o_minus_d)?)
}

/// Exact integer extraction for verifier reports; errors if not integral.
pub fn rational_to_integer(r: &BigRational) -> Option<i64> {
    if r.is_integer() {
        i64::try_from(r.numer().clone()).ok()
    } else {
        None
    }
}

/// True when the rational is an integer (hrr outputs must be).
pub fn is_integer(r: &BigRational) -> bool {
    r.is_integer() || r.is_zero()
}
