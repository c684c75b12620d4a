//! Toy Hodge-cohomology rings and their classes.
//!
//! Every space the verifier handles (points, projective spaces, products,
//! iterated projective bundles) has a cohomology ring presented by degree-1
//! generators with one triangular rewrite per generator: a pure power
//! g^d maps to an expression in strictly lower powers of g (and arbitrary
//! powers of earlier generators). Normal forms under such a system are
//! canonical, so class equality is coefficientwise map equality.

mod classes;
mod rr;
mod spaces;

pub use classes::{
    chern_character, euler_class, integrate, pushforward, todd, todd_q_coefficients,
    total_chern, EulerNormalization,
};
pub use rr::{
    box_product, chi_of_hypersurface, grr_check, grr_check_identity, hrr, is_integer,
    oracle_chi_proj, rational_to_integer, GrrReport,
};
pub use spaces::{
    point, proj_bundle, proj_space, product, pullback_to_bundle, pullback_to_product,
    twist_line, twist_line_product, SpaceKind,
};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharError {
    #[error("classes live in different rings")]
    RingMismatch,
    #[error("{0}")]
    Parameter(String),
    #[error("unsupported map shape: {0}")]
    Catalog(String),
}

pub type Monomial = Vec<u32>;
pub type PolyMap = BTreeMap<Monomial, BigRational>;

/// A graded ring Q[g_1, ..., g_k] modulo one triangular relation per
/// generator: g_j^{bound_j} rewrites to `rewrites[j]`.
#[derive(Debug, PartialEq, Eq)]
pub struct HodgeRing {
    gen_names: Vec<String>,
    bounds: Vec<u32>,
    rewrites: Vec<PolyMap>,
    top_degree: u32,
}

impl HodgeRing {
    pub(crate) fn new(
        gen_names: Vec<String>,
        bounds: Vec<u32>,
        rewrites: Vec<PolyMap>,
        top_degree: u32,
    ) -> Arc<Self> {
        assert_eq!(gen_names.len(), bounds.len());
        assert_eq!(gen_names.len(), rewrites.len());
        Arc::new(HodgeRing {
            gen_names,
            bounds,
            rewrites,
            top_degree,
        })
    }

    pub fn ngens(&self) -> usize {
        self.gen_names.len()
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn basis_size(&self) -> u64 {
        self.bounds.iter().map(|&b| b as u64).product()
    }

    /// The unique top-degree basis monomial (all exponents at bound - 1).
    pub fn top_monomial(&self) -> Monomial {
        self.bounds.iter().map(|&b| b - 1).collect()
    }

    /// Rewrite to normal form: no exponent reaches its bound, no monomial
    /// exceeds the top degree. Reduction at the highest offending generator
    /// strictly lowers its exponent, so the loop terminates.
    fn normalize(&self, raw: PolyMap) -> PolyMap {
        let mut out = PolyMap::new();
        let mut work: Vec<(Monomial, BigRational)> = raw.into_iter().collect();
        while let Some((mono, coeff)) = work.pop() {
            if coeff.is_zero() {
                continue;
            }
            if mono.iter().sum::<u32>() > self.top_degree {
                continue;
            }
            match (0..self.ngens())
                .rev()
                .find(|&j| mono[j] >= self.bounds[j])
            {
                None => {
                    let entry = out.entry(mono).or_insert_with(BigRational::zero);
                    *entry += coeff;
                }
                Some(j) => {
                    let mut base = mono.clone();
                    base[j] -= self.bounds[j];
                    for (rel_mono, rel_coeff) in &self.rewrites[j] {
                        let combined: Monomial =
                            base.iter().zip(rel_mono).map(|(a, b)| a + b).collect();
                        work.push((combined, &coeff * rel_coeff));
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// An element of a Hodge ring in normal form.
#[derive(Debug, Clone)]
pub struct CohClass {
    pub ring: Arc<HodgeRing>,
    pub coeffs: PolyMap,
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.coeffs == other.coeffs
    }
}

impl Eq for CohClass {}

impl CohClass {
    pub fn zero(ring: &Arc<HodgeRing>) -> Self {
        CohClass {
            ring: ring.clone(),
            coeffs: PolyMap::new(),
        }
    }

    pub fn one(ring: &Arc<HodgeRing>) -> Self {
        Self::scalar(ring, BigRational::one())
    }

    pub fn scalar(ring: &Arc<HodgeRing>, c: BigRational) -> Self {
        let mut coeffs = PolyMap::new();
        if !c.is_zero() {
            coeffs.insert(vec![0; ring.ngens()], c);
        }
        CohClass {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn generator(ring: &Arc<HodgeRing>, idx: usize) -> Self {
        assert!(idx < ring.ngens());
        let mut mono = vec![0u32; ring.ngens()];
        mono[idx] = 1;
        let raw: PolyMap = [(mono, BigRational::one())].into_iter().collect();
        CohClass {
            ring: ring.clone(),
            coeffs: ring.normalize(raw),
        }
    }

    pub fn from_raw(ring: &Arc<HodgeRing>, raw: PolyMap) -> Self {
        CohClass {
            ring: ring.clone(),
            coeffs: ring.normalize(raw),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_ring(&self, other: &CohClass) -> Result<(), CharError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(CharError::RingMismatch)
        }
    }

    pub fn add(&self, other: &CohClass) -> Result<CohClass, CharError> {
        self.check_ring(other)?;
        let mut coeffs = self.coeffs.clone();
        for (m, c) in &other.coeffs {
            let entry = coeffs.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry += c;
        }
        coeffs.retain(|_, v| !v.is_zero());
        Ok(CohClass {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &CohClass) -> Result<CohClass, CharError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CohClass {
        CohClass {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> CohClass {
        if c.is_zero() {
            return CohClass::zero(&self.ring);
        }
        CohClass {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &CohClass) -> Result<CohClass, CharError> {
        self.check_ring(other)?;
        let mut raw = PolyMap::new();
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                let entry = raw.entry(m).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        Ok(CohClass {
            ring: self.ring.clone(),
            coeffs: self.ring.normalize(raw),
        })
    }

    pub fn pow(&self, n: u32) -> CohClass {
        let mut acc = CohClass::one(&self.ring);
        for _ in 0..n {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// The homogeneous component of a given degree.
    pub fn degree_part(&self, degree: u32) -> CohClass {
        CohClass {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.iter().sum::<u32>() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest degree with a nonzero component.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|m| m.iter().sum()).max()
    }

    /// True when the class is homogeneous of degree 1 or zero; bundle roots
    /// must satisfy this.
    pub fn is_linear(&self) -> bool {
        self.coeffs.keys().all(|m| m.iter().sum::<u32>() == 1)
    }

    pub fn coefficient(&self, mono: &[u32]) -> BigRational {
        self.coeffs.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", crate::scalar::format_rational(c))?;
            for (j, &k) in m.iter().enumerate() {
                if k > 0 {
                    write!(f, "*{}", self.ring.gen_names[j])?;
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// A virtual bundle as a difference of Chern-root multisets. Symmetric
/// functions of the roots are all that is ever extracted, so root order is
/// irrelevant.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleSpec {
    pub plus_roots: Vec<CohClass>,
    pub minus_roots: Vec<CohClass>,
}

impl BundleSpec {
    pub fn new(
        plus_roots: Vec<CohClass>,
        minus_roots: Vec<CohClass>,
    ) -> Result<Self, CharError> {
        for r in plus_roots.iter().chain(&minus_roots) {
            if !r.is_linear() {
                return Err(CharError::Parameter(
                    "bundle roots must be homogeneous of degree 1".into(),
                ));
            }
        }
        Ok(BundleSpec {
            plus_roots,
            minus_roots,
        })
    }

    pub fn trivial(ring: &Arc<HodgeRing>, rank: u32) -> Self {
        BundleSpec {
            plus_roots: (0..rank).map(|_| CohClass::zero(ring)).collect(),
            minus_roots: Vec::new(),
        }
    }

    pub fn line(root: CohClass) -> Result<Self, CharError> {
        BundleSpec::new(vec![root], Vec::new())
    }

    pub fn rank(&self) -> i64 {
        self.plus_roots.len() as i64 - self.minus_roots.len() as i64
    }

    pub fn direct_sum(&self, other: &BundleSpec) -> BundleSpec {
        let mut plus = self.plus_roots.clone();
        plus.extend(other.plus_roots.clone());
        let mut minus = self.minus_roots.clone();
        minus.extend(other.minus_roots.clone());
        BundleSpec {
            plus_roots: plus,
            minus_roots: minus,
        }
    }

    /// Virtual difference self - other.
    pub fn difference(&self, other: &BundleSpec) -> BundleSpec {
        let mut plus = self.plus_roots.clone();
        plus.extend(other.minus_roots.clone());
        let mut minus = self.minus_roots.clone();
        minus.extend(other.plus_roots.clone());
        BundleSpec {
            plus_roots: plus,
            minus_roots: minus,
        }
    }

    /// Tensor product: roots add pairwise, with the sign rule for virtual
    /// summands.
    pub fn tensor(&self, other: &BundleSpec) -> Result<BundleSpec, CharError> {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for a in &self.plus_roots {
            for b in &other.plus_roots {
                plus.push(a.add(b)?);
            }
            for b in &other.minus_roots {
                minus.push(a.add(b)?);
            }
        }
        for a in &self.minus_roots {
            for b in &other.plus_roots {
                minus.push(a.add(b)?);
            }
            for b in &other.minus_roots {
                plus.push(a.add(b)?);
            }
        }
        Ok(BundleSpec {
            plus_roots: plus,
            minus_roots: minus,
        })
    }

    /// Elementary symmetric function e_i of the plus roots (bundles with
    /// minus roots have their Chern classes taken through `total_chern`).
    pub fn chern_class(&self, i: usize) -> Result<CohClass, CharError> {
        let ring = self
            .plus_roots
            .first()
            .map(|r| r.ring.clone())
            .ok_or_else(|| CharError::Parameter("empty bundle has no Chern classes".into()))?;
        let mut e: Vec<CohClass> = vec![CohClass::one(&ring)];
        for root in &self.plus_roots {
            let mut next = e.clone();
            next.push(CohClass::zero(&ring));
            for k in (1..next.len()).rev() {
                if k - 1 < e.len() {
                    next[k] = next[k].add(&e[k - 1].mul(root)?)?;
                }
            }
            e = next;
        }
        Ok(e.get(i).cloned().unwrap_or_else(|| CohClass::zero(&ring)))
    }
}

/// A catalog space: its ring, tangent data, and how it was built.
#[derive(Debug, Clone)]
pub struct Space {
    pub ring: Arc<HodgeRing>,
    pub tangent: BundleSpec,
    pub dim: u32,
    pub kind: SpaceKind,
}

impl Space {
    pub fn line_bundle(&self, root: CohClass) -> Result<BundleSpec, CharError> {
        if root.ring != self.ring {
            return Err(CharError::RingMismatch);
        }
        BundleSpec::line(root)
    }

    pub fn structure_sheaf(&self) -> BundleSpec {
        BundleSpec::trivial(&self.ring, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proj_space_basis() {
        let p2 = proj_space(2);
        assert_eq!(p2.ring.basis_size(), 3);
        assert_eq!(p2.ring.top_degree(), 2);
        let h = CohClass::generator(&p2.ring, 0);
        assert!(h.pow(2).coefficient(&[2]).is_one());
        assert!(h.pow(3).is_zero());
    }

    #[test]
    fn product_basis() {
        let x = product(&proj_space(1), &proj_space(1));
        assert_eq!(x.ring.basis_size(), 4);
        let h = CohClass::generator(&x.ring, 0);
        let hp = CohClass::generator(&x.ring, 1);
        let hh = h.mul(&hp).unwrap();
        assert!(!hh.is_zero());
        assert!(h.pow(2).is_zero());
        assert!(hp.pow(2).is_zero());
    }

    #[test]
    fn trivial_bundle_projectivization_matches_product() {
        let p1 = proj_space(1);
        let v = BundleSpec::trivial(&p1.ring, 2);
        let pb = proj_bundle(&p1, &v).unwrap();
        assert_eq!(pb.ring.basis_size(), 4);
        // xi^2 -> 0 exactly as in P1 x P1 after renaming.
        let prod = product(&proj_space(1), &proj_space(1));
        assert_eq!(pb.ring.bounds(), prod.ring.bounds());
        assert_eq!(pb.ring.rewrites, prod.ring.rewrites);
    }

    #[test]
    fn ring_mismatch_reported() {
        let a = proj_space(1);
        let b = proj_space(2);
        let ha = CohClass::generator(&a.ring, 0);
        let hb = CohClass::generator(&b.ring, 0);
        assert_eq!(ha.mul(&hb), Err(CharError::RingMismatch));
    }

    #[test]
    fn rewrite_respects_grading() {
        // On P(O + O(1)) over P1: xi^2 = -h xi, so xi^3 = h^2 xi = 0.
        let p1 = proj_space(1);
        let h = CohClass::generator(&p1.ring, 0);
        let v = p1.structure_sheaf().direct_sum(&p1.line_bundle(h).unwrap());
        let pb = proj_bundle(&p1, &v).unwrap();
        let xi = CohClass::generator(&pb.ring, 1);
        let h_total = CohClass::generator(&pb.ring, 0);
        assert_eq!(xi.pow(2), xi.mul(&h_total).unwrap().neg());
        assert!(xi.pow(3).is_zero());
    }
}
