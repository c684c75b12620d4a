//! The space catalog: point, projective spaces, products, projective
//! bundles, and the pullback maps along the two supported projections.

use std::sync::Arc;

use num_rational::BigRational;

use super::{BundleSpec, CharError, CohClass, HodgeRing, Monomial, PolyMap, Space};

/// Construction tree of a catalog space.
#[derive(Debug, Clone)]
pub enum SpaceKind {
    Point,
    Proj(u32),
    Product(Box<Space>, Box<Space>),
    ProjBundle(Box<Space>, BundleSpec),
}

pub fn point() -> Space {
    let ring = HodgeRing::new(Vec::new(), Vec::new(), Vec::new(), 0);
    Space {
        tangent: BundleSpec {
            plus_roots: Vec::new(),
            minus_roots: Vec::new(),
        },
        ring,
        dim: 0,
        kind: SpaceKind::Point,
    }
}

/// P^n with ring Q[h]/h^{n+1}; the tangent bundle carries the Euler-sequence
/// roots: h repeated n + 1 times minus one trivial summand.
pub fn proj_space(n: u32) -> Space {
    let ring = HodgeRing::new(
        vec!["h".to_string()],
        vec![n + 1],
        vec![PolyMap::new()],
        n,
    );
    let h = CohClass::generator(&ring, 0);
    let tangent = BundleSpec {
        plus_roots: (0..=n).map(|_| h.clone()).collect(),
        minus_roots: vec![CohClass::zero(&ring)],
    };
    Space {
        ring,
        tangent,
        dim: n,
        kind: SpaceKind::Proj(n),
    }
}

fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.iter().any(|t| t == &name) {
        name.push('\'');
    }
    name
}

/// Remap a monomial into a larger generator list by an index map.
fn embed_monomial(mono: &[u32], index_map: &[usize], total: usize) -> Monomial {
    let mut out = vec![0u32; total];
    for (j, &k) in mono.iter().enumerate() {
        out[index_map[j]] = k;
    }
    out
}

fn embed_class(
    class: &CohClass,
    target: &Arc<HodgeRing>,
    index_map: &[usize],
) -> CohClass {
    let raw: PolyMap = class
        .coeffs
        .iter()
        .map(|(m, c)| (embed_monomial(m, index_map, target.ngens()), c.clone()))
        .collect();
    CohClass::from_raw(target, raw)
}

fn embed_bundle(
    bundle: &BundleSpec,
    target: &Arc<HodgeRing>,
    index_map: &[usize],
) -> BundleSpec {
    BundleSpec {
        plus_roots: bundle
            .plus_roots
            .iter()
            .map(|r| embed_class(r, target, index_map))
            .collect(),
        minus_roots: bundle
            .minus_roots
            .iter()
            .map(|r| embed_class(r, target, index_map))
            .collect(),
    }
}

/// X x Y: tensor of the rings, direct sum of the tangents.
pub fn product(x: &Space, y: &Space) -> Space {
    let mut names = x.ring.gen_names().to_vec();
    for name in y.ring.gen_names() {
        let fresh = fresh_name(name, &names);
        names.push(fresh);
    }
    let total = names.len();
    let nx = x.ring.ngens();
    let x_map: Vec<usize> = (0..nx).collect();
    let y_map: Vec<usize> = (0..y.ring.ngens()).map(|j| nx + j).collect();

    let mut bounds = x.ring.bounds().to_vec();
    bounds.extend_from_slice(y.ring.bounds());
    let mut rewrites: Vec<PolyMap> = x
        .ring
        .rewrites
        .iter()
        .map(|rel| {
            rel.iter()
                .map(|(m, c)| (embed_monomial(m, &x_map, total), c.clone()))
                .collect()
        })
        .collect();
    rewrites.extend(y.ring.rewrites.iter().map(|rel| {
        rel.iter()
            .map(|(m, c)| (embed_monomial(m, &y_map, total), c.clone()))
            .collect()
    }));
    let ring = HodgeRing::new(
        names,
        bounds,
        rewrites,
        x.ring.top_degree() + y.ring.top_degree(),
    );
    let tangent = embed_bundle(&x.tangent, &ring, &x_map)
        .direct_sum(&embed_bundle(&y.tangent, &ring, &y_map));
    Space {
        ring,
        tangent,
        dim: x.dim + y.dim,
        kind: SpaceKind::Product(Box::new(x.clone()), Box::new(y.clone())),
    }
}

/// P(V) -> X for V with plus roots x_1..x_d only: adjoin xi with
/// xi^d -> -sum_{i>=1} c_i(V) xi^{d-i}; the relative tangent contributes the
/// roots {xi + x_j} minus one trivial summand.
pub fn proj_bundle(x: &Space, v: &BundleSpec) -> Result<Space, CharError> {
    if !v.minus_roots.is_empty() {
        return Err(CharError::Parameter(
            "projective bundles need honest (non-virtual) bundles".into(),
        ));
    }
    let d = v.plus_roots.len();
    if d == 0 {
        return Err(CharError::Parameter("rank 0 bundle has no projectivization".into()));
    }
    for root in &v.plus_roots {
        if root.ring != x.ring {
            return Err(CharError::RingMismatch);
        }
    }
    let mut names = x.ring.gen_names().to_vec();
    names.push(fresh_name("xi", &names));
    let total = names.len();
    let base_map: Vec<usize> = (0..x.ring.ngens()).collect();

    let mut bounds = x.ring.bounds().to_vec();
    bounds.push(d as u32);
    let mut rewrites: Vec<PolyMap> = x
        .ring
        .rewrites
        .iter()
        .map(|rel| {
            rel.iter()
                .map(|(m, c)| (embed_monomial(m, &base_map, total), c.clone()))
                .collect()
        })
        .collect();
    // xi^d + c_1 xi^{d-1} + ... + c_d = 0, i.e. the roots satisfy
    // prod_j (xi + x_j) = 0.
    let mut relation = PolyMap::new();
    for i in 1..=d {
        let ci = v.chern_class(i)?;
        for (m, c) in &ci.coeffs {
            let mut mono = embed_monomial(m, &base_map, total);
            mono[total - 1] = (d - i) as u32;
            relation.insert(mono, -c.clone());
        }
    }
    rewrites.push(relation);
    let top = x.ring.top_degree() + d as u32 - 1;
    let ring = HodgeRing::new(names, bounds, rewrites, top);

    let xi = CohClass::generator(&ring, total - 1);
    let mut rel_plus = Vec::new();
    for root in &v.plus_roots {
        let lifted = embed_class(root, &ring, &base_map);
        rel_plus.push(xi.add(&lifted)?);
    }
    let relative = BundleSpec {
        plus_roots: rel_plus,
        minus_roots: vec![CohClass::zero(&ring)],
    };
    let tangent = embed_bundle(&x.tangent, &ring, &base_map).direct_sum(&relative);
    Ok(Space {
        ring,
        tangent,
        dim: x.dim + d as u32 - 1,
        kind: SpaceKind::ProjBundle(Box::new(x.clone()), v.clone()),
    })
}

/// Pull a class on the first factor back to the product.
pub fn pullback_to_product(total: &Space, alpha: &CohClass) -> Result<CohClass, CharError> {
    match &total.kind {
        SpaceKind::Product(x, _) => {
            if alpha.ring != x.ring {
                return Err(CharError::RingMismatch);
            }
            let map: Vec<usize> = (0..x.ring.ngens()).collect();
            Ok(embed_class(alpha, &total.ring, &map))
        }
        _ => Err(CharError::Catalog("not a product space".into())),
    }
}

/// Pull a class on the base back to a projective bundle.
pub fn pullback_to_bundle(total: &Space, alpha: &CohClass) -> Result<CohClass, CharError> {
    match &total.kind {
        SpaceKind::ProjBundle(x, _) => {
            if alpha.ring != x.ring {
                return Err(CharError::RingMismatch);
            }
            let map: Vec<usize> = (0..x.ring.ngens()).collect();
            Ok(embed_class(alpha, &total.ring, &map))
        }
        _ => Err(CharError::Catalog("not a projective bundle".into())),
    }
}

/// O(k) on P^n (or any space whose first generator is the hyperplane class).
pub fn twist_line(space: &Space, k: i64) -> Result<BundleSpec, CharError> {
    if space.ring.ngens() == 0 {
        if k == 0 {
            return Ok(space.structure_sheaf());
        }
        return Err(CharError::Parameter("a point carries only O(0)".into()));
    }
    let h = CohClass::generator(&space.ring, 0);
    let root = h.scale(&BigRational::from_integer(k.into()));
    space.line_bundle(root)
}

/// O(a, b) on a product of two projective spaces.
pub fn twist_line_product(space: &Space, a: i64, b: i64) -> Result<BundleSpec, CharError> {
    match &space.kind {
        SpaceKind::Product(x, _) => {
            let nx = x.ring.ngens();
            let h = CohClass::generator(&space.ring, 0);
            let hp = CohClass::generator(&space.ring, nx);
            let root = h
                .scale(&BigRational::from_integer(a.into()))
                .add(&hp.scale(&BigRational::from_integer(b.into())))?;
            space.line_bundle(root)
        }
        _ => Err(CharError::Catalog("O(a,b) needs a product space".into())),
    }
}

impl BundleSpec {
    /// O(m) relative twist on a projective bundle: m times the xi class.
    pub fn relative_twist(total: &Space, m: i64) -> Result<BundleSpec, CharError> {
        match &total.kind {
            SpaceKind::ProjBundle(..) => {
                let xi = CohClass::generator(&total.ring, total.ring.ngens() - 1);
                total.line_bundle(xi.scale(&BigRational::from_integer(m.into())))
            }
            _ => Err(CharError::Catalog("relative twist needs a bundle".into())),
        }
    }
}
