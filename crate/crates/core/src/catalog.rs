//! Textual catalog of spaces, bundles, and supported pushforward maps,
//! shared by the CLI and the C API.

use num_rational::BigRational;

use crate::charclasses::{
    grr_check, grr_check_identity, point, product, proj_bundle, proj_space, twist_line,
    twist_line_product, BundleSpec, CharError, CohClass, GrrReport, Space,
};

/// "pt", "P0".."P6", or products like "P1xP1".
pub fn parse_space(text: &str) -> Result<Space, CharError> {
    let t = text.trim();
    if t == "pt" || t == "point" {
        return Ok(point());
    }
    if let Some((left, right)) = t.split_once('x') {
        let x = parse_space(left)?;
        let y = parse_space(right)?;
        return Ok(product(&x, &y));
    }
    if let Some(n) = t.strip_prefix('P') {
        let n: u32 = n
            .parse()
            .map_err(|_| CharError::Catalog(format!("unknown space `{text}`")))?;
        if n > 6 {
            return Err(CharError::Catalog(
                "projective spaces up to P6 are supported".into(),
            ));
        }
        return Ok(proj_space(n));
    }
    Err(CharError::Catalog(format!("unknown space `{text}`")))
}

/// "O(k)" on P^n, "O(a,b)" on a two-factor product.
pub fn parse_line_bundle(space: &Space, text: &str) -> Result<BundleSpec, CharError> {
    let t = text.trim();
    let inner = t
        .strip_prefix("O(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| CharError::Catalog(format!("unknown bundle `{text}`")))?;
    let parts: Vec<i64> = inner
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CharError::Catalog(format!("bundle twist in `{text}` must be an integer")))?;
    match parts.as_slice() {
        [k] => twist_line(space, *k),
        [a, b] => twist_line_product(space, *a, *b),
        _ => Err(CharError::Catalog("bundles take one or two twists".into())),
    }
}

/// The integer k of a plain "O(k)".
pub fn single_twist(bundle: &str) -> Option<i64> {
    bundle
        .trim()
        .strip_prefix("O(")?
        .strip_suffix(')')?
        .trim()
        .parse()
        .ok()
}

/// A fully assembled pushforward test case: total space, bundle upstairs,
/// and the caller-side K-theory pushforward downstairs. Identity maps push
/// the bundle to itself.
pub struct GrrCase {
    pub total: Space,
    pub bundle: BundleSpec,
    pub pushed: BundleSpec,
    pub identity: bool,
}

impl GrrCase {
    pub fn check(&self) -> Result<GrrReport, CharError> {
        if self.identity {
            grr_check_identity(&self.total, &self.bundle)
        } else {
            grr_check(&self.total, &self.bundle, &self.pushed)
        }
    }
}

/// Supported map syntax: "PnxPm->Pn" (first-factor projection, bundle
/// O(a, b) with b >= 0, pushforward O(a)^(b+1)), "P(O+O(k))->P1"
/// (relative twist O(m), pushforward Sym^m of the dual), or the identity
/// "X->X" (bundle O(a), or O(a, b) on products).
pub fn grr_case_from_map(map: &str, a: i64, b: i64, m: i64) -> Result<GrrCase, CharError> {
    let map = map.trim();
    let Some((total_txt, base_txt)) = map.split_once("->") else {
        return Err(CharError::Catalog(format!("unsupported map `{map}`")));
    };
    if total_txt.trim() == base_txt.trim() {
        let space = parse_space(total_txt)?;
        let bundle = if total_txt.contains('x') {
            twist_line_product(&space, a, b)?
        } else {
            twist_line(&space, a)?
        };
        return Ok(GrrCase {
            total: space,
            pushed: bundle.clone(),
            bundle,
            identity: true,
        });
    }
    if total_txt.starts_with("P(") {
        let k: i64 = total_txt
            .strip_prefix("P(O+O(")
            .and_then(|s| s.strip_suffix("))"))
            .ok_or_else(|| CharError::Catalog(format!("unsupported map `{map}`")))?
            .parse()
            .map_err(|_| CharError::Catalog("twist in P(O+O(k)) must be an integer".into()))?;
        if m < 0 {
            return Err(CharError::Parameter(
                "relative twist pushforward needs m >= 0".into(),
            ));
        }
        let base = proj_space(1);
        let e = base.structure_sheaf().direct_sum(&twist_line(&base, k)?);
        let total = proj_bundle(&base, &e)?;
        let bundle = BundleSpec::relative_twist(&total, m)?;
        // Roots of Sym^m (O + O(k))^dual: -(j k) h for j = 0..m.
        let h = CohClass::generator(&base.ring, 0);
        let roots = (0..=m)
            .map(|j| h.scale(&BigRational::from_integer((-j * k).into())))
            .collect();
        let pushed = BundleSpec::new(roots, Vec::new())?;
        Ok(GrrCase {
            total,
            bundle,
            pushed,
            identity: false,
        })
    } else {
        let (xt, yt) = total_txt
            .split_once('x')
            .ok_or_else(|| CharError::Catalog(format!("unsupported map `{map}`")))?;
        let x = parse_space(xt)?;
        let y = parse_space(yt)?;
        let total = product(&x, &y);
        if b < 0 {
            return Err(CharError::Parameter(
                "product pushforward data requires b >= 0".into(),
            ));
        }
        let bundle = twist_line_product(&total, a, b)?;
        let line = twist_line(&x, a)?;
        let mut pushed = line.clone();
        for _ in 0..b {
            pushed = pushed.direct_sum(&line);
        }
        Ok(GrrCase {
            total,
            bundle,
            pushed,
            identity: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_catalog_spaces() {
        assert_eq!(parse_space("P2").unwrap().dim, 2);
        assert_eq!(parse_space("P1xP1").unwrap().dim, 2);
        assert_eq!(parse_space("pt").unwrap().dim, 0);
        assert!(parse_space("Q3").is_err());
    }

    #[test]
    fn parses_bundles() {
        let p2 = parse_space("P2").unwrap();
        assert_eq!(parse_line_bundle(&p2, "O(3)").unwrap().rank(), 1);
        assert!(parse_line_bundle(&p2, "T(1)").is_err());
        let prod = parse_space("P1xP1").unwrap();
        assert_eq!(parse_line_bundle(&prod, "O(1,2)").unwrap().rank(), 1);
    }

    #[test]
    fn grr_cases_assemble_and_pass() {
        let case = grr_case_from_map("P1xP1->P1", 2, 3, 0).unwrap();
        assert!(case.check().unwrap().equal);
        let case = grr_case_from_map("P(O+O(1))->P1", 0, 0, 2).unwrap();
        assert!(case.check().unwrap().equal);
    }

    #[test]
    fn identity_map_is_trivially_equal() {
        let case = grr_case_from_map("P2->P2", 3, 0, 0).unwrap();
        assert!(case.identity);
        assert!(case.check().unwrap().equal);
    }
}
