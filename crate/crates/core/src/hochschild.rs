//! Hochschild homology of polynomial algebras through the Koszul resolution,
//! at a graded truncation, with exact rational ranks throughout.
//!
//! For A = Q[x_1..x_n] and B = A (x) A, the Koszul complex on the regular
//! sequence x_j (x) 1 - 1 (x) x_j resolves A over B. Base changing along the
//! multiplication map B -> A and taking homology gives HH_*(A); the HKR
//! statement pins its graded dimensions to those of the exterior powers of
//! the module of differentials, with every exterior generator in internal
//! degree 1.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::operators::mat::Mat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HochschildError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
}

type Monomial = Vec<u32>;

/// A degree-1 polynomial used as a Koszul differential coefficient.
#[derive(Debug, Clone)]
struct LinearPoly {
    terms: Vec<(usize, BigRational)>, // variable index -> coefficient
}

/// A chain complex of graded free modules with degree-preserving exact
/// differentials, stored per internal degree.
#[derive(Debug)]
pub struct GradedComplex {
    /// terms[i][m] = dimension of the i-th chain module in internal degree m.
    pub terms: Vec<Vec<usize>>,
    /// differentials[i][m]: matrix of d_i: K_i -> K_{i-1} in degree m
    /// (rows index K_{i-1}, columns K_i). differentials[0] is empty.
    pub differentials: Vec<Vec<Mat<BigRational>>>,
    pub degree_bound: u32,
}

/// Graded dimension table of one homology level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    pub level: usize,
    pub dims: Vec<usize>,
}

fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fill_monomials(nvars, degree, 0, &mut current, &mut out);
    out
}

fn fill_monomials(
    nvars: usize,
    remaining: u32,
    pos: usize,
    current: &mut Monomial,
    out: &mut Vec<Monomial>,
) {
    if pos + 1 == nvars {
        current[pos] = remaining;
        out.push(current.clone());
        current[pos] = 0;
        return;
    }
    for k in 0..=remaining {
        current[pos] = k;
        fill_monomials(nvars, remaining - k, pos + 1, current, out);
    }
    current[pos] = 0;
}

fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fill_subsets(n, size, 0, &mut current, &mut out);
    out
}

fn fill_subsets(
    n: usize,
    size: usize,
    start: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == size {
        out.push(current.clone());
        return;
    }
    for j in start..n {
        current.push(j);
        fill_subsets(n, size, j + 1, current, out);
        current.pop();
    }
}

/// Koszul complex on `coefficients[j]` (degree-1 polynomials in `nvars`
/// variables), truncated at internal degree `degree_bound`; exterior
/// generators carry internal degree 1.
fn build_koszul(
    nvars: usize,
    coefficients: &[LinearPoly],
    degree_bound: u32,
) -> GradedComplex {
    let n = coefficients.len();
    let mut terms: Vec<Vec<usize>> = Vec::with_capacity(n + 1);
    let mut differentials: Vec<Vec<Mat<BigRational>>> = Vec::with_capacity(n + 1);

    // Basis indices for (subset, monomial) pairs, per level and degree.
    let mono_tables: Vec<Vec<Monomial>> = (0..=degree_bound)
        .map(|d| monomials_of_degree(nvars, d))
        .collect();
    let mono_index = |mono: &Monomial| -> usize {
        let d: u32 = mono.iter().sum();
        mono_tables[d as usize]
            .binary_search(mono)
            .expect("monomial table is sorted and complete")
    };

    for level in 0..=n {
        let subsets = subsets_of_size(n, level);
        let dims: Vec<usize> = (0..=degree_bound)
            .map(|m| {
                if (m as usize) < level {
                    0
                } else {
                    subsets.len() * mono_tables[m as usize - level].len()
                }
            })
            .collect();
        terms.push(dims);
        if level == 0 {
            differentials.push(Vec::new());
            continue;
        }
        let prev_subsets = subsets_of_size(n, level - 1);
        let prev_index = |s: &[usize]| -> usize {
            prev_subsets
                .binary_search_by(|probe| probe.as_slice().cmp(s))
                .expect("subset table is sorted")
        };
        let mut per_degree = Vec::with_capacity(degree_bound as usize + 1);
        for m in 0..=degree_bound {
            let m = m as usize;
            let rows = if m >= level - 1 {
                prev_subsets.len() * mono_tables[m - (level - 1)].len()
            } else {
                0
            };
            let cols = if m >= level {
                subsets.len() * mono_tables[m - level].len()
            } else {
                0
            };
            let mut mat: Mat<BigRational> = Mat::zeros(rows, cols);
            if cols == 0 || rows == 0 {
                per_degree.push(mat);
                continue;
            }
            let col_monos = &mono_tables[m - level];
            let row_monos_len = mono_tables[m - (level - 1)].len();
            for (si, subset) in subsets.iter().enumerate() {
                for (mi, mono) in col_monos.iter().enumerate() {
                    let col = si * col_monos.len() + mi;
                    for (t, &j) in subset.iter().enumerate() {
                        let sign = if t % 2 == 0 {
                            BigRational::one()
                        } else {
                            -BigRational::one()
                        };
                        let mut reduced = subset.clone();
                        reduced.remove(t);
                        let ri_subset = prev_index(&reduced);
                        for (var, coeff) in &coefficients[j].terms {
                            if coeff.is_zero() {
                                continue;
                            }
                            let mut target = mono.clone();
                            target[*var] += 1;
                            let row = ri_subset * row_monos_len + mono_index(&target);
                            let entry = mat[(row, col)].clone() + &sign * coeff;
                            mat[(row, col)] = entry;
                        }
                    }
                }
            }
            per_degree.push(mat);
        }
        differentials.push(per_degree);
    }
    GradedComplex {
        terms,
        differentials,
        degree_bound,
    }
}

impl GradedComplex {
    pub fn levels(&self) -> usize {
        self.terms.len()
    }

    /// Exact check that consecutive differentials compose to zero.
    pub fn verify_d_squared(&self) -> bool {
        for level in 2..self.levels() {
            for m in 0..=self.degree_bound as usize {
                let outer = &self.differentials[level - 1][m];
                let inner = &self.differentials[level][m];
                if outer.ncols() != inner.nrows() {
                    // One of the two is an empty placeholder in this degree.
                    if inner.nrows() == 0 || outer.ncols() == 0 {
                        continue;
                    }
                    return false;
                }
                let product = outer.matmul(inner).expect("shapes agree");
                for i in 0..product.nrows() {
                    for j in 0..product.ncols() {
                        if !product[(i, j)].is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Homology dimension at homological level i and internal degree m:
    /// dim K_i - rank d_i - rank d_{i+1}, all ranks exact.
    pub fn homology_dims(&self, level: usize) -> Vec<usize> {
        (0..=self.degree_bound as usize)
            .map(|m| {
                let dim = self.terms[level][m];
                let rank_in = if level + 1 < self.levels() {
                    self.differentials[level + 1][m].rank(None)
                } else {
                    0
                };
                let rank_out = if level >= 1 {
                    self.differentials[level][m].rank(None)
                } else {
                    0
                };
                dim - rank_out - rank_in
            })
            .collect()
    }

    /// Alternating sum of chain dimensions at one internal degree.
    pub fn euler_characteristic(&self, m: usize) -> i64 {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, dims)| {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                sign * dims[m] as i64
            })
            .sum()
    }
}

/// The Koszul resolution of A over B = A (x) A on x_j (x) 1 - 1 (x) x_j,
/// in 2n polynomial variables, truncated at internal degree D.
pub fn koszul_resolution(n: u32, degree_bound: u32) -> Result<GradedComplex, HochschildError> {
    check_params(n, degree_bound)?;
    let n = n as usize;
    let coefficients: Vec<LinearPoly> = (0..n)
        .map(|j| LinearPoly {
            terms: vec![
                (j, BigRational::one()),
                (n + j, -BigRational::one()),
            ],
        })
        .collect();
    Ok(build_koszul(2 * n, &coefficients, degree_bound))
}

/// The same complex base changed along the multiplication map B -> A
/// (both tensor factors map to x_j); the differential coefficients become
/// x_j - x_j, computed rather than assumed.
pub fn hochschild_complex(n: u32, degree_bound: u32) -> Result<GradedComplex, HochschildError> {
    check_params(n, degree_bound)?;
    let n = n as usize;
    let coefficients: Vec<LinearPoly> = (0..n)
        .map(|j| {
            // image of x_j (x) 1 - 1 (x) x_j under both-factors -> x_j
            let mut terms = vec![(j, BigRational::one()), (j, -BigRational::one())];
            // combine duplicate variables
            terms.sort_by_key(|(v, _)| *v);
            let mut combined: Vec<(usize, BigRational)> = Vec::new();
            for (v, c) in terms {
                match combined.last_mut() {
                    Some((lv, lc)) if *lv == v => *lc += c,
                    _ => combined.push((v, c)),
                }
            }
            combined.retain(|(_, c)| !c.is_zero());
            LinearPoly { terms: combined }
        })
        .collect();
    Ok(build_koszul(n, &coefficients, degree_bound))
}

fn check_params(n: u32, degree_bound: u32) -> Result<(), HochschildError> {
    if n < 1 {
        return Err(HochschildError::Parameter("need at least one variable".into()));
    }
    if degree_bound < 1 {
        return Err(HochschildError::Parameter("degree bound must be >= 1".into()));
    }
    Ok(())
}

/// Report of the acyclicity check of the Koszul resolution over B.
#[derive(Debug, Serialize)]
pub struct AcyclicityReport {
    pub n: u32,
    pub degree_bound: u32,
    pub checked_up_to: i64,
    pub d_squared_zero: bool,
    pub positive_homology_vanishes: bool,
    pub h0_matches_polynomial_ring: bool,
    pub h0_dims: Vec<usize>,
}

impl AcyclicityReport {
    pub fn passed(&self) -> bool {
        self.d_squared_zero && self.positive_homology_vanishes && self.h0_matches_polynomial_ring
    }
}

/// Positive homology of the resolution vanishes in internal degrees
/// <= D - n, and degree-0 homology has the graded dimensions of A.
pub fn resolution_acyclicity_check(
    n: u32,
    degree_bound: u32,
) -> Result<AcyclicityReport, HochschildError> {
    let complex = koszul_resolution(n, degree_bound)?;
    let d_squared_zero = complex.verify_d_squared();
    let safe_bound = degree_bound as i64 - n as i64;
    let mut positive_ok = true;
    for level in 1..complex.levels() {
        let dims = complex.homology_dims(level);
        for (m, &dim) in dims.iter().enumerate() {
            if (m as i64) <= safe_bound && dim != 0 {
                positive_ok = false;
            }
        }
    }
    let h0 = complex.homology_dims(0);
    let mut h0_ok = true;
    for (m, &dim) in h0.iter().enumerate() {
        if (m as i64) <= safe_bound {
            let expected = monomials_of_degree(n as usize, m as u32).len();
            if dim != expected {
                h0_ok = false;
            }
        }
    }
    Ok(AcyclicityReport {
        n,
        degree_bound,
        checked_up_to: safe_bound,
        d_squared_zero,
        positive_homology_vanishes: positive_ok,
        h0_matches_polynomial_ring: h0_ok,
        h0_dims: h0,
    })
}

/// Graded dimensions of HH_i for i = 0..n, each as a vector over internal
/// degrees 0..=D.
pub fn hochschild_homology(
    n: u32,
    degree_bound: u32,
) -> Result<Vec<GradedDims>, HochschildError> {
    let complex = hochschild_complex(n, degree_bound)?;
    Ok((0..complex.levels())
        .map(|level| GradedDims {
            level,
            dims: complex.homology_dims(level),
        })
        .collect())
}

/// dim of the HKR prediction: binom(n, i) monomial counts shifted by the
/// internal degree i of dx_{j_1} ... dx_{j_i}.
pub fn omega_model_dim(n: u32, level: usize, internal_degree: usize) -> usize {
    if level > n as usize || internal_degree < level {
        return 0;
    }
    let ext = subsets_of_size(n as usize, level).len();
    ext * monomials_of_degree(n as usize, (internal_degree - level) as u32).len()
}

/// Outcome of the HKR comparison, with the first mismatch when it fails.
#[derive(Debug, Serialize)]
pub struct HkrReport {
    pub n: u32,
    pub degree_bound: u32,
    pub pass: bool,
    pub computed: Vec<GradedDims>,
    pub mismatches: Vec<HkrMismatch>,
}

#[derive(Debug, Serialize)]
pub struct HkrMismatch {
    pub level: usize,
    pub internal_degree: usize,
    pub computed: usize,
    pub expected: usize,
}

pub fn hkr_check(n: u32, degree_bound: u32) -> Result<HkrReport, HochschildError> {
    let computed = hochschild_homology(n, degree_bound)?;
    let mut mismatches = Vec::new();
    for graded in &computed {
        for (m, &dim) in graded.dims.iter().enumerate() {
            let expected = omega_model_dim(n, graded.level, m);
            if dim != expected {
                mismatches.push(HkrMismatch {
                    level: graded.level,
                    internal_degree: m,
                    computed: dim,
                    expected,
                });
            }
        }
    }
    Ok(HkrReport {
        n,
        degree_bound,
        pass: mismatches.is_empty(),
        computed,
        mismatches,
    })
}
