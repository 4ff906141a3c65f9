//! Finite verifications of the symmetric-product identities: the doubled
//! elementary-symmetric functions, Betti numbers of symmetric products of
//! wedges of circles (torus skeleta), and surjectivity of the cohomology
//! restriction to the two Lagrangian tori.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::snf::{determinant, integer_snf, ZMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("sigma_doubling expects k >= 1")]
    BadK,
    #[error("sym_wedge_betti expects m, r >= 1")]
    BadBettiArgs,
    #[error("check_i1_surjectivity expects n >= 2")]
    BadN,
    #[error("odd-index doubled symmetric function sigma_{0} is nonzero")]
    OddSigmaNonzero(usize),
    #[error("doubled symmetric function has an odd power of a root variable")]
    OddPower,
}

/// Multivariate polynomial with integer coefficients; key = exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    pub terms: std::collections::BTreeMap<Vec<u32>, i64>,
    pub vars: usize,
}

impl SymPoly {
    pub fn zero(vars: usize) -> SymPoly {
        SymPoly {
            terms: Default::default(),
            vars,
        }
    }

    pub fn one(vars: usize) -> SymPoly {
        let mut p = SymPoly::zero(vars);
        p.terms.insert(vec![0; vars], 1);
        p
    }

    pub fn variable(vars: usize, i: usize, coeff: i64) -> SymPoly {
        let mut p = SymPoly::zero(vars);
        let mut exp = vec![0; vars];
        exp[i] = 1;
        p.terms.insert(exp, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert(0);
            *entry += c;
            if *entry == 0 {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn mul(&self, other: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.terms.entry(exp).or_insert(0) += ca * cb;
            }
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }

    pub fn neg(&self) -> SymPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }
}

/// Elementary symmetric functions sigma_1..sigma_deg of the given elements,
/// by the Vieta recurrence.
fn elementary_symmetric(elements: &[SymPoly], vars: usize) -> Vec<SymPoly> {
    let mut e: Vec<SymPoly> = vec![SymPoly::zero(vars); elements.len() + 1];
    e[0] = SymPoly::one(vars);
    for (idx, x) in elements.iter().enumerate() {
        for j in (1..=idx + 1).rev() {
            let bump = e[j - 1].mul(x);
            e[j] = e[j].add(&bump);
        }
    }
    e.remove(0);
    e
}

/// sigma_j of the doubled multiset {sqrt(r_1), -sqrt(r_1), ...,
/// sqrt(r_k), -sqrt(r_k)} for j = 1..2k, expressed in the r variables.
/// Odd entries are identically zero and entry 2m equals
/// (-1)^m sigma_m(r_1..r_k); both facts are recomputed, not assumed.
pub fn sigma_doubling(k: usize) -> Result<Vec<SymPoly>, CheckError> {
    if k == 0 {
        return Err(CheckError::BadK);
    }
    // work with s_i = sqrt(r_i); the doubled multiset is {s_i, -s_i}
    let mut elements = Vec::with_capacity(2 * k);
    for i in 0..k {
        elements.push(SymPoly::variable(k, i, 1));
        elements.push(SymPoly::variable(k, i, -1));
    }
    let sigma_s = elementary_symmetric(&elements, k);
    let mut out = Vec::with_capacity(2 * k);
    for (j, poly) in sigma_s.iter().enumerate() {
        if (j + 1) % 2 == 1 {
            if !poly.is_zero() {
                return Err(CheckError::OddSigmaNonzero(j + 1));
            }
            out.push(SymPoly::zero(k));
            continue;
        }
        // substitute s_i^2 = r_i: every exponent must be even
        let mut converted = SymPoly::zero(k);
        for (exp, &c) in &poly.terms {
            if exp.iter().any(|e| e % 2 != 0) {
                return Err(CheckError::OddPower);
            }
            let half: Vec<u32> = exp.iter().map(|e| e / 2).collect();
            *converted.terms.entry(half).or_insert(0) += c;
        }
        converted.terms.retain(|_, c| *c != 0);
        out.push(converted);
    }
    Ok(out)
}

/// (-1)^m sigma_m(r_1..r_k), the expected value of the 2m-th doubled
/// function.
pub fn expected_even_sigma(k: usize, m: usize) -> SymPoly {
    let elements: Vec<SymPoly> = (0..k).map(|i| SymPoly::variable(k, i, 1)).collect();
    let sigmas = elementary_symmetric(&elements, k);
    let base = if m == 0 {
        SymPoly::one(k)
    } else {
        sigmas[m - 1].clone()
    };
    if m % 2 == 1 {
        base.neg()
    } else {
        base
    }
}

/// Betti numbers of Sym^r of a wedge of m circles, computed from the
/// cellular chain complex of the r-skeleton of the m-torus: cells are the
/// subsets of the m circle factors, and the product boundary formula is
/// evaluated (each circle has boundary zero, so the differentials vanish
/// and homology equals the cell counts).
pub fn sym_wedge_betti(m: usize, r: usize) -> Result<Vec<usize>, CheckError> {
    if m == 0 || r == 0 {
        return Err(CheckError::BadBettiArgs);
    }
    let top = r.min(m);
    // cells per dimension
    let cells: Vec<Vec<Vec<usize>>> = (0..=top)
        .map(|j| (0..m).combinations(j).collect())
        .collect();
    // boundary matrices out of the S^1 factors: d(edge) = v - v = 0
    let circle_edge_boundary: i64 = 1 - 1;
    let mut betti = Vec::with_capacity(top + 1);
    let mut rank_in = 0usize; // rank of the differential into dimension j
    for j in (0..=top).rev() {
        let rows = if j == 0 { 0 } else { cells[j - 1].len() };
        let mut dj = ZMatrix::zero(rows, cells[j].len());
        if j > 0 {
            for (c, cell) in cells[j].iter().enumerate() {
                for drop in 0..cell.len() {
                    let face: Vec<usize> = cell
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    let r_idx = cells[j - 1].iter().position(|f| *f == face).expect("face");
                    let sign = if drop % 2 == 0 { 1 } else { -1 };
                    let v = dj.get(r_idx, c) + sign * circle_edge_boundary;
                    dj.set(r_idx, c, v);
                }
            }
        }
        let rank_out = integer_snf(&dj)
            .iter()
            .filter(|f| !f.is_zero())
            .count();
        betti.push(cells[j].len() - rank_out - rank_in);
        rank_in = rank_out;
    }
    betti.reverse();
    Ok(betti)
}

/// Surjectivity of the cohomology restriction from the (n-1)-skeleton model
/// of Sym^{n-1}(2n-punctured sphere) to the disjoint union of the two
/// (n-1)-tori. The beta torus classes expand as nu'_{2i-1} + nu'_{2i} and
/// the alpha classes as nu'_{2i} + nu'_{2i+1}; the push-forward on each
/// exterior degree must map generators to part of a basis, i.e. have all
/// Smith invariant factors equal to one.
pub fn check_i1_surjectivity(n: usize) -> Result<bool, CheckError> {
    if n < 2 {
        return Err(CheckError::BadN);
    }
    let dim = 2 * n - 1;
    let cols = n - 1;
    // columns of the two inclusion matrices in the nu' basis (0-based rows)
    let beta_col = |i: usize| -> Vec<i64> {
        let mut v = vec![0i64; dim];
        v[2 * i] = 1;
        v[2 * i + 1] = 1;
        v
    };
    let alpha_col = |i: usize| -> Vec<i64> {
        let mut v = vec![0i64; dim];
        v[2 * i + 1] = 1;
        v[2 * i + 2] = 1;
        v
    };
    for k in 1..=n - 1 {
        let row_sets: Vec<Vec<usize>> = (0..dim).combinations(k).collect();
        let col_sets: Vec<Vec<usize>> = (0..cols).combinations(k).collect();
        let mut m = ZMatrix::zero(row_sets.len(), 2 * col_sets.len());
        for (half, col_of) in [(0usize, &beta_col as &dyn Fn(usize) -> Vec<i64>), (1, &alpha_col)]
        {
            for (ci, cset) in col_sets.iter().enumerate() {
                // minor determinants of the k chosen columns
                let chosen: Vec<Vec<i64>> = cset.iter().map(|&i| col_of(i)).collect();
                for (ri, rset) in row_sets.iter().enumerate() {
                    let mut minor = ZMatrix::zero(k, k);
                    for (a, &row) in rset.iter().enumerate() {
                        for (b, col) in chosen.iter().enumerate() {
                            minor.set(a, b, BigInt::from(col[row]));
                        }
                    }
                    m.set(ri, half * col_sets.len() + ci, determinant(&minor));
                }
            }
        }
        let factors = integer_snf(&m);
        let units = factors.iter().filter(|f| f.abs().is_one()).count();
        if units != 2 * col_sets.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_doubling_k1() {
        let sigmas = sigma_doubling(1).unwrap();
        assert!(sigmas[0].is_zero(), "sigma_1 = 0");
        // sigma_2 = -r_1
        assert_eq!(sigmas[1], SymPoly::variable(1, 0, -1));
    }

    #[test]
    fn sigma_doubling_k2_top() {
        let sigmas = sigma_doubling(2).unwrap();
        // sigma_4 = r_1 r_2
        let r1r2 = SymPoly::variable(2, 0, 1).mul(&SymPoly::variable(2, 1, 1));
        assert_eq!(sigmas[3], r1r2);
        assert_eq!(sigmas[3], expected_even_sigma(2, 2));
    }

    #[test]
    fn sigma_doubling_matches_expected_through_k5() {
        for k in 1..=5 {
            let sigmas = sigma_doubling(k).unwrap();
            for m in 1..=k {
                assert_eq!(
                    sigmas[2 * m - 1],
                    expected_even_sigma(k, m),
                    "k = {k}, m = {m}"
                );
            }
        }
    }

    #[test]
    fn sigma_doubling_independent_of_variable_order() {
        // symmetry: swapping r_1 and r_2 fixes every sigma
        let sigmas = sigma_doubling(3).unwrap();
        for s in &sigmas {
            let swapped: std::collections::BTreeMap<Vec<u32>, i64> = s
                .terms
                .iter()
                .map(|(e, &c)| {
                    let mut e2 = e.clone();
                    e2.swap(0, 1);
                    (e2, c)
                })
                .collect();
            assert_eq!(swapped, s.terms);
        }
    }

    #[test]
    fn betti_numbers_of_skeleta() {
        assert_eq!(sym_wedge_betti(5, 2).unwrap(), vec![1, 5, 10]);
        assert_eq!(sym_wedge_betti(3, 3).unwrap(), vec![1, 3, 3, 1]);
        assert_eq!(sym_wedge_betti(1, 1).unwrap(), vec![1, 1]);
        let b = sym_wedge_betti(9, 4).unwrap();
        let total: usize = b.iter().sum();
        let binom: usize = (0..=4).map(|k| binomial(9, k)).sum();
        assert_eq!(total, binom);
    }

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut acc = 1usize;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn surjectivity_small_cases() {
        // n = 2: columns (1,1,0) and (0,1,1) are part of a basis of Z^3
        assert!(check_i1_surjectivity(2).unwrap());
        assert!(check_i1_surjectivity(3).unwrap());
        assert!(check_i1_surjectivity(4).unwrap());
        assert_eq!(check_i1_surjectivity(1), Err(CheckError::BadN));
    }
}
