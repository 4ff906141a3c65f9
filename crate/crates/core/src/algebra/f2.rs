//! Dense bit-packed linear algebra over GF(2).
//!
//! Rows are stored as `u64` blocks. Elimination always pivots on the lowest
//! available column index so ranks, kernels and solutions are reproducible
//! across runs.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum F2Error {
    #[error("entry ({row}, {col}) out of bounds for {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("cannot compose {k}-th map ({rows_k}x{cols_k}) with next ({rows_next}x{cols_next})")]
    DimensionMismatch {
        k: usize,
        rows_k: usize,
        cols_k: usize,
        rows_next: usize,
        cols_next: usize,
    },
    #[error("composition d_{k} . d_{next} is nonzero; the input is not a chain complex")]
    NonzeroComposition { k: usize, next: usize },
}

/// A matrix over GF(2), rows bit-packed into `u64` words.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "F2Matrix({}x{})", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", u8::from(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        F2Matrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from the set of positions holding 1. Rejects positions
    /// out of bounds and duplicates.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: &[(usize, usize)],
    ) -> Result<Self, F2Error> {
        let mut m = Self::zero(rows, cols);
        for &(r, c) in entries {
            if r >= rows || c >= cols {
                return Err(F2Error::OutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            if m.get(r, c) {
                return Err(F2Error::DuplicateEntry { row: r, col: c });
            }
            m.set(r, c, true);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.words, dst * self.words);
        for k in 0..self.words {
            let v = self.data[s + k];
            self.data[d + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words {
            self.data.swap(a * self.words + k, b * self.words + k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = F2Matrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    let (s, d) = (c * other.words, r * out.words);
                    for k in 0..other.words {
                        out.data[d + k] ^= other.data[s + k];
                    }
                }
            }
        }
        out
    }

    /// Rank by row elimination, pivoting on the lowest column index first.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..work.cols {
            let Some(p) = (rank..work.rows).find(|&r| work.get(r, col)) else {
                continue;
            };
            work.swap_rows(rank, p);
            for r in 0..work.rows {
                if r != rank && work.get(r, col) {
                    work.xor_row_into(rank, r);
                }
            }
            rank += 1;
            if rank == work.rows {
                break;
            }
        }
        rank
    }

    /// Basis of the right kernel, as rows of the returned matrix.
    pub fn kernel_basis(&self) -> Vec<Vec<bool>> {
        // Eliminate on a copy, remembering pivot column per reduced row.
        let mut work = self.clone();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..work.cols {
            let Some(p) = (rank..work.rows).find(|&r| work.get(r, col)) else {
                continue;
            };
            work.swap_rows(rank, p);
            for r in 0..work.rows {
                if r != rank && work.get(r, col) {
                    work.xor_row_into(rank, r);
                }
            }
            pivot_cols.push(col);
            rank += 1;
            if rank == work.rows {
                break;
            }
        }
        let is_pivot = {
            let mut v = vec![false; work.cols];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..work.cols {
            if is_pivot[free] {
                continue;
            }
            let mut vec = vec![false; work.cols];
            vec[free] = true;
            for (i, &pc) in pivot_cols.iter().enumerate() {
                if work.get(i, free) {
                    vec[pc] = true;
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// One solution of `self * x = rhs`, or `None` when inconsistent.
    /// Free variables are set to zero, so the answer is deterministic.
    pub fn solve(&self, rhs: &[bool]) -> Option<Vec<bool>> {
        assert_eq!(rhs.len(), self.rows, "rhs length mismatch");
        let mut work = self.clone();
        let mut b: Vec<bool> = rhs.to_vec();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..work.cols {
            let Some(p) = (rank..work.rows).find(|&r| work.get(r, col)) else {
                continue;
            };
            work.swap_rows(rank, p);
            b.swap(rank, p);
            for r in 0..work.rows {
                if r != rank && work.get(r, col) {
                    work.xor_row_into(rank, r);
                    b[r] ^= b[rank];
                }
            }
            pivot_cols.push(col);
            rank += 1;
            if rank == work.rows {
                break;
            }
        }
        if (rank..work.rows).any(|r| b[r]) {
            return None;
        }
        let mut x = vec![false; work.cols];
        for (i, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = b[i];
        }
        Some(x)
    }

    pub fn apply(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![false; self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = 0u64;
            for (k, w) in self.row(r).iter().enumerate() {
                let mut masked = *w;
                while masked != 0 {
                    let bit = masked.trailing_zeros() as usize;
                    if x[k * 64 + bit] {
                        acc ^= 1;
                    }
                    masked &= masked - 1;
                }
            }
            *o = acc == 1;
        }
        out
    }
}

/// Homology ranks of a chain complex `d_1, d_2, ..., d_m` where `d_k` maps
/// `C_k` (columns) to `C_{k-1}` (rows). Returns the ranks of
/// `H_0, H_1, ..., H_m`.
pub fn f2_homology_ranks(differentials: &[F2Matrix]) -> Result<Vec<usize>, F2Error> {
    if differentials.is_empty() {
        return Ok(Vec::new());
    }
    for (k, pair) in differentials.windows(2).enumerate() {
        if pair[0].cols() != pair[1].rows() {
            return Err(F2Error::DimensionMismatch {
                k,
                rows_k: pair[0].rows(),
                cols_k: pair[0].cols(),
                rows_next: pair[1].rows(),
                cols_next: pair[1].cols(),
            });
        }
        if !pair[0].mul(&pair[1]).is_zero() {
            return Err(F2Error::NonzeroComposition { k, next: k + 1 });
        }
    }
    let ranks: Vec<usize> = differentials.iter().map(F2Matrix::rank).collect();
    let mut out = Vec::with_capacity(differentials.len() + 1);
    out.push(differentials[0].rows() - ranks[0]);
    for k in 0..differentials.len() {
        let dim = differentials[k].cols();
        let ker = dim - ranks[k];
        let im_next = if k + 1 < ranks.len() { ranks[k + 1] } else { 0 };
        out.push(ker - im_next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differential_has_full_homology() {
        let ranks = f2_homology_ranks(&[F2Matrix::zero(3, 3)]).unwrap();
        assert_eq!(ranks, vec![3, 3]);
    }

    #[test]
    fn identity_differential_kills_homology() {
        let ranks = f2_homology_ranks(&[F2Matrix::identity(3)]).unwrap();
        assert_eq!(ranks, vec![0, 0]);
    }

    #[test]
    fn rank_one_square_matrix() {
        let d1 = F2Matrix::from_entries(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let d2 = F2Matrix::zero(2, 1);
        let ranks = f2_homology_ranks(&[d1.clone(), d2]).unwrap();
        assert_eq!(d1.rank(), 1);
        // ker d1 has rank 1 and nothing maps in, so H_1 = 1.
        assert_eq!(ranks[1], 1);
    }

    #[test]
    fn rejects_nonzero_composition() {
        let d1 = F2Matrix::identity(2);
        let d2 = F2Matrix::identity(2);
        assert_eq!(
            f2_homology_ranks(&[d1, d2]),
            Err(F2Error::NonzeroComposition { k: 0, next: 1 })
        );
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let d1 = F2Matrix::zero(2, 3);
        let d2 = F2Matrix::zero(2, 2);
        assert!(matches!(
            f2_homology_ranks(&[d1, d2]),
            Err(F2Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn from_entries_rejects_bad_input() {
        assert!(matches!(
            F2Matrix::from_entries(2, 2, &[(2, 0)]),
            Err(F2Error::OutOfBounds { .. })
        ));
        assert!(matches!(
            F2Matrix::from_entries(2, 2, &[(0, 0), (0, 0)]),
            Err(F2Error::DuplicateEntry { .. })
        ));
    }

    #[test]
    fn kernel_vectors_are_killed() {
        let m = F2Matrix::from_entries(3, 5, &[(0, 0), (0, 2), (1, 1), (1, 2), (2, 3)]).unwrap();
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 5 - m.rank());
        for v in &basis {
            assert!(m.apply(v).iter().all(|&b| !b));
        }
    }

    #[test]
    fn solve_finds_consistent_solutions() {
        let m = F2Matrix::from_entries(3, 3, &[(0, 0), (0, 1), (1, 1), (2, 2)]).unwrap();
        let rhs = vec![true, true, false];
        let x = m.solve(&rhs).unwrap();
        assert_eq!(m.apply(&x), rhs);
        // x + y = 1, y = 1, z = 0 but also row x+y=0 would be inconsistent:
        let bad = F2Matrix::from_entries(2, 1, &[(0, 0), (1, 0)]).unwrap();
        assert!(bad.solve(&[true, false]).is_none());
    }
}
