//! Exact integer matrices: Smith normal form, column echelon form with
//! transform, integer solving and kernels. Arbitrary-precision entries
//! throughout; pivoting picks the smallest nonzero absolute value so entry
//! growth stays tame on the incidence-style matrices this crate produces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix over the integers.
#[derive(Clone, PartialEq, Eq)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for ZMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ZMatrix({}x{})", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ZMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ZMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        ZMatrix {
            rows,
            cols,
            data: entries.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = ZMatrix::zero(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(src, c) * k + self.get(dst, c);
            self.set(dst, c, v);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, src) * k + self.get(r, dst);
            self.set(r, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }
}

/// Smith normal form data: the invariant factors and the left transform,
/// so that `left * m * right = diag(factors)` for some unimodular right
/// transform (not retained).
pub struct SnfResult {
    pub factors: Vec<BigInt>,
    pub left: ZMatrix,
}

/// Invariant factors d_1 | d_2 | ... of an integer matrix, nonnegative,
/// padded with zeros up to min(rows, cols).
pub fn integer_snf(m: &ZMatrix) -> Vec<BigInt> {
    snf_with_left_transform(m).factors
}

/// Quotient rounded to the nearest integer, so remainders have magnitude
/// at most half the divisor. Keeps intermediate entries small.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    let two_r = r.abs() * BigInt::from(2);
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

pub fn snf_with_left_transform(m: &ZMatrix) -> SnfResult {
    let mut a = m.clone();
    let mut left = ZMatrix::identity(a.rows);
    let n = a.rows.min(a.cols);
    let mut t = 0;
    'outer: while t < n {
        // smallest nonzero |entry| in the trailing block becomes the pivot;
        // after any reduction pass that leaves a nonzero remainder, re-select
        // (the minimum strictly decreased, so this terminates)
        let mut pivot: Option<(usize, usize)> = None;
        for r in t..a.rows {
            for c in t..a.cols {
                if !a.get(r, c).is_zero()
                    && pivot.is_none_or(|(pr, pc)| a.get(r, c).abs() < a.get(pr, pc).abs())
                {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        a.swap_rows(t, pr);
        left.swap_rows(t, pr);
        a.swap_cols(t, pc);

        let mut remainder_left = false;
        for r in 0..a.rows {
            if r == t || a.get(r, t).is_zero() {
                continue;
            }
            let q = -nearest_quotient(a.get(r, t), a.get(t, t));
            a.add_row_multiple(r, t, &q);
            left.add_row_multiple(r, t, &q);
            if !a.get(r, t).is_zero() {
                remainder_left = true;
            }
        }
        if remainder_left {
            continue 'outer;
        }
        for c in 0..a.cols {
            if c == t || a.get(t, c).is_zero() {
                continue;
            }
            let q = -nearest_quotient(a.get(t, c), a.get(t, t));
            a.add_col_multiple(c, t, &q);
            if !a.get(t, c).is_zero() {
                remainder_left = true;
            }
        }
        if remainder_left {
            continue 'outer;
        }
        // pivot must divide every remaining entry for the divisibility chain
        for r in t + 1..a.rows {
            for c in t + 1..a.cols {
                if !(a.get(r, c) % a.get(t, t)).is_zero() {
                    a.add_row_multiple(t, r, &BigInt::one());
                    left.add_row_multiple(t, r, &BigInt::one());
                    continue 'outer;
                }
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    let mut factors: Vec<BigInt> = (0..n).map(|i| a.get(i, i).abs()).collect();
    factors.resize(n, BigInt::zero());
    SnfResult { factors, left }
}

/// Column echelon form: returns `(h, v, pivots)` with `m * v = h`,
/// `v` unimodular, and `h` in column echelon form. `pivots[k]` is the row
/// of the leading entry of column `k`; columns past the pivots are zero.
pub struct ColumnEchelon {
    pub h: ZMatrix,
    pub v: ZMatrix,
    pub pivots: Vec<usize>,
}

pub fn column_echelon(m: &ZMatrix) -> ColumnEchelon {
    let mut h = m.clone();
    let mut v = ZMatrix::identity(m.cols);
    let mut pivots = Vec::new();
    let mut next_col = 0;
    for row in 0..h.rows {
        if next_col == h.cols {
            break;
        }
        loop {
            let mut pivot: Option<usize> = None;
            for c in next_col..h.cols {
                if !h.get(row, c).is_zero()
                    && pivot.is_none_or(|p| h.get(row, c).abs() < h.get(row, p).abs())
                {
                    pivot = Some(c);
                }
            }
            let Some(p) = pivot else { break };
            h.swap_cols(next_col, p);
            v.swap_cols(next_col, p);
            let mut reduced = true;
            for c in next_col + 1..h.cols {
                if h.get(row, c).is_zero() {
                    continue;
                }
                let q = -(h.get(row, c) / h.get(row, next_col));
                h.add_col_multiple(c, next_col, &q);
                v.add_col_multiple(c, next_col, &q);
                if !h.get(row, c).is_zero() {
                    reduced = false;
                }
            }
            if reduced {
                pivots.push(row);
                next_col += 1;
                break;
            }
        }
    }
    ColumnEchelon { h, v, pivots }
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the integer kernel of the original matrix.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.v.cols())
            .map(|c| self.v.column(c))
            .collect()
    }

    /// One integer solution of `m x = rhs`, or None when `rhs` is not in the
    /// integer column span.
    pub fn solve(&self, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(rhs.len(), self.h.rows());
        let mut residue: Vec<BigInt> = rhs.to_vec();
        let mut y = vec![BigInt::zero(); self.h.cols()];
        for (k, &prow) in self.pivots.iter().enumerate() {
            let pivot = self.h.get(prow, k);
            let (q, r) = residue[prow].div_rem(pivot);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for row in 0..self.h.rows() {
                    let v = &residue[row] - self.h.get(row, k) * &q;
                    residue[row] = v;
                }
            }
            y[k] = q;
        }
        if residue.iter().any(|v| !v.is_zero()) {
            return None;
        }
        // map back through the column transform
        let mut x = vec![BigInt::zero(); self.v.rows()];
        for (k, yk) in y.iter().enumerate() {
            if yk.is_zero() {
                continue;
            }
            for (r, xr) in x.iter_mut().enumerate() {
                *xr += self.v.get(r, k) * yk;
            }
        }
        Some(x)
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &ZMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let v = (a.get(r, c) * a.get(k, k) - a.get(r, k) * a.get(k, c)) / &prev;
                a.set(r, c, v);
            }
            a.set(r, k, BigInt::zero());
        }
        prev = a.get(k, k).clone();
    }
    a.get(n - 1, n - 1) * sign
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn snf_of_diag_2_3() {
        let m = ZMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        assert_eq!(integer_snf(&m), vec![bi(1), bi(6)]);
    }

    #[test]
    fn snf_of_zero_matrix() {
        let m = ZMatrix::zero(2, 2);
        assert_eq!(integer_snf(&m), vec![bi(0), bi(0)]);
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = ZMatrix::from_i64(3, 3, &[2, 4, 4, -6, 6, 12, 10, 4, 16]);
        let f = integer_snf(&m);
        for w in f.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "chain broken: {f:?}");
            }
        }
    }

    #[test]
    fn column_echelon_solves_and_kernels() {
        let m = ZMatrix::from_i64(2, 3, &[2, 1, 0, 0, 1, 1]);
        let ech = column_echelon(&m);
        assert_eq!(ech.rank(), 2);
        // 2x + y = 1, y + z = 1 has the integer solution (0, 1, 0)
        let x = ech.solve(&[bi(1), bi(1)]).unwrap();
        let apply = |x: &[BigInt]| -> Vec<BigInt> {
            (0..2)
                .map(|r| (0..3).map(|c| m.get(r, c) * &x[c]).sum())
                .collect()
        };
        assert_eq!(apply(&x), vec![bi(1), bi(1)]);
        for k in ech.kernel_basis() {
            assert!(apply(&k).iter().all(|v| v.is_zero()));
        }
        assert_eq!(ech.kernel_basis().len(), 1);
    }

    #[test]
    fn solve_detects_non_lattice_rhs() {
        let m = ZMatrix::from_i64(1, 1, &[2]);
        let ech = column_echelon(&m);
        assert!(ech.solve(&[bi(1)]).is_none());
        assert_eq!(ech.solve(&[bi(4)]), Some(vec![bi(2)]));
    }

    #[test]
    fn determinant_matches_cofactor_values() {
        let m = ZMatrix::from_i64(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 10]);
        assert_eq!(determinant(&m), bi(-3));
        let singular = ZMatrix::from_i64(2, 2, &[1, 2, 2, 4]);
        assert_eq!(determinant(&singular), bi(0));
    }
}
