//! Polynomials over GF(2) in one variable `q`, matrices of them, and rank
//! over the fraction field F2(q).
//!
//! Rank uses fraction-free (Bareiss) elimination, so every intermediate
//! value stays in F2\[q\]. A cheap probabilistic cross-check evaluates the
//! matrix at points of GF(2^16) and takes ranks there; agreement is asserted
//! in the test suite.

use once_cell::sync::Lazy;

/// Polynomial in `q` with GF(2) coefficients, bit-packed little-endian.
/// The highest word always carries the leading 1 (no trailing zero blocks).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Poly {
    words: Vec<u64>,
}

impl std::fmt::Debug for F2Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl std::fmt::Display for F2Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for d in (0..=self.degree().unwrap()).rev() {
            if self.coeff(d) {
                if !first {
                    write!(f, "+")?;
                }
                match d {
                    0 => write!(f, "1")?,
                    1 => write!(f, "q")?,
                    _ => write!(f, "q^{d}")?,
                }
                first = false;
            }
        }
        Ok(())
    }
}

impl F2Poly {
    pub fn zero() -> Self {
        F2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        F2Poly { words: vec![1] }
    }

    /// The monomial `q`.
    pub fn q() -> Self {
        F2Poly { words: vec![2] }
    }

    pub fn from_coeffs(coeffs: &[bool]) -> Self {
        let mut p = F2Poly::zero();
        for (d, &c) in coeffs.iter().enumerate() {
            if c {
                p.set_coeff(d);
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + (63 - last.leading_zeros() as usize))
    }

    pub fn coeff(&self, d: usize) -> bool {
        self.words
            .get(d / 64)
            .is_some_and(|w| w >> (d % 64) & 1 == 1)
    }

    fn set_coeff(&mut self, d: usize) {
        if self.words.len() <= d / 64 {
            self.words.resize(d / 64 + 1, 0);
        }
        self.words[d / 64] ^= 1 << (d % 64);
        self.trim();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn add(&self, other: &F2Poly) -> F2Poly {
        let mut words = vec![0u64; self.words.len().max(other.words.len())];
        for (i, w) in self.words.iter().enumerate() {
            words[i] ^= w;
        }
        for (i, w) in other.words.iter().enumerate() {
            words[i] ^= w;
        }
        let mut p = F2Poly { words };
        p.trim();
        p
    }

    pub fn shl(&self, k: usize) -> F2Poly {
        if self.is_zero() {
            return F2Poly::zero();
        }
        let (blocks, bits) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + blocks + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + blocks] |= w << bits;
            if bits > 0 {
                words[i + blocks + 1] |= w >> (64 - bits);
            }
        }
        let mut p = F2Poly { words };
        p.trim();
        p
    }

    pub fn mul(&self, other: &F2Poly) -> F2Poly {
        if self.is_zero() || other.is_zero() {
            return F2Poly::zero();
        }
        let mut acc = F2Poly::zero();
        for (i, &w) in self.words.iter().enumerate() {
            let mut masked = w;
            while masked != 0 {
                let bit = masked.trailing_zeros() as usize;
                acc = acc.add(&other.shl(i * 64 + bit));
                masked &= masked - 1;
            }
        }
        acc
    }

    /// Quotient and remainder of polynomial division.
    pub fn divrem(&self, divisor: &F2Poly) -> (F2Poly, F2Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quo = F2Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quo.set_coeff(shift);
            rem = rem.add(&divisor.shl(shift));
        }
        (quo, rem)
    }

    /// Exact division; panics if the division leaves a remainder, which
    /// would indicate a broken fraction-free elimination step.
    pub fn exact_div(&self, divisor: &F2Poly) -> F2Poly {
        let (q, r) = self.divrem(divisor);
        assert!(r.is_zero(), "non-exact division in fraction-free step");
        q
    }

    /// Evaluate at a point of GF(2^16) by Horner's rule.
    pub fn eval_gf2e(&self, x: Gf2e) -> Gf2e {
        let Some(deg) = self.degree() else {
            return Gf2e(0);
        };
        let mut acc = Gf2e(0);
        for d in (0..=deg).rev() {
            acc = acc.mul(x);
            if self.coeff(d) {
                acc = acc.add(Gf2e(1));
            }
        }
        acc
    }
}

/// GF(2^16) element; arithmetic modulo a fixed irreducible polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Gf2e(pub u16);

/// Smallest-by-encoding irreducible polynomial of degree 16 over GF(2),
/// found by search at first use and checked by the standard criterion
/// x^(2^16) = x mod f with gcd(x^(2^8) - x, f) = 1.
static GF2E_MODULUS: Lazy<u32> = Lazy::new(|| {
    for low in (1u32..1 << 16).step_by(2) {
        let f = 1 << 16 | low;
        if poly32_is_irreducible_deg16(f) {
            return f;
        }
    }
    unreachable!("no irreducible polynomial of degree 16 found");
});

fn poly32_mulmod(a: u32, b: u32, modulus: u32) -> u32 {
    let mut acc: u64 = 0;
    let (a, b) = (a as u64, b as u64);
    for bit in 0..32 {
        if b >> bit & 1 == 1 {
            acc ^= a << bit;
        }
    }
    // reduce degree-<64 accumulator mod the degree-16 modulus
    for d in (16..64).rev() {
        if acc >> d & 1 == 1 {
            acc ^= (modulus as u64) << (d - 16);
        }
    }
    acc as u32
}

fn poly32_powmod_x(exp_log2: u32, modulus: u32) -> u32 {
    // computes x^(2^exp_log2) mod modulus by repeated squaring
    let mut acc = 2u32; // the polynomial x
    for _ in 0..exp_log2 {
        acc = poly32_mulmod(acc, acc, modulus);
    }
    acc
}

fn poly32_gcd(mut a: u32, mut b: u32) -> u32 {
    while a != 0 && b != 0 {
        let da = 31 - a.leading_zeros();
        let db = 31 - b.leading_zeros();
        if da < db {
            std::mem::swap(&mut a, &mut b);
        } else {
            a ^= b << (da - db);
        }
    }
    a | b
}

fn poly32_is_irreducible_deg16(f: u32) -> bool {
    // x^(2^16) == x (mod f)
    if poly32_powmod_x(16, f) != 2 {
        return false;
    }
    // gcd(x^(2^8) - x, f) == 1
    let x256 = poly32_powmod_x(8, f);
    poly32_gcd(x256 ^ 2, f) == 1
}

impl Gf2e {
    pub fn add(self, other: Gf2e) -> Gf2e {
        Gf2e(self.0 ^ other.0)
    }

    pub fn mul(self, other: Gf2e) -> Gf2e {
        Gf2e(poly32_mulmod(self.0 as u32, other.0 as u32, *GF2E_MODULUS) as u16)
    }

    pub fn inv(self) -> Gf2e {
        assert!(self.0 != 0, "inverse of zero in GF(2^16)");
        // x^(2^16 - 2)
        let mut acc = Gf2e(1);
        let mut base = self;
        let mut e: u32 = (1 << 16) - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }
}

/// Matrix with entries in F2\[q\].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<F2Poly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![F2Poly::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F2Poly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: F2Poly) {
        self.entries[r * self.cols + c] = p;
    }

    pub fn add_assign(&mut self, r: usize, c: usize, p: &F2Poly) {
        let cur = self.get(r, c).add(p);
        self.set(r, c, cur);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(F2Poly::is_zero)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = PolyMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    out.add_assign(r, c, &a.mul(b));
                }
            }
        }
        out
    }

    /// Rank over the fraction field F2(q) by fraction-free elimination.
    ///
    /// Pivot choice is deterministic: among candidate rows for the lowest
    /// unprocessed column, take the entry of least degree, then least row
    /// index, which keeps intermediate degrees down.
    pub fn rank_over_fraction_field(&self) -> usize {
        let mut a = self.clone();
        let mut prev = F2Poly::one();
        let mut rank = 0;
        let mut row_used = vec![false; a.rows];
        for col in 0..a.cols {
            let pivot_row = (0..a.rows)
                .filter(|&r| !row_used[r] && !a.get(r, col).is_zero())
                .min_by_key(|&r| (a.get(r, col).degree().unwrap(), r));
            let Some(p) = pivot_row else { continue };
            row_used[p] = true;
            let pivot = a.get(p, col).clone();
            for r in 0..a.rows {
                if row_used[r] || r == p {
                    continue;
                }
                let lead = a.get(r, col).clone();
                for c in col..a.cols {
                    // over GF(2), a*p + l*top == a*p - l*top
                    let v = a
                        .get(r, c)
                        .mul(&pivot)
                        .add(&lead.mul(a.get(p, c)))
                        .exact_div(&prev);
                    a.set(r, c, v);
                }
            }
            prev = pivot;
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    /// Rank of the matrix evaluated at a point of GF(2^16).
    pub fn rank_at_point(&self, x: Gf2e) -> usize {
        let mut m: Vec<Vec<Gf2e>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).eval_gf2e(x)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| m[r][col].0 != 0) else {
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][col].inv();
            for r in 0..self.rows {
                if r != rank && m[r][col].0 != 0 {
                    let factor = m[r][col].mul(inv);
                    for c in col..self.cols {
                        let sub = factor.mul(m[rank][c]);
                        m[r][c] = m[r][c].add(sub);
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}
