//! The edge-jump linear system of a diagram.
//!
//! A 2-chain `a` (one integer per region) has cellular boundary
//! `sum_e (a_{L(e)} - a_{R(e)}) e`, where L/R are the regions on the two
//! sides of the edge. Domains connecting generators solve
//! `a_{L(e)} - a_{R(e)} = gamma_e + n_{c(e)}` where `gamma` is a connecting
//! 1-chain and `n_c` are free per-curve coefficients; periodic domains are
//! the kernel. Everything is exact integer arithmetic (i128).

use super::Diagram;

#[derive(Clone, Debug)]
struct Echelon {
    h: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

/// Column echelon form by unimodular column operations, smallest-pivot-first
/// within each row for entry control.
fn column_echelon_i128(m: &[Vec<i128>]) -> Echelon {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut h: Vec<Vec<i128>> = m.to_vec();
    let mut v: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let col_get = |h: &Vec<Vec<i128>>, r: usize, c: usize| h[r][c];
    let mut pivots = Vec::new();
    let mut next = 0;
    for row in 0..rows {
        if next == cols {
            break;
        }
        loop {
            let mut pivot: Option<usize> = None;
            for c in next..cols {
                let val = col_get(&h, row, c);
                if val != 0 && pivot.is_none_or(|p| val.abs() < col_get(&h, row, p).abs()) {
                    pivot = Some(c);
                }
            }
            let Some(p) = pivot else { break };
            for r in 0..rows {
                h[r].swap(next, p);
            }
            for r in 0..cols {
                v[r].swap(next, p);
            }
            let mut reduced = true;
            for c in next + 1..cols {
                if h[row][c] == 0 {
                    continue;
                }
                let q = h[row][c].checked_div(h[row][next]).expect("div");
                if q != 0 {
                    for r in 0..rows {
                        let sub = h[r][next].checked_mul(q).expect("jump-system overflow");
                        h[r][c] = h[r][c].checked_sub(sub).expect("jump-system overflow");
                    }
                    for r in 0..cols {
                        let sub = v[r][next].checked_mul(q).expect("jump-system overflow");
                        v[r][c] = v[r][c].checked_sub(sub).expect("jump-system overflow");
                    }
                }
                if h[row][c] != 0 {
                    reduced = false;
                }
            }
            if reduced {
                pivots.push(row);
                next += 1;
                break;
            }
        }
    }
    Echelon { h, v, pivots }
}

impl Echelon {
    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn cols(&self) -> usize {
        self.v.len()
    }

    fn kernel_basis(&self) -> Vec<Vec<i128>> {
        (self.rank()..self.cols())
            .map(|c| self.v.iter().map(|row| row[c]).collect())
            .collect()
    }

    fn solve(&self, rhs: &[i128]) -> Option<Vec<i128>> {
        let rows = self.h.len();
        assert_eq!(rhs.len(), rows);
        let mut residue = rhs.to_vec();
        let mut y = vec![0i128; self.cols()];
        for (k, &prow) in self.pivots.iter().enumerate() {
            let pivot = self.h[prow][k];
            if residue[prow] % pivot != 0 {
                return None;
            }
            let q = residue[prow] / pivot;
            if q != 0 {
                for r in 0..rows {
                    residue[r] -= self.h[r][k].checked_mul(q).expect("jump-system overflow");
                }
            }
            y[k] = q;
        }
        if residue.iter().any(|&x| x != 0) {
            return None;
        }
        let mut x = vec![0i128; self.cols()];
        for (k, &yk) in y.iter().enumerate() {
            if yk == 0 {
                continue;
            }
            for (r, xr) in x.iter_mut().enumerate() {
                *xr = xr
                    .checked_add(self.v[r][k].checked_mul(yk).expect("jump-system overflow"))
                    .expect("jump-system overflow");
            }
        }
        Some(x)
    }
}

/// The assembled jump system of a diagram, with the periodic-domain lattice
/// in echelon form ready for bounded translate searches.
pub struct JumpSystem {
    pub num_regions: usize,
    num_curves: usize,
    echelon: Echelon,
    /// Periodic-domain lattice (region coordinates), column-echelonized.
    pub lattice: Vec<Vec<i64>>,
    /// `lattice[i]` has its first nonzero entry at `lattice_pivots[i]`.
    pub lattice_pivots: Vec<usize>,
}

fn jump_matrix(d: &Diagram) -> Vec<Vec<i128>> {
    let regions = d.num_regions();
    let curves = d.curves.len();
    let sides = d.edge_sides();
    let mut m = vec![vec![0i128; regions + curves]; d.num_edges()];
    for e in 0..d.num_edges() {
        let (l, r) = sides[e];
        m[e][l.0] += 1;
        m[e][r.0] -= 1;
        m[e][regions + d.edge(super::EdgeId(e)).curve.0] -= 1;
    }
    m
}

/// Echelonize a set of region-coordinate vectors so translate searches can
/// prune on pivot coordinates.
fn echelonize_region_vectors(vecs: Vec<Vec<i128>>) -> (Vec<Vec<i64>>, Vec<usize>) {
    if vecs.is_empty() {
        return (Vec::new(), Vec::new());
    }
    // transpose into a matrix whose columns are the vectors
    let dim = vecs[0].len();
    let m: Vec<Vec<i128>> = (0..dim)
        .map(|r| vecs.iter().map(|v| v[r]).collect())
        .collect();
    let ech = column_echelon_i128(&m);
    let mut basis = Vec::new();
    let mut pivots = Vec::new();
    for (k, &prow) in ech.pivots.iter().enumerate() {
        let col: Vec<i64> = (0..dim)
            .map(|r| i64::try_from(ech.h[r][k]).expect("lattice entry overflow"))
            .collect();
        basis.push(col);
        pivots.push(prow);
    }
    (basis, pivots)
}

impl JumpSystem {
    pub fn new(d: &Diagram) -> JumpSystem {
        let m = jump_matrix(d);
        let echelon = column_echelon_i128(&m);
        let regions = d.num_regions();
        let kernel: Vec<Vec<i128>> = echelon
            .kernel_basis()
            .into_iter()
            .map(|v| v[..regions].to_vec())
            .collect();
        let (lattice, lattice_pivots) = echelonize_region_vectors(kernel);
        JumpSystem {
            num_regions: regions,
            num_curves: d.curves.len(),
            echelon,
            lattice,
            lattice_pivots,
        }
    }

    /// One particular solution (region multiplicities) of the jump equations
    /// for the connecting 1-chain `gamma`, or None when no domain exists.
    pub fn particular_solution(&self, gamma: &[i64]) -> Option<Vec<i64>> {
        let rhs: Vec<i128> = gamma.iter().map(|&g| i128::from(g)).collect();
        let x = self.echelon.solve(&rhs)?;
        Some(
            x[..self.num_regions]
                .iter()
                .map(|&v| i64::try_from(v).expect("domain multiplicity overflow"))
                .collect(),
        )
    }

    /// The per-curve boundary coefficients accompanying a particular
    /// solution (used in tests).
    pub fn particular_solution_with_curves(&self, gamma: &[i64]) -> Option<(Vec<i64>, Vec<i64>)> {
        let rhs: Vec<i128> = gamma.iter().map(|&g| i128::from(g)).collect();
        let x = self.echelon.solve(&rhs)?;
        let a = x[..self.num_regions]
            .iter()
            .map(|&v| i64::try_from(v).expect("overflow"))
            .collect();
        let n = x[self.num_regions..self.num_regions + self.num_curves]
            .iter()
            .map(|&v| i64::try_from(v).expect("overflow"))
            .collect();
        Some((a, n))
    }
}

/// Enumerates every vector `a0 + sum_i c_i * basis_i` whose coordinates all
/// lie in `[lo, hi]`, invoking `f` on each. The basis must be in echelon
/// form with the given pivot positions (strictly increasing).
pub fn for_each_box_translate(
    a0: &[i64],
    basis: &[Vec<i64>],
    pivots: &[usize],
    lo: i64,
    hi: i64,
    f: &mut impl FnMut(&[i64]),
) {
    let dim = a0.len();
    let first_pivot = pivots.first().copied().unwrap_or(dim);
    if a0[..first_pivot].iter().any(|&v| v < lo || v > hi) {
        return;
    }
    let mut current = a0.to_vec();
    dfs(&mut current, basis, pivots, 0, lo, hi, f);

    fn dfs(
        current: &mut Vec<i64>,
        basis: &[Vec<i64>],
        pivots: &[usize],
        level: usize,
        lo: i64,
        hi: i64,
        f: &mut impl FnMut(&[i64]),
    ) {
        if level == basis.len() {
            if current.iter().all(|&v| v >= lo && v <= hi) {
                f(current);
            }
            return;
        }
        let p = pivots[level];
        let k = basis[level][p];
        debug_assert!(k != 0);
        let base = current[p];
        // c must satisfy lo <= base + c*k <= hi
        let (lo_c, hi_c) = if k > 0 {
            (div_ceil(lo - base, k), div_floor(hi - base, k))
        } else {
            (div_ceil(hi - base, k), div_floor(lo - base, k))
        };
        let settled_end = pivots.get(level + 1).copied().unwrap_or(current.len());
        for c in lo_c..=hi_c {
            if c != 0 {
                for (i, &b) in basis[level].iter().enumerate() {
                    current[i] += c * b;
                }
            }
            let ok = current[p..settled_end].iter().all(|&v| v >= lo && v <= hi);
            if ok {
                dfs(current, basis, pivots, level + 1, lo, hi, f);
            }
            if c != 0 {
                for (i, &b) in basis[level].iter().enumerate() {
                    current[i] -= c * b;
                }
            }
        }
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    let (q, r) = (a / b, a % b);
    if r != 0 && (r < 0) != (b < 0) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// Basis of the lattice of basepoint-avoiding periodic domains, in region
/// coordinates, echelonized.
pub fn pointed_lattice(d: &Diagram) -> (Vec<Vec<i64>>, Vec<usize>) {
    let mut m = jump_matrix(d);
    let regions = d.num_regions();
    let curves = d.curves.len();
    for &rid in d.basepoints.keys() {
        let mut row = vec![0i128; regions + curves];
        row[rid.0] = 1;
        m.push(row);
    }
    let ech = column_echelon_i128(&m);
    let kernel: Vec<Vec<i128>> = ech
        .kernel_basis()
        .into_iter()
        .map(|v| v[..regions].to_vec())
        .collect();
    echelonize_region_vectors(kernel)
}

/// True when no nonzero basepoint-avoiding periodic domain is componentwise
/// nonnegative. Searches the lattice inside the box [0, bound]^regions;
/// every mixed-sign basis vector certifies the bound suffices at this scale.
pub fn pointed_lattice_is_admissible(d: &Diagram, max_coeff: Option<i64>) -> bool {
    let (basis, pivots) = pointed_lattice(d);
    if basis.is_empty() {
        return true;
    }
    // a basis vector of one sign is itself (or negated) a violating domain
    for v in &basis {
        let has_pos = v.iter().any(|&x| x > 0);
        let has_neg = v.iter().any(|&x| x < 0);
        if !(has_pos && has_neg) {
            return false;
        }
    }
    let bound = max_coeff.unwrap_or(d.num_regions() as i64);
    let zero = vec![0i64; d.num_regions()];
    let mut found = false;
    for_each_box_translate(&zero, &basis, &pivots, 0, bound, &mut |a| {
        if a.iter().any(|&v| v != 0) {
            found = true;
        }
    });
    !found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_solve_and_kernel_roundtrip() {
        // x + y = 3, 2y = 4 over (x, y, z): kernel is spanned by z
        let m = vec![vec![1, 1, 0], vec![0, 2, 0]];
        let ech = column_echelon_i128(&m);
        assert_eq!(ech.rank(), 2);
        let x = ech.solve(&[3, 4]).unwrap();
        assert_eq!(x[0] + x[1], 3);
        assert_eq!(2 * x[1], 4);
        assert_eq!(ech.kernel_basis().len(), 1);
        assert!(ech.solve(&[3, 5]).is_none(), "odd rhs not in 2Z");
    }

    #[test]
    fn box_translate_enumeration_is_complete() {
        // lattice spanned by (1, -1, 0) and (0, 1, -1) inside [0,1]^3
        let basis = vec![vec![1, -1, 0], vec![0, 1, -1]];
        let pivots = vec![0, 1];
        let mut seen = Vec::new();
        for_each_box_translate(&[0, 0, 1], &basis, &pivots, 0, 1, &mut |a| {
            seen.push(a.to_vec());
        });
        seen.sort();
        // brute force over all c1, c2 in a window
        let mut expect = Vec::new();
        for c1 in -3i64..=3 {
            for c2 in -3i64..=3 {
                let a = [c1, -c1 + c2 , 1 - c2];
                if a.iter().all(|&v| (0..=1).contains(&v)) {
                    expect.push(a.to_vec());
                }
            }
        }
        expect.sort();
        assert_eq!(seen, expect);
    }
}
