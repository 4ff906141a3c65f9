//! Generators, spin^c partition, domains, gradings, the combinatorial
//! differential for nice diagrams, and graded homology ranks.

pub mod differential;
pub mod domains;
pub mod ranks;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::snf::{column_echelon, snf_with_left_transform, ColumnEchelon, ZMatrix};
use crate::diagram::{CurveId, CurveKind, Diagram, Dir, PointId};

/// A generator: one intersection point per alpha curve, using each beta
/// curve exactly once. Indexed by the diagram's alpha curves in id order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Generator {
    pub points: Vec<PointId>,
}

/// Exhaustive, duplicate-free enumeration in lexicographic order over the
/// per-alpha point choices (point ids ascending).
pub fn enumerate_generators(d: &Diagram) -> Vec<Generator> {
    let alphas: Vec<CurveId> = d.alpha_curves().collect();
    let beta_count = d.beta_curves().count();
    let beta_slot: BTreeMap<CurveId, usize> = d
        .beta_curves()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let mut per_alpha: Vec<Vec<PointId>> = alphas
        .iter()
        .map(|&a| {
            let mut pts = d.curve(a).points.clone();
            pts.sort();
            pts
        })
        .collect();
    for pts in &mut per_alpha {
        pts.dedup();
    }
    let mut out = Vec::new();
    let mut chosen: Vec<PointId> = Vec::with_capacity(alphas.len());
    let mut beta_used = vec![false; beta_count];
    fn recurse(
        d: &Diagram,
        per_alpha: &[Vec<PointId>],
        beta_slot: &BTreeMap<CurveId, usize>,
        level: usize,
        chosen: &mut Vec<PointId>,
        beta_used: &mut Vec<bool>,
        out: &mut Vec<Generator>,
    ) {
        if level == per_alpha.len() {
            out.push(Generator {
                points: chosen.clone(),
            });
            return;
        }
        for &p in &per_alpha[level] {
            let slot = beta_slot[&d.point(p).beta];
            if beta_used[slot] {
                continue;
            }
            beta_used[slot] = true;
            chosen.push(p);
            recurse(d, per_alpha, beta_slot, level + 1, chosen, beta_used, out);
            chosen.pop();
            beta_used[slot] = false;
        }
    }
    recurse(
        d,
        &per_alpha,
        &beta_slot,
        0,
        &mut chosen,
        &mut beta_used,
        &mut out,
    );
    out
}

/// The quotient of H_1(S) by the curve classes, presented through the cellular
/// chain complex, with a canonical coset label for 1-cycles. Generators
/// land in the same spin^c structure exactly when their labels agree.
pub struct H1Quotient {
    /// column echelon of the kernel basis of the vertex boundary map
    kernel: ColumnEchelon,
    /// left transform and invariant factors of the relation lattice
    factors: Vec<BigInt>,
    left: ZMatrix,
    /// invariant factors of the quotient group (torsion + free ranks)
    pub group_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl H1Quotient {
    pub fn new(d: &Diagram) -> H1Quotient {
        let ne = d.num_edges();
        let np = d.num_points();
        // boundary map C1 -> C0: column e = head - tail
        let mut d1 = ZMatrix::zero(np, ne);
        for e in 0..ne {
            let eid = crate::diagram::EdgeId(e);
            let head = d.edge_head(eid);
            let tail = d.edge_tail(eid);
            let v = d1.get(head.0, e) + 1;
            d1.set(head.0, e, v);
            let v = d1.get(tail.0, e) - 1;
            d1.set(tail.0, e, v);
        }
        let d1k = column_echelon(&d1);
        let cycle_basis = d1k.kernel_basis();
        let k = cycle_basis.len();
        let kernel_matrix = ZMatrix::from_columns(ne, &cycle_basis);
        let kernel = column_echelon(&kernel_matrix);

        // relation lattice: region boundaries and full curve cycles,
        // expressed in kernel coordinates
        let mut relations: Vec<Vec<BigInt>> = Vec::new();
        for region in &d.regions {
            let mut vec = vec![BigInt::zero(); ne];
            for h in &region.word {
                vec[h.edge.0] += match h.dir {
                    Dir::Plus => 1,
                    Dir::Minus => -1,
                };
            }
            relations.push(expressed(&kernel, &vec));
        }
        for c in 0..d.curves.len() {
            let mut vec = vec![BigInt::zero(); ne];
            for pos in 0..d.curve(CurveId(c)).points.len() {
                vec[d.edge_id(CurveId(c), pos).0] += 1;
            }
            relations.push(expressed(&kernel, &vec));
        }
        let u = ZMatrix::from_columns(k, &relations);
        let snf = snf_with_left_transform(&u);
        let group_factors: Vec<BigInt> = snf
            .factors
            .iter()
            .filter(|f| !f.is_zero() && **f != BigInt::from(1))
            .cloned()
            .collect();
        let rank = snf.factors.iter().filter(|f| !f.is_zero()).count();
        let free_rank = k - rank;
        H1Quotient {
            kernel,
            factors: snf.factors,
            left: snf.left,
            group_factors,
            free_rank,
        }
    }

    /// Order of the quotient group, when finite.
    pub fn group_order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        let mut acc = BigInt::from(1);
        for f in &self.group_factors {
            acc *= f;
        }
        Some(acc)
    }

    /// Canonical coset label of an integer 1-cycle.
    pub fn label(&self, cycle: &[i64]) -> Vec<BigInt> {
        let vec: Vec<BigInt> = cycle.iter().map(|&v| BigInt::from(v)).collect();
        let u = expressed(&self.kernel, &vec);
        let k = self.left.rows();
        let mut label = vec![BigInt::zero(); k];
        for (r, item) in label.iter_mut().enumerate() {
            let mut acc = BigInt::zero();
            for (c, uc) in u.iter().enumerate() {
                acc += self.left.get(r, c) * uc;
            }
            *item = acc;
        }
        for (i, item) in label.iter_mut().enumerate() {
            if let Some(f) = self.factors.get(i) {
                if !f.is_zero() {
                    let m = item.mod_floor(f);
                    *item = m;
                }
            }
        }
        label
    }
}

fn expressed(kernel: &ColumnEchelon, cycle: &[BigInt]) -> Vec<BigInt> {
    kernel
        .solve(cycle)
        .expect("1-chain with zero boundary lies in the cycle lattice")
}

/// The connecting 1-chain of a pair of generators: alpha arcs x -> y and
/// beta arcs y -> x, shorter arc first, ties broken in the positive
/// direction. Returned as a signed multiplicity per edge.
pub fn connecting_chain(d: &Diagram, x: &Generator, y: &Generator) -> Vec<i64> {
    let mut gamma = vec![0i64; d.num_edges()];
    let alphas: Vec<CurveId> = d.alpha_curves().collect();
    for (slot, &c) in alphas.iter().enumerate() {
        add_arc(d, c, x.points[slot], point_on_curve(d, y, c), &mut gamma);
    }
    for c in d.beta_curves() {
        let from = point_on_curve_beta(d, y, c);
        let to = point_on_curve_beta(d, x, c);
        add_arc(d, c, from, to, &mut gamma);
    }
    gamma
}

fn point_on_curve(d: &Diagram, g: &Generator, alpha: CurveId) -> PointId {
    let slot = d
        .alpha_curves()
        .position(|c| c == alpha)
        .expect("alpha curve exists");
    let _ = d;
    g.points[slot]
}

fn point_on_curve_beta(d: &Diagram, g: &Generator, beta: CurveId) -> PointId {
    *g.points
        .iter()
        .find(|&&p| d.point(p).beta == beta)
        .expect("generator covers every beta curve")
}

fn add_arc(d: &Diagram, c: CurveId, from: PointId, to: PointId, gamma: &mut [i64]) {
    let (kind, len) = (d.curve(c).kind, d.curve(c).points.len());
    let pos = |p: PointId| match kind {
        CurveKind::Alpha => d.point(p).alpha_pos,
        CurveKind::Beta => d.point(p).beta_pos,
    };
    let (i, j) = (pos(from), pos(to));
    if i == j {
        return;
    }
    let fwd = (j + len - i) % len;
    let bwd = (i + len - j) % len;
    if fwd <= bwd {
        for step in 0..fwd {
            gamma[d.edge_id(c, (i + step) % len).0] += 1;
        }
    } else {
        for step in 0..bwd {
            gamma[d.edge_id(c, (i + len - 1 - step) % len).0] -= 1;
        }
    }
}

/// The splitting of the generator set along spin^c structures.
pub struct SpinCPartition {
    pub h1: H1Quotient,
    /// class index per generator
    pub labels: Vec<usize>,
    /// canonical label vector per class, stringified for reports
    pub class_labels: Vec<String>,
    pub class_sizes: Vec<usize>,
}

impl SpinCPartition {
    pub fn new(d: &Diagram, gens: &[Generator]) -> SpinCPartition {
        let h1 = H1Quotient::new(d);
        let mut class_of: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
        let mut labels = Vec::with_capacity(gens.len());
        let mut class_labels = Vec::new();
        let mut class_sizes = Vec::new();
        if let Some(first) = gens.first() {
            for g in gens {
                let gamma = connecting_chain(d, first, g);
                let label = h1.label(&gamma);
                let next = class_of.len();
                let idx = *class_of.entry(label.clone()).or_insert_with(|| {
                    class_labels.push(format_label(&label));
                    class_sizes.push(0);
                    next
                });
                class_sizes[idx] += 1;
                labels.push(idx);
            }
        }
        SpinCPartition {
            h1,
            labels,
            class_labels,
            class_sizes,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.class_labels.len()
    }

    /// epsilon(x, y) vanishes exactly when the generators share a class.
    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }
}

fn format_label(label: &[BigInt]) -> String {
    let parts: Vec<String> = label.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

/// The class of the connecting cycle between two explicit generators.
pub fn epsilon(d: &Diagram, h1: &H1Quotient, x: &Generator, y: &Generator) -> Vec<BigInt> {
    h1.label(&connecting_chain(d, x, y))
}

pub fn epsilon_is_zero(eps: &[BigInt]) -> bool {
    eps.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::bridge::{two_bridge, BridgeSpec};
    use crate::diagram::grid::{from_grid, GridSpec};

    #[test]
    fn grid_generator_counts_are_factorials() {
        let d2 = from_grid(&GridSpec::new(2, vec![0, 1], vec![1, 0]).unwrap()).unwrap();
        assert_eq!(enumerate_generators(&d2).len(), 2);
        let x: Vec<usize> = (0..5).map(|c| (c + 2) % 5).collect();
        let o: Vec<usize> = (0..5).collect();
        let d5 = from_grid(&GridSpec::new(5, x, o).unwrap()).unwrap();
        assert_eq!(enumerate_generators(&d5).len(), 120);
    }

    #[test]
    fn bridge_generators_and_single_class() {
        let d = two_bridge(&BridgeSpec::new(3, 1).unwrap()).unwrap();
        let gens = enumerate_generators(&d);
        assert_eq!(gens.len(), 6);
        let partition = SpinCPartition::new(&d, &gens);
        // the sphere has trivial H1, so all generators share the class
        assert_eq!(partition.num_classes(), 1);
        assert!(partition.h1.group_factors.is_empty());
    }

    #[test]
    fn epsilon_is_reflexive_and_additive() {
        let d = two_bridge(&BridgeSpec::new(3, 1).unwrap()).unwrap();
        let h1 = H1Quotient::new(&d);
        let gens = enumerate_generators(&d);
        for g in &gens {
            assert!(epsilon_is_zero(&epsilon(&d, &h1, g, g)));
        }
    }

    #[test]
    fn grid_all_generators_one_class() {
        let d = from_grid(&GridSpec::new(2, vec![0, 1], vec![1, 0]).unwrap()).unwrap();
        let gens = enumerate_generators(&d);
        let partition = SpinCPartition::new(&d, &gens);
        assert_eq!(partition.num_classes(), 1);
    }
}
