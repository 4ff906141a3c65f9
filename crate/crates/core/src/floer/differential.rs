//! The combinatorial differential of a nice diagram, counting empty
//! embedded bigons and rectangles, and the assembled graded complex.
//!
//! A counted domain has multiplicities in {0, 1}, avoids every basepoint,
//! has Maslov index one, and its corner multiplicities vanish at the shared
//! points of the two generators while each moving point is a corner with a
//! single quadrant of multiplicity one. On a nice diagram such a domain
//! moves at most two coordinates, so only those candidate pairs are
//! enumerated.

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::algebra::F2Matrix;
use crate::diagram::jump::for_each_box_translate;
use crate::diagram::{CurveId, Diagram, PointId, RegionId, QUADRANTS};

use super::domains::{Domain, DomainSolver};
use super::{enumerate_generators, Generator, SpinCPartition};

#[derive(Debug, Error)]
pub enum FloerError {
    #[error("diagram is not nice; offending regions {0:?}")]
    NotNice(Vec<usize>),
    #[error("relative grading of generator pair is not an integer: {0}")]
    NonIntegralGrading(String),
    #[error("differential does not square to zero (witness generator {0})")]
    DifferentialSquare(usize),
    #[error("differential entry from {from} to {to} changes the Alexander grading")]
    GradingLeak { from: usize, to: usize },
    #[error("differential entry from {from} to {to} does not lower the Maslov grading by one")]
    MaslovStep { from: usize, to: usize },
}

/// The full tilde-flavored chain complex of a diagram.
pub struct FloerComplex {
    pub gens: Vec<Generator>,
    pub index: BTreeMap<Vec<PointId>, usize>,
    pub partition: SpinCPartition,
    /// (Alexander, Maslov) of each generator, relative to its class anchor.
    pub gradings: Vec<(i64, i64)>,
    /// anchor generator per class (lowest enumeration index)
    pub anchors: Vec<usize>,
    /// entry (row y, column x) counts rigid domains from x to y mod 2
    pub differential: F2Matrix,
}

/// Builds generators, spin^c partition, gradings and the differential.
/// `anchors` may pin the per-class anchor generators (used on covers to
/// anchor the canonical class at an invariant generator).
pub fn build_complex(
    d: &Diagram,
    solver: &DomainSolver,
    anchors: Option<Vec<usize>>,
) -> Result<FloerComplex, FloerError> {
    let (nice, offending) = d.is_nice();
    if !nice {
        return Err(FloerError::NotNice(
            offending.iter().map(|r| r.0).collect(),
        ));
    }
    let gens = enumerate_generators(d);
    let partition = SpinCPartition::new(d, &gens);
    let index: BTreeMap<Vec<PointId>, usize> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| (g.points.clone(), i))
        .collect();

    let anchors = match anchors {
        Some(a) => a,
        None => {
            let mut a = vec![usize::MAX; partition.num_classes()];
            for (i, &class) in partition.labels.iter().enumerate() {
                if a[class] == usize::MAX {
                    a[class] = i;
                }
            }
            a
        }
    };

    let mut gradings = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let anchor = &gens[anchors[partition.labels[i]]];
        let (dm, da) = solver
            .relative_gradings(d, g, anchor)
            .expect("anchor shares the generator's class");
        if !dm.is_integer() || !da.is_integer() {
            return Err(FloerError::NonIntegralGrading(format!(
                "generator {i}: dM = {dm}, dA = {da}"
            )));
        }
        gradings.push((da.to_integer(), dm.to_integer()));
    }

    let differential = build_differential(d, solver, &gens, &index)?;

    // structural checks: entries preserve A, lower M by one, square to zero
    for x in 0..gens.len() {
        for y in 0..gens.len() {
            if differential.get(y, x) {
                if gradings[y].0 != gradings[x].0 {
                    return Err(FloerError::GradingLeak { from: x, to: y });
                }
                if gradings[x].1 != gradings[y].1 + 1 {
                    return Err(FloerError::MaslovStep { from: x, to: y });
                }
            }
        }
    }
    let square = differential.mul(&differential);
    if !square.is_zero() {
        let witness = (0..gens.len())
            .find(|&x| (0..gens.len()).any(|y| square.get(y, x)))
            .unwrap_or(0);
        return Err(FloerError::DifferentialSquare(witness));
    }

    Ok(FloerComplex {
        gens,
        index,
        partition,
        gradings,
        anchors,
        differential,
    })
}

fn build_differential(
    d: &Diagram,
    solver: &DomainSolver,
    gens: &[Generator],
    index: &BTreeMap<Vec<PointId>, usize>,
) -> Result<F2Matrix, FloerError> {
    let n = gens.len();
    let mut matrix = F2Matrix::zero(n, n);
    let alphas: Vec<CurveId> = d.alpha_curves().collect();

    // points grouped by the (alpha, beta) curve pair they lie on
    let mut by_pair: BTreeMap<(CurveId, CurveId), Vec<PointId>> = BTreeMap::new();
    for p in 0..d.num_points() {
        let pt = d.point(PointId(p));
        by_pair.entry((pt.alpha, pt.beta)).or_default().push(PointId(p));
    }

    let basepoint_regions: Vec<RegionId> = d.basepoints.keys().copied().collect();

    for (xi, x) in gens.iter().enumerate() {
        let mut targets: Vec<Vec<PointId>> = Vec::new();
        // bigons: replace one coordinate along the same curve pair
        for (slot, &p) in x.points.iter().enumerate() {
            let pt = d.point(p);
            for &p2 in &by_pair[&(alphas[slot], pt.beta)] {
                if p2 != p {
                    let mut y = x.points.clone();
                    y[slot] = p2;
                    targets.push(y);
                }
            }
        }
        // rectangles: swap the beta curves of two coordinates
        for i in 0..x.points.len() {
            for j in i + 1..x.points.len() {
                let (bi, bj) = (d.point(x.points[i]).beta, d.point(x.points[j]).beta);
                let cands_i = by_pair.get(&(alphas[i], bj)).cloned().unwrap_or_default();
                let cands_j = by_pair.get(&(alphas[j], bi)).cloned().unwrap_or_default();
                for &pi in &cands_i {
                    for &pj in &cands_j {
                        let mut y = x.points.clone();
                        y[i] = pi;
                        y[j] = pj;
                        targets.push(y);
                    }
                }
            }
        }

        for y_points in targets {
            let yi = index[&y_points];
            let y = &gens[yi];
            let Some(base) = solver.domain_between(d, x, y) else {
                continue;
            };
            let count = count_rigid_domains(solver, &basepoint_regions, x, y, &base);
            if count % 2 == 1 {
                matrix.set(yi, xi, true);
            }
        }
    }
    Ok(matrix)
}

/// Counts the domains from x to y satisfying the rigidity conditions, over
/// all translates of the particular solution with multiplicities in {0,1}.
fn count_rigid_domains(
    solver: &DomainSolver,
    basepoint_regions: &[RegionId],
    x: &Generator,
    y: &Generator,
    base: &Domain,
) -> usize {
    let moving_x: Vec<PointId> = x
        .points
        .iter()
        .copied()
        .filter(|p| !y.points.contains(p))
        .collect();
    let moving_y: Vec<PointId> = y
        .points
        .iter()
        .copied()
        .filter(|p| !x.points.contains(p))
        .collect();
    let fixed: Vec<PointId> = x
        .points
        .iter()
        .copied()
        .filter(|p| y.points.contains(p))
        .collect();
    let one = Ratio::from_integer(1);
    let mut count = 0usize;
    for_each_box_translate(
        &base.multiplicities,
        &solver.jump.lattice,
        &solver.jump.lattice_pivots,
        0,
        1,
        &mut |a| {
            if basepoint_regions.iter().any(|r| a[r.0] != 0) {
                return;
            }
            for &p in &fixed {
                if QUADRANTS.iter().any(|&q| a[solver.corner_region(p, q).0] != 0) {
                    return;
                }
            }
            for &p in moving_x.iter().chain(&moving_y) {
                let hits: i64 = QUADRANTS
                    .iter()
                    .map(|&q| a[solver.corner_region(p, q).0])
                    .sum();
                if hits != 1 {
                    return;
                }
            }
            let dom = Domain {
                multiplicities: a.to_vec(),
                from: x.clone(),
                to: y.clone(),
            };
            if solver.maslov_index(&dom) == one {
                count += 1;
            }
        },
    );
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::bridge::{two_bridge, BridgeSpec};
    use crate::diagram::grid::{from_grid, GridSpec};

    #[test]
    fn unknot_grid_differential_vanishes() {
        let d = from_grid(&GridSpec::new(2, vec![0, 1], vec![1, 0]).unwrap()).unwrap();
        let solver = DomainSolver::new(&d);
        let complex = build_complex(&d, &solver, None).unwrap();
        assert_eq!(complex.gens.len(), 2);
        assert!(complex.differential.is_zero());
    }

    #[test]
    fn unknot_bridge_differential_vanishes() {
        let d = two_bridge(&BridgeSpec::new(1, 1).unwrap()).unwrap();
        let solver = DomainSolver::new(&d);
        let complex = build_complex(&d, &solver, None).unwrap();
        assert_eq!(complex.gens.len(), 2);
        assert!(complex.differential.is_zero());
    }

    #[test]
    fn trefoil_bridge_complex_is_thin() {
        let d = two_bridge(&BridgeSpec::new(3, 1).unwrap()).unwrap();
        let solver = DomainSolver::new(&d);
        let complex = build_complex(&d, &solver, None).unwrap();
        assert_eq!(complex.gens.len(), 6);
        // bridge-position diagrams of two-bridge knots have no differentials
        assert!(complex.differential.is_zero());
    }
}
