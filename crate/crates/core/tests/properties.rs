//! Property suite over the desk-scale diagram family: structural laws of
//! the complexes, the cover, the involution and the gradings.

use std::collections::BTreeMap;

use hfk_core::cover::{lift_diagram, solve_monodromy, CoveredDiagram};
use hfk_core::diagram::bridge::{two_bridge, BridgeSpec};
use hfk_core::diagram::grid::{from_grid, GridSpec};
use hfk_core::diagram::{
    Basepoint, BasepointKind, Corner, Curve, CurveId, CurveKind, Diagram, Dir, EdgeId, HalfEdge,
    Point, PointId, Region, RegionId, Violation,
};
use hfk_core::equivariant::{build_equivariant, localized_ranks};
use hfk_core::floer::differential::build_complex;
use hfk_core::floer::domains::{Domain, DomainSolver};
use hfk_core::floer::ranks::hfk_tilde;
use hfk_core::floer::{enumerate_generators, Generator};

fn bridge(p: i64, q: i64) -> Diagram {
    two_bridge(&BridgeSpec::new(p, q).unwrap()).unwrap()
}

fn lifted(p: i64, q: i64) -> CoveredDiagram {
    let d = bridge(p, q);
    let m = solve_monodromy(&d).unwrap();
    lift_diagram(&d, &m).unwrap()
}

#[test]
fn euler_characteristic_of_generated_diagrams() {
    for (d, genus) in [
        (bridge(1, 1), 0),
        (bridge(3, 1), 0),
        (bridge(5, 3), 0),
        (
            from_grid(&GridSpec::new(2, vec![0, 1], vec![1, 0]).unwrap()).unwrap(),
            1,
        ),
    ] {
        assert_eq!(d.genus(), Some(genus));
        assert_eq!(
            d.euler_characteristic(),
            2 - 2 * genus as i64,
            "V - E + F = 2 - 2g"
        );
    }
}

#[test]
fn cover_euler_characteristic_and_niceness() {
    for (p, q) in [(1, 1), (3, 1), (5, 3), (7, 3)] {
        let base = bridge(p, q);
        let cov = lifted(p, q);
        assert_eq!(
            cov.cover.euler_characteristic(),
            2 * base.euler_characteristic() - 2 * base.n_pairs() as i64,
            "chi(cover) = 2 chi(base) - 2n for b({p},{q})"
        );
        let (base_nice, _) = base.is_nice();
        let (cover_nice, _) = cov.cover.is_nice();
        assert!(base_nice && cover_nice, "nice base lifts to a nice cover");
        assert!(cov.cover.is_weakly_admissible(None));
    }
}

#[test]
fn differential_squares_to_zero_everywhere() {
    // build_complex asserts d^2 = 0 internally; verify directly as well
    let mut diagrams = vec![bridge(1, 1), bridge(3, 1), bridge(5, 3)];
    for (p, q) in [(1, 1), (3, 1), (5, 3)] {
        diagrams.push(lifted(p, q).cover);
    }
    diagrams.push(from_grid(&GridSpec::new(2, vec![0, 1], vec![1, 0]).unwrap()).unwrap());
    let x5: Vec<usize> = (0..5).map(|c| (c + 2) % 5).collect();
    diagrams.push(from_grid(&GridSpec::new(5, x5, (0..5).collect()).unwrap()).unwrap());
    for d in &diagrams {
        let solver = DomainSolver::new(d);
        let complex = build_complex(d, &solver, None).unwrap();
        assert!(
            complex.differential.mul(&complex.differential).is_zero(),
            "d^2 = 0"
        );
    }
}

#[test]
fn tau_commutes_with_differential_on_lifted_complexes() {
    for (p, q) in [(1, 1), (3, 1), (5, 3)] {
        let cov = lifted(p, q);
        let solver = DomainSolver::new(&cov.cover);
        // build_equivariant returns an error on any chain-map violation
        let eq = build_equivariant(&cov, &solver).unwrap();
        let n = eq.complex.gens.len();
        for x in 0..n {
            for y in 0..n {
                assert_eq!(
                    eq.complex.differential.get(y, x),
                    eq.complex.differential.get(eq.tau[y], eq.tau[x]),
                );
            }
        }
    }
}

#[test]
fn relative_gradings_independent_of_domain_translate() {
    let diagrams = vec![bridge(3, 1), lifted(3, 1).cover];
    for d in &diagrams {
        let solver = DomainSolver::new(d);
        let gens = enumerate_generators(d);
        let anchor = &gens[0];
        for g in &gens {
            let Some(dom) = solver.domain_between(d, g, anchor) else {
                continue;
            };
            let expected = solver.gradings_of_domain(&dom);
            for basis_vec in &solver.jump.lattice {
                for scale in [1i64, -1, 2] {
                    let shifted = Domain {
                        multiplicities: dom
                            .multiplicities
                            .iter()
                            .zip(basis_vec)
                            .map(|(a, b)| a + scale * b)
                            .collect(),
                        from: dom.from.clone(),
                        to: dom.to.clone(),
                    };
                    assert_eq!(solver.gradings_of_domain(&shifted), expected);
                }
            }
        }
    }
}

/// Levine decomposition at bridge scale: every cover generator projects to
/// a pair of base generators, and is reassembled from lifts of that pair.
#[test]
fn cover_generators_decompose_into_lift_pairs() {
    for (p, q) in [(3, 1), (5, 3)] {
        let base = bridge(p, q);
        let cov = lifted(p, q);
        let base_gens = enumerate_generators(&base);
        let base_sets: Vec<Vec<PointId>> = base_gens.iter().map(|g| g.points.clone()).collect();
        let cover_gens = enumerate_generators(&cov.cover);
        for g in &cover_gens {
            assert_eq!(g.points.len(), 2, "two-bridge covers have pairs");
            // each projected point is itself a base generator
            for &pt in &g.points {
                let proj = vec![cov.point_projection[pt.0]];
                assert!(
                    base_sets.contains(&proj),
                    "projection of a cover generator point is a base generator"
                );
            }
        }
        // invariant generators biject with base generators via full lifts
        let solver = DomainSolver::new(&cov.cover);
        let eq = {
            let complex = build_complex(&cov.cover, &solver, None).unwrap();
            hfk_core::equivariant::tau_sharp(&cov, &complex)
        };
        let fixed = eq.iter().enumerate().filter(|&(i, &t)| i == t).count();
        assert_eq!(fixed, base_gens.len());
    }
}

/// The Alexander grading of a lifted pair is the average of the base
/// Alexander gradings, as a statement about relative gradings.
#[test]
fn alexander_averaging_on_lifted_generators() {
    for (p, q) in [(3, 1), (5, 3)] {
        let base = bridge(p, q);
        let cov = lifted(p, q);
        let base_solver = DomainSolver::new(&base);
        let cover_solver = DomainSolver::new(&cov.cover);
        let base_gens = enumerate_generators(&base);
        let cover_gens = enumerate_generators(&cov.cover);
        // base Alexander gradings relative to base_gens[0]
        let base_a: Vec<f64> = base_gens
            .iter()
            .map(|g| {
                let (_, da) = base_solver
                    .relative_gradings(&base, g, &base_gens[0])
                    .expect("sphere base has one class");
                *da.numer() as f64 / *da.denom() as f64
            })
            .collect();
        let base_index: BTreeMap<PointId, usize> = base_gens
            .iter()
            .enumerate()
            .map(|(i, g)| (g.points[0], i))
            .collect();
        let avg = |g: &Generator| -> f64 {
            g.points
                .iter()
                .map(|&pt| base_a[base_index[&cov.point_projection[pt.0]]])
                .sum::<f64>()
                / 2.0
        };
        for x in 0..cover_gens.len() {
            for y in 0..cover_gens.len() {
                let Some((_, da)) =
                    cover_solver.relative_gradings(&cov.cover, &cover_gens[x], &cover_gens[y])
                else {
                    continue;
                };
                let da = *da.numer() as f64 / *da.denom() as f64;
                let expected = avg(&cover_gens[x]) - avg(&cover_gens[y]);
                assert!(
                    (da - expected).abs() < 1e-9,
                    "averaging fails for pair ({x}, {y}): {da} vs {expected}"
                );
            }
        }
    }
}

/// epsilon is additive over triples as coset arithmetic in H_1(Y).
#[test]
fn epsilon_additivity_on_the_lifted_trefoil() {
    use hfk_core::floer::{connecting_chain, H1Quotient};
    let cov = lifted(3, 1);
    let d = &cov.cover;
    let h1 = H1Quotient::new(d);
    let gens = enumerate_generators(d);
    let step = gens.len() / 5;
    for x in (0..gens.len()).step_by(step.max(1)) {
        for y in (0..gens.len()).step_by(step.max(1)) {
            for z in [0usize, gens.len() / 2, gens.len() - 1] {
                let xy = connecting_chain(d, &gens[x], &gens[y]);
                let yz = connecting_chain(d, &gens[y], &gens[z]);
                let xz = connecting_chain(d, &gens[x], &gens[z]);
                let sum: Vec<i64> = xy.iter().zip(&yz).map(|(a, b)| a + b).collect();
                assert_eq!(h1.label(&sum), h1.label(&xz));
            }
        }
    }
}

#[test]
fn conjugate_classes_and_localized_ranks() {
    for (p, q) in [(3, 1), (5, 3)] {
        let cov = lifted(p, q);
        let solver = DomainSolver::new(&cov.cover);
        let eq = build_equivariant(&cov, &solver).unwrap();
        let ranks = hfk_tilde(&eq.complex, cov.cover.n_pairs());
        for orbit in &eq.orbits {
            if let [a, b] = orbit.classes[..] {
                assert_eq!(
                    ranks.classes[a].ranks, ranks.classes[b].ranks,
                    "conjugate classes carry equal graded ranks"
                );
            }
        }
        let report = localized_ranks(&eq, 0).unwrap();
        for stratum in &report.strata {
            if !eq.orbits[stratum.orbit].canonical {
                assert_eq!(stratum.localized_rank, 0, "non-canonical orbits localize to zero");
            }
            assert!(stratum.localized_rank <= stratum.e1_rank);
            assert_eq!(stratum.localized_rank % 2, stratum.dimension % 2);
        }
    }
}

/// Two feasible monodromies differ by a vertex coboundary and produce the
/// same graded data downstream.
#[test]
fn gauge_invariance_of_the_cover() {
    let d = bridge(3, 1);
    let m = solve_monodromy(&d).unwrap();
    let gauges = [
        m.clone(),
        m.shift_by_coboundary(&d, &[PointId(0)]),
        m.shift_by_coboundary(&d, &[PointId(1), PointId(4), PointId(5)]),
    ];
    let mut outcomes = Vec::new();
    for gauge in &gauges {
        let cov = lift_diagram(&d, gauge).unwrap();
        let solver = DomainSolver::new(&cov.cover);
        let eq = build_equivariant(&cov, &solver).unwrap();
        let mut ranks = hfk_tilde(&eq.complex, cov.cover.n_pairs());
        hfk_core::floer::ranks::normalize_class_alexander(
            &mut ranks,
            eq.canonical_class,
            cov.cover.n_pairs(),
        )
        .unwrap();
        let shift = ranks.classes[eq.canonical_class].alexander_shift.unwrap();
        let report = localized_ranks(&eq, shift).unwrap();
        // canonical data in absolute Alexander gradings, Maslov as a shape
        let canonical = normalize_m_shape(&ranks.classes[eq.canonical_class].ranks);
        // non-canonical classes as a multiset of (A, M)-shapes
        let mut others: Vec<Vec<((i64, i64), usize)>> = ranks
            .classes
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != eq.canonical_class)
            .map(|(_, cr)| normalize_full_shape(&cr.ranks))
            .collect();
        others.sort();
        outcomes.push((
            canonical,
            others,
            report.e1_total,
            report.localized_total,
            report.canonical_localized_profile(),
        ));
    }
    for o in &outcomes[1..] {
        assert_eq!(o, &outcomes[0], "gauge choice changes the graded ranks");
    }
}

fn normalize_m_shape(ranks: &BTreeMap<(i64, i64), usize>) -> Vec<((i64, i64), usize)> {
    let m0 = ranks.keys().map(|&(_, m)| m).min().unwrap_or(0);
    ranks
        .iter()
        .map(|(&(a, m), &r)| ((a, m - m0), r))
        .collect()
}

fn normalize_full_shape(ranks: &BTreeMap<(i64, i64), usize>) -> Vec<((i64, i64), usize)> {
    let a0 = ranks.keys().map(|&(a, _)| a).min().unwrap_or(0);
    let m0 = ranks.keys().map(|&(_, m)| m).min().unwrap_or(0);
    ranks
        .iter()
        .map(|(&(a, m), &r)| ((a - a0, m - m0), r))
        .collect()
}

#[test]
fn base_tilde_rank_symmetry_after_normalization() {
    for (p, q) in [(1, 1), (3, 1), (5, 3)] {
        let d = bridge(p, q);
        let solver = DomainSolver::new(&d);
        let complex = build_complex(&d, &solver, None).unwrap();
        let mut ranks = hfk_tilde(&complex, d.n_pairs());
        hfk_core::floer::ranks::normalize_class_alexander(&mut ranks, 0, d.n_pairs()).unwrap();
        let profile = ranks.classes[0].alexander_profile();
        let n = d.n_pairs() as i64;
        for (&a, &r) in &profile {
            assert_eq!(
                profile.get(&(-(n - 1) - a)),
                Some(&r),
                "rank({a}) = rank({})",
                -(n - 1) - a
            );
        }
    }
}

/// The full pipeline across a wider two-bridge family: determinant p, a
/// thin base complex of rank 2p, and the localization equality. Includes
/// even q, which flips the branch-region pairing pattern.
#[test]
fn two_bridge_family_end_to_end() {
    use hfk_core::pipeline::{compute_two_bridge, ComputeOptions};
    for (p, q) in [(5i64, 1i64), (5, 2), (7, 1), (7, 3), (9, 5), (11, 4)] {
        let report = compute_two_bridge(p, q, ComputeOptions::default()).unwrap();
        let alex = report.alexander.as_ref().unwrap();
        assert_eq!(alex.determinant, p as u64, "det of b({p},{q})");
        assert_eq!(report.base.tilde_total, 2 * p as usize, "thin base complex");
        let hat_total: usize = alex.hat_profile.iter().map(|&(_, r)| r).sum();
        assert_eq!(hat_total, p as usize, "alternating knots have hat rank det");
        let cover = report.cover.as_ref().unwrap();
        assert_eq!(cover.complex.spin_c_classes, p as usize);
        assert_eq!(cover.borel.localized_total, report.base.tilde_total);
        assert!(report.verdicts.as_ref().unwrap().all_hold, "b({p},{q})");
    }
}

/// A hand-built valid sphere diagram whose two hexagonal regions are
/// basepoint-free: is_nice must reject it and list the hexagons. The beta
/// curve weaves above and below the alpha curve, so the diagram also
/// exercises crossings of both local orientations.
#[test]
fn hexagon_diagram_is_valid_but_not_nice() {
    let d = wave_diagram();
    let report = d.validate();
    assert!(report.is_valid(), "violations: {:?}", report.violations);
    assert_eq!(d.genus(), Some(0));
    assert_eq!(d.n_pairs(), 2);
    let (nice, offending) = d.is_nice();
    assert!(!nice);
    assert_eq!(offending, vec![RegionId(6), RegionId(7)]);
}

#[test]
fn missing_edge_side_is_reported() {
    let good = from_grid(&GridSpec::new(2, vec![0, 1], vec![1, 0]).unwrap()).unwrap();
    let mut regions = good.regions.clone();
    // drop one boundary slot (and its corner) from region 0
    regions[0].word.pop();
    regions[0].corners.pop();
    let bad = Diagram::new_unchecked(
        good.points.clone(),
        good.curves.clone(),
        regions,
        good.basepoints.clone(),
    );
    let report = bad.validate();
    assert!(report
        .violations
        .iter()
        .any(|v| matches!(v, Violation::EdgeSideCount(_, _, _))));
}

/// One alpha and one beta circle crossing six times: three bigons above,
/// three below, and two basepoint-free hexagons.
fn wave_diagram() -> Diagram {
    let points: Vec<Point> = (0..6)
        .map(|i| Point {
            alpha: CurveId(0),
            alpha_pos: i,
            beta: CurveId(1),
            beta_pos: i,
        })
        .collect();
    let curves = vec![
        Curve {
            kind: CurveKind::Alpha,
            name: "a0".into(),
            points: (0..6).map(PointId).collect(),
        },
        Curve {
            kind: CurveKind::Beta,
            name: "b0".into(),
            points: (0..6).map(PointId).collect(),
        },
    ];
    let a = |i: usize| EdgeId(i);
    let b = |i: usize| EdgeId(6 + i);
    let plus = |e: EdgeId| HalfEdge {
        edge: e,
        dir: Dir::Plus,
    };
    let minus = |e: EdgeId| HalfEdge {
        edge: e,
        dir: Dir::Minus,
    };
    let skeleton = Diagram::new_unchecked(points.clone(), curves.clone(), vec![], BTreeMap::new());
    let words: Vec<Vec<HalfEdge>> = vec![
        vec![plus(a(0)), minus(b(0))],                                             // 0: upper bigon
        vec![plus(a(2)), minus(b(2))],                                             // 1
        vec![plus(a(4)), minus(b(4))],                                             // 2
        vec![minus(a(1)), plus(b(1))],                                             // 3: lower bigon
        vec![minus(a(3)), plus(b(3))],                                             // 4
        vec![minus(a(5)), plus(b(5))],                                             // 5
        vec![plus(a(1)), plus(b(2)), plus(a(3)), plus(b(4)), plus(a(5)), plus(b(0))], // 6: upper hexagon
        vec![minus(a(0)), minus(b(5)), minus(a(4)), minus(b(3)), minus(a(2)), minus(b(1))], // 7: lower hexagon
    ];
    let regions: Vec<Region> = words
        .into_iter()
        .map(|word| {
            let corners: Vec<Corner> = skeleton.derive_corners(&word).unwrap();
            Region { word, corners }
        })
        .collect();
    let mut basepoints = BTreeMap::new();
    basepoints.insert(
        RegionId(0),
        Basepoint {
            kind: BasepointKind::W,
            index: 1,
        },
    );
    basepoints.insert(
        RegionId(1),
        Basepoint {
            kind: BasepointKind::Z,
            index: 2,
        },
    );
    basepoints.insert(
        RegionId(3),
        Basepoint {
            kind: BasepointKind::Z,
            index: 1,
        },
    );
    basepoints.insert(
        RegionId(4),
        Basepoint {
            kind: BasepointKind::W,
            index: 2,
        },
    );
    Diagram::new_unchecked(points, curves, regions, basepoints)
}
