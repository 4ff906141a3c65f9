//! Double branched covers of genus-zero diagrams, branched at the
//! basepoints, with sheet bookkeeping and the deck involution.
//!
//! The Z/2 monodromy is a bit per edge; walking an edge switches sheets when
//! its bit is set. Around a region the total switch must match whether the
//! region holds a branch point, which is a GF(2) linear system over edges.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::F2Matrix;
use crate::diagram::{
    Basepoint, Curve, CurveId, CurveKind, Diagram, DiagramError, Dir, EdgeId, HalfEdge, Point,
    PointId, Region, RegionId,
};

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("double cover requires a genus-0 base, got genus {0:?}")]
    BaseNotGenusZero(Option<u32>),
    #[error("monodromy system is infeasible; the diagram cannot support a branched double cover")]
    Infeasible,
    #[error("monodromy violates the region parity constraint at region {0:?}")]
    ParityViolation(RegionId),
    #[error("curve {0:?} has odd total monodromy and does not lift to two circles")]
    OddCurveMonodromy(CurveId),
    #[error("lifted diagram failed validation: {0}")]
    InvalidCover(#[from] DiagramError),
}

/// One bit per base edge; 1 means the edge crosses a branch cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyAssignment {
    pub bits: Vec<bool>,
}

impl MonodromyAssignment {
    /// Region parity: the boundary word switches sheets exactly over
    /// branch-point regions.
    pub fn satisfies_parity(&self, d: &Diagram) -> Result<(), RegionId> {
        for (r, region) in d.regions.iter().enumerate() {
            let total = region
                .word
                .iter()
                .filter(|h| self.bits[h.edge.0])
                .count();
            let want = usize::from(d.basepoints.contains_key(&RegionId(r)));
            if total % 2 != want {
                return Err(RegionId(r));
            }
        }
        Ok(())
    }

    /// Gauge shift: flip the sheet labels over a set of points. Adds the
    /// coboundary of the indicator function, preserving region parities.
    pub fn shift_by_coboundary(&self, d: &Diagram, flipped: &[PointId]) -> MonodromyAssignment {
        let mut flag = vec![false; d.num_points()];
        for p in flipped {
            flag[p.0] = true;
        }
        let bits = (0..d.num_edges())
            .map(|e| {
                let eid = EdgeId(e);
                self.bits[e] ^ flag[d.edge_tail(eid).0] ^ flag[d.edge_head(eid).0]
            })
            .collect();
        MonodromyAssignment { bits }
    }
}

/// Solves the per-region parity constraints for a genus-0 base.
pub fn solve_monodromy(d: &Diagram) -> Result<MonodromyAssignment, CoverError> {
    if d.genus() != Some(0) {
        return Err(CoverError::BaseNotGenusZero(d.genus()));
    }
    let mut m = F2Matrix::zero(d.num_regions(), d.num_edges());
    for (r, region) in d.regions.iter().enumerate() {
        for h in &region.word {
            m.flip(r, h.edge.0);
        }
    }
    let rhs: Vec<bool> = (0..d.num_regions())
        .map(|r| d.basepoints.contains_key(&RegionId(r)))
        .collect();
    let bits = m.solve(&rhs).ok_or(CoverError::Infeasible)?;
    let assignment = MonodromyAssignment { bits };
    debug_assert!(assignment.satisfies_parity(d).is_ok());
    Ok(assignment)
}

/// The lifted diagram with projection, sheet labels and the deck involution.
#[derive(Clone, Debug)]
pub struct CoveredDiagram {
    pub cover: Diagram,
    pub base: Diagram,
    /// base cell of each cover point / edge / region
    pub point_projection: Vec<PointId>,
    pub edge_projection: Vec<EdgeId>,
    pub region_projection: Vec<RegionId>,
    /// sheet of each cover point
    pub point_sheet: Vec<u8>,
    /// deck involution on cover cells
    pub tau_point: Vec<PointId>,
    pub tau_edge: Vec<EdgeId>,
    pub tau_region: Vec<RegionId>,
    pub tau_curve: Vec<CurveId>,
}

impl CoveredDiagram {
    /// Applies tau to a point of the cover.
    pub fn tau(&self, p: PointId) -> PointId {
        self.tau_point[p.0]
    }
}

/// Builds the double cover of a genus-0 diagram from a feasible monodromy.
///
/// Cover cells are (base cell, sheet); sheet 0 of each curve starts at the
/// lift of its first listed point, which fixes a deterministic gauge for
/// naming. Basepoint regions lift to a single region with doubled boundary;
/// all other cells lift to two copies.
pub fn lift_diagram(
    base: &Diagram,
    monodromy: &MonodromyAssignment,
) -> Result<CoveredDiagram, CoverError> {
    if base.genus() != Some(0) {
        return Err(CoverError::BaseNotGenusZero(base.genus()));
    }
    if let Err(r) = monodromy.satisfies_parity(base) {
        return Err(CoverError::ParityViolation(r));
    }
    for c in 0..base.curves.len() {
        let total = (0..base.curves[c].points.len())
            .filter(|&pos| monodromy.bits[base.edge_id(CurveId(c), pos).0])
            .count();
        if total % 2 != 0 {
            return Err(CoverError::OddCurveMonodromy(CurveId(c)));
        }
    }

    let np = base.num_points();
    let ne = base.num_edges();
    // cover point (p, s) has id p + s * np; cover edge (e, s) = e + s * ne,
    // meaning the lift of e whose tail lies on sheet s
    let cp = |p: PointId, s: u8| PointId(p.0 + s as usize * np);
    let ce = |e: EdgeId, s: u8| EdgeId(e.0 + s as usize * ne);

    // lifted curves: walk each base curve on each starting sheet
    let mut curves: Vec<Curve> = Vec::new();
    let mut cover_points = vec![
        Point {
            alpha: CurveId(0),
            alpha_pos: 0,
            beta: CurveId(0),
            beta_pos: 0,
        };
        2 * np
    ];
    // cover edge id -> (curve, pos) in the cover, filled during the walk
    let mut cover_edge_slot = vec![(CurveId(usize::MAX), usize::MAX); 2 * ne];
    let mut curve_of_start: BTreeMap<(usize, u8), CurveId> = BTreeMap::new();
    for (c, curve) in base.curves.iter().enumerate() {
        for start_sheet in [0u8, 1] {
            let mut sheet = start_sheet;
            let mut pts = Vec::with_capacity(curve.points.len());
            let mut slots = Vec::with_capacity(curve.points.len());
            for pos in 0..curve.points.len() {
                pts.push(cp(curve.points[pos], sheet));
                let e = base.edge_id(CurveId(c), pos);
                slots.push(ce(e, sheet));
                if monodromy.bits[e.0] {
                    sheet ^= 1;
                }
            }
            debug_assert_eq!(sheet, start_sheet, "even total monodromy");
            let cid = CurveId(curves.len());
            curve_of_start.insert((c, start_sheet), cid);
            for (pos, (&pid, &eid)) in pts.iter().zip(slots.iter()).enumerate() {
                let pt = &mut cover_points[pid.0];
                match curve.kind {
                    CurveKind::Alpha => {
                        pt.alpha = cid;
                        pt.alpha_pos = pos;
                    }
                    CurveKind::Beta => {
                        pt.beta = cid;
                        pt.beta_pos = pos;
                    }
                }
                cover_edge_slot[eid.0] = (cid, pos);
            }
            curves.push(Curve {
                kind: curve.kind,
                name: format!("{}~{}", curve.name, start_sheet),
                points: pts,
            });
        }
    }

    // the final cover diagram numbers edges by (curve, pos); translate our
    // provisional (base edge, sheet) ids through the walk data
    let mut edge_offsets = Vec::with_capacity(curves.len());
    let mut total = 0;
    for c in &curves {
        edge_offsets.push(total);
        total += c.points.len();
    }
    let final_edge =
        |provisional: EdgeId| -> EdgeId {
            let (cid, pos) = cover_edge_slot[provisional.0];
            EdgeId(edge_offsets[cid.0] + pos)
        };

    // lift region boundary words
    let mut regions: Vec<Region> = Vec::new();
    let mut region_projection: Vec<RegionId> = Vec::new();
    let mut region_lift_ids: BTreeMap<(usize, u8), RegionId> = BTreeMap::new();
    let skeleton = Diagram::new_unchecked(
        cover_points.clone(),
        curves.clone(),
        Vec::new(),
        BTreeMap::new(),
    );
    let lift_word = |word: &[HalfEdge], start_sheet: u8, laps: usize| -> Vec<HalfEdge> {
        let mut sheet = start_sheet;
        let mut out = Vec::with_capacity(word.len() * laps);
        for _ in 0..laps {
            for h in word {
                // when traversed backwards we are at the head; the lift
                // whose head is on `sheet` has tail sheet ^ m_e
                let m = monodromy.bits[h.edge.0];
                let tail_sheet = match h.dir {
                    Dir::Plus => sheet,
                    Dir::Minus => sheet ^ u8::from(m),
                };
                out.push(HalfEdge {
                    edge: final_edge(ce(h.edge, tail_sheet)),
                    dir: h.dir,
                });
                if m {
                    sheet ^= 1;
                }
            }
        }
        out
    };
    for (r, region) in base.regions.iter().enumerate() {
        let branched = base.basepoints.contains_key(&RegionId(r));
        if branched {
            let word = lift_word(&region.word, 0, 2);
            let rid = RegionId(regions.len());
            region_lift_ids.insert((r, 0), rid);
            region_lift_ids.insert((r, 1), rid);
            let corners = skeleton
                .derive_corners(&word)
                .expect("lifted branch word is locally consistent");
            regions.push(Region { word, corners });
            region_projection.push(RegionId(r));
        } else {
            for sheet in [0u8, 1] {
                let word = lift_word(&region.word, sheet, 1);
                let rid = RegionId(regions.len());
                region_lift_ids.insert((r, sheet), rid);
                let corners = skeleton
                    .derive_corners(&word)
                    .expect("lifted word is locally consistent");
                regions.push(Region { word, corners });
                region_projection.push(RegionId(r));
            }
        }
    }

    // basepoints keep their labels; each branch region lifts once
    let mut basepoints: BTreeMap<RegionId, Basepoint> = BTreeMap::new();
    for (&rid, &bp) in &base.basepoints {
        basepoints.insert(region_lift_ids[&(rid.0, 0)], bp);
    }

    let cover = Diagram::validated(cover_points, curves.clone(), regions, basepoints)?;

    // projections and the involution
    let point_projection: Vec<PointId> = (0..2 * np).map(|i| PointId(i % np)).collect();
    let point_sheet: Vec<u8> = (0..2 * np).map(|i| u8::from(i >= np)).collect();
    let tau_point: Vec<PointId> = (0..2 * np)
        .map(|i| PointId(if i >= np { i - np } else { i + np }))
        .collect();

    let mut edge_projection = vec![EdgeId(0); cover.num_edges()];
    let mut tau_edge = vec![EdgeId(0); cover.num_edges()];
    for prov in 0..2 * ne {
        let base_e = EdgeId(prov % ne);
        let sheet = u8::from(prov >= ne);
        let id = final_edge(EdgeId(prov));
        edge_projection[id.0] = base_e;
        tau_edge[id.0] = final_edge(ce(base_e, sheet ^ 1));
    }

    let mut tau_region = vec![RegionId(0); cover.num_regions()];
    for ((r, sheet), &rid) in &region_lift_ids {
        tau_region[rid.0] = region_lift_ids[&(*r, sheet ^ 1)];
    }

    let tau_curve: Vec<CurveId> = (0..curves.len())
        .map(|c| {
            // curves alternate (base curve, sheet 0), (base curve, sheet 1)
            let base_c = c / 2;
            let sheet = (c % 2) as u8;
            curve_of_start[&(base_c, sheet ^ 1)]
        })
        .collect();

    let covered = CoveredDiagram {
        cover,
        base: base.clone(),
        point_projection,
        edge_projection,
        region_projection,
        point_sheet,
        tau_point,
        tau_edge,
        tau_region,
        tau_curve,
    };
    check_cover_invariants(&covered)?;
    Ok(covered)
}

fn check_cover_invariants(cov: &CoveredDiagram) -> Result<(), CoverError> {
    let c = &cov.cover;
    let b = &cov.base;
    // Euler characteristic of the cover: 2*chi(base) - #branch points
    let expect = 2 * b.euler_characteristic() - 2 * b.n_pairs() as i64;
    assert_eq!(
        c.euler_characteristic(),
        expect,
        "cover Euler characteristic"
    );
    // tau is a fixed-point-free involution on points and edges; fixed
    // regions are exactly the branch regions
    for p in 0..c.num_points() {
        assert_ne!(cov.tau_point[p].0, p, "tau fixes a point");
        assert_eq!(cov.tau_point[cov.tau_point[p].0].0, p, "tau^2 != id");
        assert_eq!(
            cov.point_projection[cov.tau_point[p].0],
            cov.point_projection[p],
            "projection incompatible with tau"
        );
    }
    for e in 0..c.num_edges() {
        assert_ne!(cov.tau_edge[e].0, e, "tau fixes an edge");
        assert_eq!(cov.tau_edge[cov.tau_edge[e].0].0, e, "tau^2 != id on edges");
    }
    for r in 0..c.num_regions() {
        let fixed = cov.tau_region[r].0 == r;
        let branch = c.basepoints.contains_key(&RegionId(r));
        assert_eq!(fixed, branch, "tau-fixed regions are the branch regions");
    }
    for cid in 0..c.curves.len() {
        let image = cov.tau_curve[cid];
        assert_ne!(image.0, cid, "tau swaps the two lifts of each curve");
        assert_eq!(cov.tau_curve[image.0].0, cid, "tau^2 != id on curves");
        let mut mapped: Vec<usize> = c.curves[cid]
            .points
            .iter()
            .map(|p| cov.tau_point[p.0].0)
            .collect();
        mapped.sort_unstable();
        let mut target: Vec<usize> = c.curves[image.0].points.iter().map(|p| p.0).collect();
        target.sort_unstable();
        assert_eq!(mapped, target, "tau maps curves to their partner lifts");
    }
    Ok(())
}

/// Serializes the cover in the diagram format plus a `[tau]` section.
pub fn serialize_cover(cov: &CoveredDiagram) -> String {
    use crate::diagram::io::{edge_ref, serialize_diagram};
    let mut out = serialize_diagram(&cov.cover);
    out.push_str("[tau]\n");
    for p in 0..cov.cover.num_points() {
        if p < cov.tau_point[p].0 {
            out.push_str(&format!("point {} {}\n", p, cov.tau_point[p].0));
        }
    }
    for e in 0..cov.cover.num_edges() {
        if e < cov.tau_edge[e].0 {
            out.push_str(&format!(
                "edge {} {}\n",
                edge_ref(&cov.cover, EdgeId(e)),
                edge_ref(&cov.cover, cov.tau_edge[e])
            ));
        }
    }
    for r in 0..cov.cover.num_regions() {
        if r < cov.tau_region[r].0 {
            out.push_str(&format!("region {} {}\n", r, cov.tau_region[r].0));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::bridge::{two_bridge, BridgeSpec};
    use crate::diagram::grid::{from_grid, GridSpec};

    fn bridge(p: i64, q: i64) -> Diagram {
        two_bridge(&BridgeSpec::new(p, q).unwrap()).unwrap()
    }

    #[test]
    fn monodromy_exists_and_curves_are_even() {
        let d = bridge(3, 1);
        let m = solve_monodromy(&d).unwrap();
        assert!(m.satisfies_parity(&d).is_ok());
        for c in 0..d.curves.len() {
            let total: usize = (0..d.curves[c].points.len())
                .filter(|&pos| m.bits[d.edge_id(CurveId(c), pos).0])
                .count();
            assert_eq!(total % 2, 0);
        }
    }

    #[test]
    fn trefoil_cover_is_a_genus_one_lens_diagram() {
        let d = bridge(3, 1);
        let m = solve_monodromy(&d).unwrap();
        let cov = lift_diagram(&d, &m).unwrap();
        assert_eq!(cov.cover.genus(), Some(1));
        assert_eq!(cov.cover.alpha_curves().count(), 2);
        assert_eq!(cov.cover.beta_curves().count(), 2);
        assert_eq!(cov.cover.n_pairs(), 2);
        let (nice, _) = cov.cover.is_nice();
        assert!(nice, "nice base lifts to a nice cover");
        assert!(cov.cover.is_weakly_admissible(None));
    }

    #[test]
    fn unknot_cover_counts() {
        let d = bridge(1, 1);
        let m = solve_monodromy(&d).unwrap();
        let cov = lift_diagram(&d, &m).unwrap();
        assert_eq!(cov.cover.genus(), Some(1));
        assert_eq!(cov.cover.num_points(), 4);
        assert_eq!(cov.cover.num_regions(), 4);
    }

    #[test]
    fn figure_eight_cover_counts() {
        let d = bridge(5, 3);
        let m = solve_monodromy(&d).unwrap();
        let cov = lift_diagram(&d, &m).unwrap();
        assert_eq!(cov.cover.genus(), Some(1));
        assert_eq!(
            cov.cover.euler_characteristic(),
            2 * d.euler_characteristic() - 4
        );
    }

    #[test]
    fn grids_are_rejected() {
        let d = from_grid(&GridSpec::new(2, vec![0, 1], vec![1, 0]).unwrap()).unwrap();
        assert!(matches!(
            solve_monodromy(&d),
            Err(CoverError::BaseNotGenusZero(Some(1)))
        ));
    }

    #[test]
    fn coboundary_shift_keeps_parity() {
        let d = bridge(3, 1);
        let m = solve_monodromy(&d).unwrap();
        let shifted = m.shift_by_coboundary(&d, &[PointId(0), PointId(3)]);
        assert!(shifted.satisfies_parity(&d).is_ok());
        assert_ne!(shifted, m);
        let cov = lift_diagram(&d, &shifted).unwrap();
        assert_eq!(cov.cover.genus(), Some(1));
    }
}
