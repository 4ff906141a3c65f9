//! Combinatorial multi-pointed Heegaard diagrams.
//!
//! A diagram is a cellular decomposition of a closed oriented surface:
//! vertices are the transverse intersections of alpha and beta curves, edges
//! are the curve arcs between consecutive intersections, and faces are disk
//! regions given by cyclic boundary words of directed edges. Basepoints
//! (w_i, z_i) mark regions. Validation checks every structural invariant and
//! reports each violation separately.

pub mod bridge;
pub mod grid;
pub mod io;
pub mod jump;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct PointId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct CurveId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct RegionId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum CurveKind {
    Alpha,
    Beta,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Dir {
    Plus,
    Minus,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Plus => Dir::Minus,
            Dir::Minus => Dir::Plus,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Dir::Plus => 1,
            Dir::Minus => -1,
        }
    }
}

/// Quadrant at an intersection point, named by the pair of curve rays
/// bounding it: the alpha orientation points "east", the beta orientation
/// "north".
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Quadrant {
    NE,
    NW,
    SW,
    SE,
}

pub const QUADRANTS: [Quadrant; 4] = [Quadrant::NE, Quadrant::NW, Quadrant::SW, Quadrant::SE];

/// A directed edge occurrence inside a region boundary word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct HalfEdge {
    pub edge: EdgeId,
    pub dir: Dir,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Corner {
    pub point: PointId,
    pub quadrant: Quadrant,
}

/// An intersection point, remembering where it sits on its two curves.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Point {
    pub alpha: CurveId,
    pub alpha_pos: usize,
    pub beta: CurveId,
    pub beta_pos: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Curve {
    pub kind: CurveKind,
    pub name: String,
    /// Cyclic list; consecutive entries (wrapping) bound the curve's edges.
    pub points: Vec<PointId>,
}

/// An edge is the arc of `curve` from `points[pos]` to `points[pos + 1]`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Edge {
    pub curve: CurveId,
    pub pos: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Region {
    /// Cyclic boundary word, faces traversed with the region on the left.
    pub word: Vec<HalfEdge>,
    /// `corners[i]` sits between `word[i]` and `word[i+1]` (cyclically).
    pub corners: Vec<Corner>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum BasepointKind {
    W,
    Z,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct Basepoint {
    pub kind: BasepointKind,
    /// 1-based index: w_1..w_n / z_1..z_n.
    pub index: usize,
}

impl std::fmt::Display for Basepoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            BasepointKind::W => write!(f, "w{}", self.index),
            BasepointKind::Z => write!(f, "z{}", self.index),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    pub points: Vec<Point>,
    pub curves: Vec<Curve>,
    pub regions: Vec<Region>,
    pub basepoints: BTreeMap<RegionId, Basepoint>,
    edges: Vec<Edge>,
    edge_offsets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("point {0:?} references curve data inconsistently: {1}")]
    PointCurveMismatch(PointId, String),
    #[error("curve {0:?} is empty")]
    EmptyCurve(CurveId),
    #[error("edge {0:?} appears {plus} times with + and {minus} times with - (expected once each)", plus = .1, minus = .2)]
    EdgeSideCount(EdgeId, usize, usize),
    #[error("point {0:?} has corner quadrant multiset {1:?} (expected each quadrant once)")]
    CornerQuadrants(PointId, Vec<(Quadrant, usize)>),
    #[error("region {0:?} boundary word does not alternate alpha and beta edges")]
    Alternation(RegionId),
    #[error("region {0:?} corner list disagrees with its boundary word: {1}")]
    WordCornerMismatch(RegionId, String),
    #[error("region {0:?} has an empty boundary word")]
    EmptyRegion(RegionId),
    #[error("curve counts alpha={alpha} beta={beta} do not satisfy alpha = beta = g + n - 1 with g={genus}, n={n}")]
    CurveCount {
        alpha: usize,
        beta: usize,
        genus: i64,
        n: usize,
    },
    #[error("Euler characteristic {chi} is not of the form 2 - 2g")]
    BadEuler { chi: i64 },
    #[error("basepoint labels are not exactly w1..wn, z1..zn: {0}")]
    BasepointLabels(String),
    #[error("complement component of the {kind:?} curves contains basepoints {found:?} (expected one w and one z)")]
    ComponentBasepoints {
        kind: CurveKind,
        found: Vec<String>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub points: usize,
    pub edges: usize,
    pub regions: usize,
    pub euler_characteristic: i64,
    pub genus: Option<u32>,
    pub basepoint_pairs: usize,
    #[serde(serialize_with = "serialize_violations")]
    pub violations: Vec<Violation>,
}

fn serialize_violations<S: serde::Serializer>(
    v: &[Violation],
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("invalid diagram: {}", .0.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(ValidationReport),
    #[error("{0}")]
    Construction(String),
}

impl Diagram {
    /// Assembles a diagram without validating. Callers that construct
    /// diagrams from scratch should follow with [`Diagram::validate`].
    pub fn new_unchecked(
        points: Vec<Point>,
        curves: Vec<Curve>,
        regions: Vec<Region>,
        basepoints: BTreeMap<RegionId, Basepoint>,
    ) -> Diagram {
        let mut edges = Vec::new();
        let mut edge_offsets = Vec::with_capacity(curves.len());
        for (c, curve) in curves.iter().enumerate() {
            edge_offsets.push(edges.len());
            for pos in 0..curve.points.len() {
                edges.push(Edge {
                    curve: CurveId(c),
                    pos,
                });
            }
        }
        Diagram {
            points,
            curves,
            regions,
            basepoints,
            edges,
            edge_offsets,
        }
    }

    pub fn validated(
        points: Vec<Point>,
        curves: Vec<Curve>,
        regions: Vec<Region>,
        basepoints: BTreeMap<RegionId, Basepoint>,
    ) -> Result<Diagram, DiagramError> {
        let d = Self::new_unchecked(points, curves, regions, basepoints);
        let report = d.validate();
        if report.is_valid() {
            Ok(d)
        } else {
            Err(DiagramError::Invalid(report))
        }
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_regions(&self) -> usize {
        self.regions.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e.0]
    }

    pub fn edge_id(&self, curve: CurveId, pos: usize) -> EdgeId {
        EdgeId(self.edge_offsets[curve.0] + pos)
    }

    pub fn curve(&self, c: CurveId) -> &Curve {
        &self.curves[c.0]
    }

    pub fn point(&self, p: PointId) -> Point {
        self.points[p.0]
    }

    pub fn edge_tail(&self, e: EdgeId) -> PointId {
        let Edge { curve, pos } = self.edge(e);
        self.curves[curve.0].points[pos]
    }

    pub fn edge_head(&self, e: EdgeId) -> PointId {
        let Edge { curve, pos } = self.edge(e);
        let pts = &self.curves[curve.0].points;
        pts[(pos + 1) % pts.len()]
    }

    pub fn half_edge_start(&self, h: HalfEdge) -> PointId {
        match h.dir {
            Dir::Plus => self.edge_tail(h.edge),
            Dir::Minus => self.edge_head(h.edge),
        }
    }

    pub fn half_edge_end(&self, h: HalfEdge) -> PointId {
        match h.dir {
            Dir::Plus => self.edge_head(h.edge),
            Dir::Minus => self.edge_tail(h.edge),
        }
    }

    pub fn edge_kind(&self, e: EdgeId) -> CurveKind {
        self.curves[self.edge(e).curve.0].kind
    }

    pub fn alpha_curves(&self) -> impl Iterator<Item = CurveId> + '_ {
        (0..self.curves.len())
            .map(CurveId)
            .filter(|&c| self.curves[c.0].kind == CurveKind::Alpha)
    }

    pub fn beta_curves(&self) -> impl Iterator<Item = CurveId> + '_ {
        (0..self.curves.len())
            .map(CurveId)
            .filter(|&c| self.curves[c.0].kind == CurveKind::Beta)
    }

    /// The four outgoing half-edge "slots" at a point, in the order
    /// East (alpha out), North (beta out), West (alpha in, reversed),
    /// South (beta in, reversed).
    pub fn slots(&self, p: PointId) -> PointSlots {
        let pt = self.point(p);
        let alen = self.curves[pt.alpha.0].points.len();
        let blen = self.curves[pt.beta.0].points.len();
        PointSlots {
            east: self.edge_id(pt.alpha, pt.alpha_pos),
            west: self.edge_id(pt.alpha, (pt.alpha_pos + alen - 1) % alen),
            north: self.edge_id(pt.beta, pt.beta_pos),
            south: self.edge_id(pt.beta, (pt.beta_pos + blen - 1) % blen),
        }
    }

    /// Returns the number of basepoint pairs n (checked equal counts by
    /// validation).
    pub fn n_pairs(&self) -> usize {
        self.basepoints
            .values()
            .filter(|b| b.kind == BasepointKind::W)
            .count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_points() as i64 - self.num_edges() as i64 + self.num_regions() as i64
    }

    pub fn genus(&self) -> Option<u32> {
        let chi = self.euler_characteristic();
        if chi > 2 || (chi - 2) % 2 != 0 {
            return None;
        }
        u32::try_from((2 - chi) / 2).ok()
    }

    /// Derives the corner list of a boundary word, or explains why the word
    /// is not locally consistent. The corner between two consecutive
    /// half-edges is labeled by the pair of slots meeting there.
    pub fn derive_corners(&self, word: &[HalfEdge]) -> Result<Vec<Corner>, String> {
        let mut corners = Vec::with_capacity(word.len());
        for (i, h) in word.iter().enumerate() {
            let next = &word[(i + 1) % word.len()];
            let v = self.half_edge_end(*h);
            if self.half_edge_start(*next) != v {
                return Err(format!(
                    "word position {i}: edge ends at point {} but the next edge starts at {}",
                    v.0,
                    self.half_edge_start(*next).0
                ));
            }
            let slots = self.slots(v);
            // slot of the reversed incoming half-edge at v
            let rev = HalfEdge {
                edge: h.edge,
                dir: h.dir.flip(),
            };
            let rev_slot = slots.classify(rev, self, v).ok_or_else(|| {
                format!("word position {i}: edge does not pass through point {}", v.0)
            })?;
            let out_slot = slots.classify(*next, self, v).ok_or_else(|| {
                format!(
                    "word position {i}: next edge does not start at point {}",
                    v.0
                )
            })?;
            let quadrant = match (rev_slot.axis(), out_slot.axis()) {
                (Axis::Alpha, Axis::Alpha) | (Axis::Beta, Axis::Beta) => {
                    return Err(format!(
                        "word position {i}: consecutive edges at point {} lie on the same curve type",
                        v.0
                    ))
                }
                _ => Slot::quadrant_between(rev_slot, out_slot),
            };
            corners.push(Corner {
                point: v,
                quadrant,
            });
        }
        Ok(corners)
    }

    /// Full structural validation; lists every violated clause.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        for (c, curve) in self.curves.iter().enumerate() {
            if curve.points.is_empty() {
                violations.push(Violation::EmptyCurve(CurveId(c)));
            }
        }

        // point <-> curve incidence
        for (i, pt) in self.points.iter().enumerate() {
            let pid = PointId(i);
            for (cid, pos, kind) in [
                (pt.alpha, pt.alpha_pos, CurveKind::Alpha),
                (pt.beta, pt.beta_pos, CurveKind::Beta),
            ] {
                match self.curves.get(cid.0) {
                    None => violations.push(Violation::PointCurveMismatch(
                        pid,
                        format!("curve id {} out of range", cid.0),
                    )),
                    Some(curve) => {
                        if curve.kind != kind {
                            violations.push(Violation::PointCurveMismatch(
                                pid,
                                format!("curve {} has the wrong kind", curve.name),
                            ));
                        } else if curve.points.get(pos) != Some(&pid) {
                            violations.push(Violation::PointCurveMismatch(
                                pid,
                                format!("position {pos} on curve {} holds another point", curve.name),
                            ));
                        }
                    }
                }
            }
        }
        // every curve position refers back to the point
        for (c, curve) in self.curves.iter().enumerate() {
            for (pos, &pid) in curve.points.iter().enumerate() {
                let Some(pt) = self.points.get(pid.0) else {
                    violations.push(Violation::PointCurveMismatch(
                        pid,
                        format!("curve {} references a missing point", curve.name),
                    ));
                    continue;
                };
                let ok = match curve.kind {
                    CurveKind::Alpha => pt.alpha == CurveId(c) && pt.alpha_pos == pos,
                    CurveKind::Beta => pt.beta == CurveId(c) && pt.beta_pos == pos,
                };
                if !ok {
                    violations.push(Violation::PointCurveMismatch(
                        pid,
                        format!(
                            "listed at position {pos} of curve {} but does not point back",
                            curve.name
                        ),
                    ));
                }
            }
        }
        if !violations.is_empty() {
            // incidence is broken; the remaining checks would index out of
            // bounds or produce noise
            return self.report_with(violations);
        }

        // edge side counts
        let mut plus = vec![0usize; self.num_edges()];
        let mut minus = vec![0usize; self.num_edges()];
        for region in &self.regions {
            for h in &region.word {
                match h.dir {
                    Dir::Plus => plus[h.edge.0] += 1,
                    Dir::Minus => minus[h.edge.0] += 1,
                }
            }
        }
        for e in 0..self.num_edges() {
            if plus[e] != 1 || minus[e] != 1 {
                violations.push(Violation::EdgeSideCount(EdgeId(e), plus[e], minus[e]));
            }
        }

        // region words: nonempty, alternating, corners consistent
        for (r, region) in self.regions.iter().enumerate() {
            let rid = RegionId(r);
            if region.word.is_empty() {
                violations.push(Violation::EmptyRegion(rid));
                continue;
            }
            let alternates = region
                .word
                .iter()
                .zip(region.word.iter().cycle().skip(1))
                .all(|(a, b)| self.edge_kind(a.edge) != self.edge_kind(b.edge));
            if !alternates {
                violations.push(Violation::Alternation(rid));
                continue;
            }
            match self.derive_corners(&region.word) {
                Err(msg) => violations.push(Violation::WordCornerMismatch(rid, msg)),
                Ok(expected) => {
                    if expected != region.corners {
                        violations.push(Violation::WordCornerMismatch(
                            rid,
                            "stored corner list differs from the one derived from the word"
                                .to_string(),
                        ));
                    }
                }
            }
        }

        // each point sees each quadrant exactly once
        let mut quad_count: Vec<BTreeMap<Quadrant, usize>> =
            vec![BTreeMap::new(); self.num_points()];
        for region in &self.regions {
            for corner in &region.corners {
                *quad_count[corner.point.0]
                    .entry(corner.quadrant)
                    .or_insert(0) += 1;
            }
        }
        for (p, counts) in quad_count.iter().enumerate() {
            let ok = QUADRANTS.iter().all(|q| counts.get(q) == Some(&1));
            if !ok {
                violations.push(Violation::CornerQuadrants(
                    PointId(p),
                    counts.iter().map(|(&q, &c)| (q, c)).collect(),
                ));
            }
        }

        // basepoint labels: w1..wn and z1..zn exactly once each
        let mut w_indices: Vec<usize> = Vec::new();
        let mut z_indices: Vec<usize> = Vec::new();
        for bp in self.basepoints.values() {
            match bp.kind {
                BasepointKind::W => w_indices.push(bp.index),
                BasepointKind::Z => z_indices.push(bp.index),
            }
        }
        w_indices.sort_unstable();
        z_indices.sort_unstable();
        let n = w_indices.len();
        let expected: Vec<usize> = (1..=n).collect();
        if w_indices != expected || z_indices != expected || n == 0 {
            violations.push(Violation::BasepointLabels(format!(
                "w indices {w_indices:?}, z indices {z_indices:?}"
            )));
        }
        for &rid in self.basepoints.keys() {
            if rid.0 >= self.num_regions() {
                violations.push(Violation::BasepointLabels(format!(
                    "basepoint region {} out of range",
                    rid.0
                )));
            }
        }

        // genus and curve counts
        let chi = self.euler_characteristic();
        match self.genus() {
            None => violations.push(Violation::BadEuler { chi }),
            Some(g) => {
                let alpha = self.alpha_curves().count();
                let beta = self.beta_curves().count();
                let want = g as i64 + n as i64 - 1;
                if alpha as i64 != want || beta as i64 != want {
                    violations.push(Violation::CurveCount {
                        alpha,
                        beta,
                        genus: g as i64,
                        n,
                    });
                }
            }
        }

        // complement components: merging across the other kind's edges
        if violations.is_empty() {
            for kind in [CurveKind::Alpha, CurveKind::Beta] {
                for comp in self.complement_components(kind) {
                    let mut found: Vec<Basepoint> = comp
                        .iter()
                        .filter_map(|rid| self.basepoints.get(rid).copied())
                        .collect();
                    found.sort();
                    let ok = found.len() == 2
                        && found[0].kind == BasepointKind::W
                        && found[1].kind == BasepointKind::Z;
                    if !ok {
                        violations.push(Violation::ComponentBasepoints {
                            kind,
                            found: found.iter().map(|b| b.to_string()).collect(),
                        });
                    }
                }
            }
        }

        self.report_with(violations)
    }

    fn report_with(&self, violations: Vec<Violation>) -> ValidationReport {
        ValidationReport {
            points: self.num_points(),
            edges: self.num_edges(),
            regions: self.num_regions(),
            euler_characteristic: self.euler_characteristic(),
            genus: self.genus(),
            basepoint_pairs: self.n_pairs(),
            violations,
        }
    }

    /// Components of the complement of the `kind` curves: regions merged
    /// across every edge of the other kind.
    pub fn complement_components(&self, kind: CurveKind) -> Vec<Vec<RegionId>> {
        let mut parent: Vec<usize> = (0..self.num_regions()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        let mut left = vec![usize::MAX; self.num_edges()];
        let mut right = vec![usize::MAX; self.num_edges()];
        for (r, region) in self.regions.iter().enumerate() {
            for h in &region.word {
                match h.dir {
                    Dir::Plus => left[h.edge.0] = r,
                    Dir::Minus => right[h.edge.0] = r,
                }
            }
        }
        for e in 0..self.num_edges() {
            if self.edge_kind(EdgeId(e)) != kind && left[e] != usize::MAX && right[e] != usize::MAX
            {
                let (a, b) = (find(&mut parent, left[e]), find(&mut parent, right[e]));
                parent[a] = b;
            }
        }
        let mut comps: BTreeMap<usize, Vec<RegionId>> = BTreeMap::new();
        for r in 0..self.num_regions() {
            let root = find(&mut parent, r);
            comps.entry(root).or_default().push(RegionId(r));
        }
        comps.into_values().collect()
    }

    /// The region on the left of the edge (the one whose word contains the
    /// `+` side) and on the right (`-` side).
    pub fn edge_sides(&self) -> Vec<(RegionId, RegionId)> {
        let mut left = vec![usize::MAX; self.num_edges()];
        let mut right = vec![usize::MAX; self.num_edges()];
        for (r, region) in self.regions.iter().enumerate() {
            for h in &region.word {
                match h.dir {
                    Dir::Plus => left[h.edge.0] = r,
                    Dir::Minus => right[h.edge.0] = r,
                }
            }
        }
        (0..self.num_edges())
            .map(|e| (RegionId(left[e]), RegionId(right[e])))
            .collect()
    }

    /// Map (point, quadrant) -> region holding that corner. Total on valid
    /// diagrams.
    pub fn corner_regions(&self) -> BTreeMap<(PointId, Quadrant), RegionId> {
        let mut map = BTreeMap::new();
        for (r, region) in self.regions.iter().enumerate() {
            for corner in &region.corners {
                map.insert((corner.point, corner.quadrant), RegionId(r));
            }
        }
        map
    }

    /// Nice in the Sarkar-Wang sense: every region without a basepoint is a
    /// bigon or a square. Returns the offending regions otherwise.
    pub fn is_nice(&self) -> (bool, Vec<RegionId>) {
        let mut offending = Vec::new();
        for (r, region) in self.regions.iter().enumerate() {
            let rid = RegionId(r);
            if self.basepoints.contains_key(&rid) {
                continue;
            }
            if region.corners.len() != 2 && region.corners.len() != 4 {
                offending.push(rid);
            }
        }
        (offending.is_empty(), offending)
    }

    /// Weak admissibility: no nonzero basepoint-avoiding periodic domain
    /// with all multiplicities >= 0. `max_coeff` overrides the per-coordinate
    /// search bound (defaults to the number of regions).
    pub fn is_weakly_admissible(&self, max_coeff: Option<i64>) -> bool {
        jump::pointed_lattice_is_admissible(self, max_coeff)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PointSlots {
    pub east: EdgeId,
    pub west: EdgeId,
    pub north: EdgeId,
    pub south: EdgeId,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Slot {
    East,
    West,
    North,
    South,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axis {
    Alpha,
    Beta,
}

impl Slot {
    pub fn axis(self) -> Axis {
        match self {
            Slot::East | Slot::West => Axis::Alpha,
            Slot::North | Slot::South => Axis::Beta,
        }
    }

    /// Quadrant bounded by the two rays, one on each axis.
    pub fn quadrant_between(a: Slot, b: Slot) -> Quadrant {
        let (alpha, beta) = match a.axis() {
            Axis::Alpha => (a, b),
            Axis::Beta => (b, a),
        };
        match (alpha, beta) {
            (Slot::East, Slot::North) => Quadrant::NE,
            (Slot::West, Slot::North) => Quadrant::NW,
            (Slot::West, Slot::South) => Quadrant::SW,
            (Slot::East, Slot::South) => Quadrant::SE,
            _ => unreachable!("axes were split above"),
        }
    }
}

impl PointSlots {
    /// Which outgoing slot of the point this half-edge occupies, if any.
    pub fn classify(&self, h: HalfEdge, d: &Diagram, at: PointId) -> Option<Slot> {
        if d.half_edge_start(h) != at {
            return None;
        }
        match (h.edge, h.dir) {
            (e, Dir::Plus) if e == self.east => Some(Slot::East),
            (e, Dir::Minus) if e == self.west => Some(Slot::West),
            (e, Dir::Plus) if e == self.north => Some(Slot::North),
            (e, Dir::Minus) if e == self.south => Some(Slot::South),
            _ => None,
        }
    }
}
