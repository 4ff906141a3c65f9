//! Genus-zero bridge diagrams of two-bridge knots b(p, q).
//!
//! The construction works upstairs first: on the unit torus take two
//! horizontal lines and two lines of class (q, p), chosen symmetric under
//! the elliptic involution v -> -v and avoiding the four half-integer
//! points. Straight-line arrangements only produce bigons and squares, so
//! the quotient by the involution is a nice, weakly admissible four-pointed
//! diagram on the pillowcase sphere; each half-integer point becomes a
//! basepoint. The lens-space picture upstairs is recovered later by the
//! generic branched-cover lift.

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

use super::{
    Basepoint, BasepointKind, Curve, CurveId, CurveKind, Diagram, DiagramError, Dir, EdgeId,
    HalfEdge, Point, PointId, Region, RegionId,
};

type Rat = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BridgeSpec {
    pub p: i64,
    pub q: i64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BridgeError {
    #[error("p must be an odd positive integer, got {0}")]
    BadP(i64),
    #[error("q must satisfy 0 < q < p (or q = p = 1), got q = {0}")]
    BadQ(i64),
    #[error("p and q must be coprime: gcd({0}, {1}) != 1")]
    NotCoprime(i64, i64),
}

impl BridgeSpec {
    pub fn new(p: i64, q: i64) -> Result<BridgeSpec, BridgeError> {
        if p <= 0 || p % 2 == 0 {
            return Err(BridgeError::BadP(p));
        }
        if !(0 < q && (q < p || (p == 1 && q == 1))) {
            return Err(BridgeError::BadQ(q));
        }
        if gcd(p, q) != 1 {
            return Err(BridgeError::NotCoprime(p, q));
        }
        Ok(BridgeSpec { p, q })
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn fract(x: Rat) -> Rat {
    x - x.floor()
}

/// Cells of the line arrangement upstairs, before taking the quotient.
struct Arrangement {
    diagram: Diagram, // regions empty; used for slot bookkeeping
    faces: Vec<Vec<HalfEdge>>,
    /// face index per half-edge (edge id, dir as 0/1)
    face_of: BTreeMap<(usize, Dir), usize>,
    /// torsion point index (0..4) -> face index
    torsion_faces: Vec<usize>,
    sigma_point: Vec<usize>,
    sigma_edge: Vec<usize>,
}

const A1: usize = 0;
const A2: usize = 1;
const B1: usize = 2;
const B2: usize = 3;

/// Half-integer points of the torus, in the fixed order used for labeling.
fn torsion_points() -> [(Rat, Rat); 4] {
    let h = Rat::new(1, 2);
    let z = Rat::from_integer(0);
    [(z, z), (h, z), (z, h), (h, h)]
}

fn build_arrangement(p: i64, q: i64, a0: Rat, c0: Rat) -> Result<Arrangement, String> {
    let pr = Rat::from_integer(p);
    let qr = Rat::from_integer(q);
    let a_levels = [a0, fract(-a0)];
    let b_values = [c0, fract(-c0)];
    if a_levels[0] == a_levels[1] || b_values[0] == b_values[1] {
        return Err("offsets collide with their own mirror".into());
    }
    for (tx, ty) in torsion_points() {
        if a_levels.contains(&ty) {
            return Err("torsion point lies on a horizontal line".into());
        }
        if b_values.contains(&fract(pr * tx - qr * ty)) {
            return Err("torsion point lies on a sloped line".into());
        }
    }

    // vertices: on level a, the line with value c crosses at
    // x = (c + q a + k)/p for k = 0..p-1
    #[derive(Clone, Copy)]
    struct Vert {
        x: Rat,
        y: Rat,
        a_curve: usize,
        b_curve: usize,
    }
    let mut verts: Vec<Vert> = Vec::new();
    for (ai, &a) in a_levels.iter().enumerate() {
        for (bi, &c) in b_values.iter().enumerate() {
            for k in 0..p {
                let x = fract((c + qr * a + Rat::from_integer(k)) / pr);
                verts.push(Vert {
                    x,
                    y: a,
                    a_curve: ai,
                    b_curve: B1 + bi,
                });
            }
        }
    }
    let mut coord_index: BTreeMap<(Rat, Rat), usize> = BTreeMap::new();
    for (i, v) in verts.iter().enumerate() {
        if coord_index.insert((v.x, v.y), i).is_some() {
            return Err("coincident intersection points".into());
        }
    }

    // cyclic orders: A-curves by x; B-curves by parameter t with
    // (x, y) = (c/p + q t, p t) so t is recovered from (x, y) exactly.
    let b_param = |v: &Vert| -> Result<Rat, String> {
        let c = b_values[v.b_curve - B1];
        for j in 0..p {
            let t = (fract(v.y) + Rat::from_integer(j)) / pr;
            if fract(c / pr + qr * t) == v.x && fract(pr * t) == v.y {
                return Ok(t);
            }
        }
        Err("point not on its sloped line".into())
    };
    let mut order_a: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut order_b: [Vec<(Rat, usize)>; 2] = [Vec::new(), Vec::new()];
    for (i, v) in verts.iter().enumerate() {
        order_a[v.a_curve].push(i);
        order_b[v.b_curve - B1].push((b_param(v)?, i));
    }
    for list in &mut order_a {
        list.sort_by_key(|&i| verts[i].x);
    }
    for list in &mut order_b {
        list.sort();
        let mut seen = None;
        for (t, _) in list.iter() {
            if seen == Some(*t) {
                return Err("repeated parameter on a sloped line".into());
            }
            seen = Some(*t);
        }
    }

    // assemble the skeleton diagram (regions come from the traversal below)
    let mut points = vec![
        Point {
            alpha: CurveId(0),
            alpha_pos: 0,
            beta: CurveId(0),
            beta_pos: 0,
        };
        verts.len()
    ];
    for (ci, list) in order_a.iter().enumerate() {
        for (pos, &i) in list.iter().enumerate() {
            points[i].alpha = CurveId(ci);
            points[i].alpha_pos = pos;
        }
    }
    for (ci, list) in order_b.iter().enumerate() {
        for (pos, &(_, i)) in list.iter().enumerate() {
            points[i].beta = CurveId(B1 + ci);
            points[i].beta_pos = pos;
        }
    }
    let curves = vec![
        Curve {
            kind: CurveKind::Alpha,
            name: "A1".into(),
            points: order_a[0].iter().map(|&i| PointId(i)).collect(),
        },
        Curve {
            kind: CurveKind::Alpha,
            name: "A2".into(),
            points: order_a[1].iter().map(|&i| PointId(i)).collect(),
        },
        Curve {
            kind: CurveKind::Beta,
            name: "B1".into(),
            points: order_b[0].iter().map(|&(_, i)| PointId(i)).collect(),
        },
        Curve {
            kind: CurveKind::Beta,
            name: "B2".into(),
            points: order_b[1].iter().map(|&(_, i)| PointId(i)).collect(),
        },
    ];
    let diagram = Diagram::new_unchecked(points, curves, Vec::new(), BTreeMap::new());

    // face traversal; every crossing here is positively oriented (the sloped
    // direction (q, p) points into the upper half plane), so the next
    // half-edge turns clockwise through the slot cycle E -> S -> W -> N
    let next_half_edge = |h: HalfEdge| -> HalfEdge {
        let v = diagram.half_edge_end(h);
        let slots = diagram.slots(v);
        let rev = HalfEdge {
            edge: h.edge,
            dir: h.dir.flip(),
        };
        let slot = slots
            .classify(rev, &diagram, v)
            .expect("half-edge must reverse into a slot");
        match slot {
            super::Slot::East => HalfEdge {
                edge: slots.south,
                dir: Dir::Minus,
            },
            super::Slot::South => HalfEdge {
                edge: slots.west,
                dir: Dir::Minus,
            },
            super::Slot::West => HalfEdge {
                edge: slots.north,
                dir: Dir::Plus,
            },
            super::Slot::North => HalfEdge {
                edge: slots.east,
                dir: Dir::Plus,
            },
        }
    };
    let mut face_of: BTreeMap<(usize, Dir), usize> = BTreeMap::new();
    let mut faces: Vec<Vec<HalfEdge>> = Vec::new();
    for e in 0..diagram.num_edges() {
        for dir in [Dir::Plus, Dir::Minus] {
            if face_of.contains_key(&(e, dir)) {
                continue;
            }
            let start = HalfEdge {
                edge: EdgeId(e),
                dir,
            };
            let idx = faces.len();
            let mut cycle = Vec::new();
            let mut h = start;
            loop {
                face_of.insert((h.edge.0, h.dir), idx);
                cycle.push(h);
                h = next_half_edge(h);
                if h == start {
                    break;
                }
            }
            faces.push(cycle);
        }
    }
    let (v_count, e_count, f_count) = (verts.len(), diagram.num_edges(), faces.len());
    if v_count as i64 - e_count as i64 + f_count as i64 != 0 {
        return Err(format!(
            "arrangement is not a torus decomposition: V={v_count} E={e_count} F={f_count}"
        ));
    }

    // locate the face under each torsion point by shooting a vertical ray up
    let mut torsion_faces = Vec::new();
    for (tx, ty) in torsion_points() {
        let mut best: Option<(Rat, usize, Rat)> = None; // (dy, curve, hit coordinate info)
        let mut tie = false;
        for (ci, &a) in a_levels.iter().enumerate() {
            let dy = fract(a - ty);
            match &best {
                Some((b, _, _)) if *b == dy => tie = true,
                Some((b, _, _)) if *b < dy => {}
                _ => {
                    best = Some((dy, ci, a));
                    tie = false;
                }
            }
        }
        for (bi, &c) in b_values.iter().enumerate() {
            for k in 0..q {
                let y = fract((pr * tx - c - Rat::from_integer(k)) / qr);
                let dy = fract(y - ty);
                if dy == Rat::from_integer(0) {
                    return Err("torsion point lies on a sloped line (ray)".into());
                }
                match &best {
                    Some((b, _, _)) if *b == dy => tie = true,
                    Some((b, _, _)) if *b < dy => {}
                    _ => {
                        best = Some((dy, B1 + bi, y));
                        tie = false;
                    }
                }
            }
        }
        let (dy, curve, level_or_y) = best.expect("some curve is hit");
        if tie {
            return Err("ray from torsion point hits two curves at once".into());
        }
        let hit_y = fract(ty + dy);
        let hit = (tx, hit_y);
        if coord_index.contains_key(&hit) {
            return Err("ray from torsion point hits a vertex".into());
        }
        let _ = level_or_y;
        // the edge containing the hit: walk the curve's cyclic order
        let edge = if curve < B1 {
            // horizontal: position of the last vertex with x <= tx
            let list = &diagram.curve(CurveId(curve)).points;
            let pos = (0..list.len())
                .filter(|&i| verts[list[i].0].x <= tx)
                .max_by_key(|&i| verts[list[i].0].x)
                .unwrap_or(list.len() - 1);
            diagram.edge_id(CurveId(curve), pos)
        } else {
            // sloped: recover the parameter of the hit and take the last
            // vertex parameter at or below it
            let c = b_values[curve - B1];
            let mut t_hit = None;
            for j in 0..p {
                let t = (hit_y + Rat::from_integer(j)) / pr;
                if fract(c / pr + qr * t) == tx && fract(pr * t) == hit_y {
                    t_hit = Some(t);
                    break;
                }
            }
            let t_hit = t_hit.ok_or("ray hit is not on the sloped line")?;
            let params = &order_b[curve - B1];
            let pos = (0..params.len())
                .filter(|&i| params[i].0 <= t_hit)
                .max_by_key(|&i| params[i].0)
                .unwrap_or(params.len() - 1);
            diagram.edge_id(CurveId(curve), pos)
        };
        // approaching from below we land on the right of the + direction
        torsion_faces.push(face_of[&(edge.0, Dir::Minus)]);
    }
    {
        let mut sorted = torsion_faces.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != 4 {
            return Err("two torsion points share a face".into());
        }
    }

    // the involution on cells
    let mut sigma_point = vec![usize::MAX; verts.len()];
    for (i, v) in verts.iter().enumerate() {
        let key = (fract(-v.x), fract(-v.y));
        sigma_point[i] = *coord_index
            .get(&key)
            .ok_or("vertex set is not symmetric")?;
    }
    let mut sigma_edge = vec![usize::MAX; diagram.num_edges()];
    for e in 0..diagram.num_edges() {
        let edge = diagram.edge(EdgeId(e));
        let tail = diagram.edge_tail(EdgeId(e));
        let head = diagram.edge_head(EdgeId(e));
        let sc = match edge.curve.0 {
            A1 => A2,
            A2 => A1,
            B1 => B2,
            _ => B1,
        };
        let s_head = sigma_point[head.0];
        // sigma reverses curve orientation: the image edge starts at sigma(head)
        let pos = match diagram.curve(CurveId(sc)).kind {
            CurveKind::Alpha => diagram.points[s_head].alpha_pos,
            CurveKind::Beta => diagram.points[s_head].beta_pos,
        };
        let cand = diagram.edge_id(CurveId(sc), pos);
        if diagram.edge_head(cand) != PointId(sigma_point[tail.0]) {
            return Err("involution does not map edges to edges".into());
        }
        sigma_edge[e] = cand.0;
    }

    Ok(Arrangement {
        diagram,
        faces,
        face_of,
        torsion_faces,
        sigma_point,
        sigma_edge,
    })
}

impl Arrangement {
    fn sigma_half_edge(&self, h: HalfEdge) -> HalfEdge {
        HalfEdge {
            edge: EdgeId(self.sigma_edge[h.edge.0]),
            dir: h.dir.flip(),
        }
    }

    fn sigma_face(&self, f: usize) -> usize {
        let h = self.sigma_half_edge(self.faces[f][0]);
        self.face_of[&(h.edge.0, h.dir)]
    }
}

/// Quotient of the arrangement by the involution; returns the base diagram
/// with its four branch faces marked but not yet labeled.
fn quotient(arr: &Arrangement) -> Result<(Diagram, Vec<RegionId>), String> {
    let up = &arr.diagram;
    let a1_len = up.curve(CurveId(A1)).points.len();
    // base points = A1's vertices, in A1 cyclic order; each orbit has one
    // member on A1 and one on A2
    let a1_list: Vec<PointId> = up.curve(CurveId(A1)).points.clone();
    let mut base_index_of_up: BTreeMap<usize, usize> = BTreeMap::new();
    for (base_idx, &pid) in a1_list.iter().enumerate() {
        base_index_of_up.insert(pid.0, base_idx);
        base_index_of_up.insert(arr.sigma_point[pid.0], base_idx);
    }

    // base beta order from B1: each orbit has exactly one member on B1
    let b1_list: Vec<PointId> = up.curve(CurveId(B1)).points.clone();
    if a1_list.len() != b1_list.len() {
        return Err("curve lengths disagree after quotient".into());
    }
    let mut base_points = vec![
        Point {
            alpha: CurveId(0),
            alpha_pos: 0,
            beta: CurveId(1),
            beta_pos: 0,
        };
        a1_len
    ];
    for (pos, &pid) in a1_list.iter().enumerate() {
        base_points[pos].alpha_pos = pos;
        let _ = pid;
    }
    for (pos, &pid) in b1_list.iter().enumerate() {
        let base_idx = *base_index_of_up
            .get(&pid.0)
            .ok_or("B1 vertex missing from orbit table")?;
        base_points[base_idx].beta_pos = pos;
    }
    let base_alpha: Vec<PointId> = (0..a1_len).map(PointId).collect();
    let mut base_beta = vec![PointId(usize::MAX); a1_len];
    for (pos, &pid) in b1_list.iter().enumerate() {
        base_beta[pos] = PointId(base_index_of_up[&pid.0]);
    }
    let base_curves = vec![
        Curve {
            kind: CurveKind::Alpha,
            name: "a0".into(),
            points: base_alpha,
        },
        Curve {
            kind: CurveKind::Beta,
            name: "b0".into(),
            points: base_beta,
        },
    ];

    // downstairs edge ids: alpha edges 0..2p, then beta edges
    let up_edge_to_base = |e: usize| -> (usize, Dir) {
        let edge = up.edge(EdgeId(e));
        match edge.curve.0 {
            A1 => (edge.pos, Dir::Plus),
            B1 => (a1_len + edge.pos, Dir::Plus),
            _ => {
                let rep = arr.sigma_edge[e];
                let rep_edge = up.edge(EdgeId(rep));
                let base = match rep_edge.curve.0 {
                    A1 => rep_edge.pos,
                    B1 => a1_len + rep_edge.pos,
                    _ => unreachable!("sigma pairs A2 with A1 and B2 with B1"),
                };
                (base, Dir::Minus)
            }
        }
    };
    let down_half_edge = |h: HalfEdge| -> HalfEdge {
        let (e, flip) = up_edge_to_base(h.edge.0);
        HalfEdge {
            edge: EdgeId(e),
            dir: if flip == Dir::Plus { h.dir } else { h.dir.flip() },
        }
    };

    // face orbits
    let skeleton = Diagram::new_unchecked(
        base_points.clone(),
        base_curves.clone(),
        Vec::new(),
        BTreeMap::new(),
    );
    let mut base_regions: Vec<Region> = Vec::new();
    let mut face_orbit_region: BTreeMap<usize, usize> = BTreeMap::new();
    let mut marked: Vec<RegionId> = Vec::new();
    for f in 0..arr.faces.len() {
        if face_orbit_region.contains_key(&f) {
            continue;
        }
        let sf = arr.sigma_face(f);
        let rid = base_regions.len();
        face_orbit_region.insert(f, rid);
        face_orbit_region.insert(sf, rid);
        let word_up = &arr.faces[f];
        let word: Vec<HalfEdge> = if sf == f {
            // branch face: the word is a double cover of its image
            let len = word_up.len();
            if len % 2 != 0 {
                return Err("branch face has odd boundary length".into());
            }
            let half = len / 2;
            let rotated: Vec<HalfEdge> = (0..len)
                .map(|i| arr.sigma_half_edge(word_up[(i + half) % len]))
                .collect();
            if rotated != *word_up {
                return Err("involution is not the half rotation on a branch face".into());
            }
            word_up[..half].iter().map(|&h| down_half_edge(h)).collect()
        } else {
            word_up.iter().map(|&h| down_half_edge(h)).collect()
        };
        let corners = skeleton.derive_corners(&word).map_err(|e| {
            format!("projected boundary word is not locally consistent: {e}")
        })?;
        base_regions.push(Region { word, corners });
    }
    for &tf in &arr.torsion_faces {
        marked.push(RegionId(face_orbit_region[&tf]));
    }

    let base = Diagram::new_unchecked(base_points, base_curves, base_regions, BTreeMap::new());
    Ok((base, marked))
}

/// Assigns w1, z1, w2, z2 to the four branch regions so that each side of
/// the alpha curve and of the beta curve carries one w and one z, and the
/// four connecting arcs close into a single knot. The region above the
/// torsion point (0,0) is w1 by convention.
fn label_basepoints(
    base: &Diagram,
    marked: &[RegionId],
) -> Result<BTreeMap<RegionId, Basepoint>, String> {
    let comp_of = |kind: CurveKind| -> BTreeMap<RegionId, usize> {
        let mut map = BTreeMap::new();
        for (i, comp) in base.complement_components(kind).into_iter().enumerate() {
            for r in comp {
                map.insert(r, i);
            }
        }
        map
    };
    let alpha_comp = comp_of(CurveKind::Alpha);
    let beta_comp = comp_of(CurveKind::Beta);
    let partner = |r: RegionId, comp: &BTreeMap<RegionId, usize>| -> Result<RegionId, String> {
        let mine = comp[&r];
        let others: Vec<RegionId> = marked
            .iter()
            .copied()
            .filter(|&m| m != r && comp[&m] == mine)
            .collect();
        match others.as_slice() {
            [one] => Ok(*one),
            _ => Err(format!(
                "branch region {} has {} partners on its side",
                r.0,
                others.len()
            )),
        }
    };
    // knot order: w1 -(beta side bridge)- z1 -(alpha side)- w2 - z2 - w1
    let w1 = marked[0];
    let z1 = partner(w1, &beta_comp)?;
    let w2 = partner(z1, &alpha_comp)?;
    let z2 = partner(w2, &beta_comp)?;
    if partner(z2, &alpha_comp)? != w1 {
        return Err("basepoint arcs do not close into a single knot".into());
    }
    let mut map = BTreeMap::new();
    for (r, kind, index) in [
        (w1, BasepointKind::W, 1),
        (z1, BasepointKind::Z, 1),
        (w2, BasepointKind::W, 2),
        (z2, BasepointKind::Z, 2),
    ] {
        map.insert(r, Basepoint { kind, index });
    }
    Ok(map)
}

/// Offset candidates tried in order until the arrangement is generic.
fn offset_candidates() -> Vec<(Rat, Rat)> {
    vec![
        (Rat::new(1, 5), Rat::new(1, 7)),
        (Rat::new(1, 11), Rat::new(1, 13)),
        (Rat::new(3, 11), Rat::new(2, 13)),
        (Rat::new(1, 17), Rat::new(3, 19)),
        (Rat::new(5, 17), Rat::new(4, 19)),
        (Rat::new(2, 23), Rat::new(5, 29)),
    ]
}

/// Builds the bridge-position diagram of b(p, q): one alpha curve, one beta
/// curve, four basepoints on the sphere.
pub fn two_bridge(spec: &BridgeSpec) -> Result<Diagram, DiagramError> {
    let mut last_err = String::new();
    for (a0, c0) in offset_candidates() {
        match try_build(spec, a0, c0) {
            Ok(d) => return Ok(d),
            Err(DiagramError::Construction(e)) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(DiagramError::Construction(format!(
        "no generic offsets found for b({}, {}): {last_err}",
        spec.p, spec.q
    )))
}

fn try_build(spec: &BridgeSpec, a0: Rat, c0: Rat) -> Result<Diagram, DiagramError> {
    let arr = build_arrangement(spec.p, spec.q, a0, c0).map_err(DiagramError::Construction)?;
    let (base, marked) = quotient(&arr).map_err(DiagramError::Construction)?;
    let basepoints = label_basepoints(&base, &marked).map_err(DiagramError::Construction)?;
    let d = Diagram::validated(
        base.points.clone(),
        base.curves.clone(),
        base.regions.clone(),
        basepoints,
    )?;
    let (nice, offending) = d.is_nice();
    if !nice {
        return Err(DiagramError::Construction(format!(
            "bridge diagram is not nice; offending regions {offending:?}"
        )));
    }
    if !d.is_weakly_admissible(None) {
        return Err(DiagramError::Construction(
            "bridge diagram is not weakly admissible".into(),
        ));
    }
    Ok(d)
}
