//! Line-oriented text format for diagrams.
//!
//! ```text
//! [curves]
//! alpha a0 : 0 1 2 3
//! beta  b0 : 2 3 0 1
//! [regions]
//! 0 : a0.0 + b0.2 - | corners: 1 NE 2 NW
//! [basepoints]
//! 0 = w1
//! ```
//!
//! Edges are referenced as `<curve>.<position>`. Covered diagrams append a
//! `[tau]` section pairing points, edges and regions under the involution.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{
    Basepoint, BasepointKind, Corner, Curve, CurveId, CurveKind, Diagram, DiagramError, Dir,
    HalfEdge, Point, PointId, Quadrant, Region, RegionId,
};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    At { line: usize, msg: String },
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Invalid(#[from] DiagramError),
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::At {
        line,
        msg: msg.into(),
    }
}

pub fn serialize_diagram(d: &Diagram) -> String {
    let mut out = String::new();
    out.push_str("[curves]\n");
    for curve in &d.curves {
        let kind = match curve.kind {
            CurveKind::Alpha => "alpha",
            CurveKind::Beta => "beta",
        };
        let pts: Vec<String> = curve.points.iter().map(|p| p.0.to_string()).collect();
        out.push_str(&format!("{kind} {} : {}\n", curve.name, pts.join(" ")));
    }
    out.push_str("[regions]\n");
    for (r, region) in d.regions.iter().enumerate() {
        let word: Vec<String> = region
            .word
            .iter()
            .map(|h| format!("{} {}", edge_ref(d, h.edge), dir_str(h.dir)))
            .collect();
        let corners: Vec<String> = region
            .corners
            .iter()
            .map(|c| format!("{} {}", c.point.0, quad_str(c.quadrant)))
            .collect();
        out.push_str(&format!(
            "{r} : {} | corners: {}\n",
            word.join(" "),
            corners.join(" ")
        ));
    }
    out.push_str("[basepoints]\n");
    for (rid, bp) in &d.basepoints {
        out.push_str(&format!("{} = {}\n", rid.0, bp));
    }
    out
}

pub fn edge_ref(d: &Diagram, e: super::EdgeId) -> String {
    let edge = d.edge(e);
    format!("{}.{}", d.curve(edge.curve).name, edge.pos)
}

fn dir_str(d: Dir) -> &'static str {
    match d {
        Dir::Plus => "+",
        Dir::Minus => "-",
    }
}

fn quad_str(q: Quadrant) -> &'static str {
    match q {
        Quadrant::NE => "NE",
        Quadrant::NW => "NW",
        Quadrant::SW => "SW",
        Quadrant::SE => "SE",
    }
}

fn parse_quad(s: &str) -> Option<Quadrant> {
    match s {
        "NE" => Some(Quadrant::NE),
        "NW" => Some(Quadrant::NW),
        "SW" => Some(Quadrant::SW),
        "SE" => Some(Quadrant::SE),
        _ => None,
    }
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum Section {
    None,
    Curves,
    Regions,
    Basepoints,
    Tau,
}

/// Parses and validates a diagram file. Point and region ids may be
/// arbitrary nonnegative integers; they are renumbered densely in order of
/// first appearance, so `parse(serialize(d)) == d`.
pub fn parse_diagram(text: &str) -> Result<Diagram, ParseError> {
    let mut section = Section::None;
    struct RawCurve {
        kind: CurveKind,
        name: String,
        points: Vec<usize>,
        line: usize,
    }
    let mut raw_curves: Vec<RawCurve> = Vec::new();
    let mut raw_regions: Vec<(usize, Vec<(String, Dir)>, Vec<(usize, Quadrant)>, usize)> =
        Vec::new();
    let mut raw_basepoints: Vec<(usize, Basepoint, usize)> = Vec::new();

    for (idx, rawline) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = rawline.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line {
            "[curves]" => {
                section = Section::Curves;
                continue;
            }
            "[regions]" => {
                section = Section::Regions;
                continue;
            }
            "[basepoints]" => {
                section = Section::Basepoints;
                continue;
            }
            "[tau]" => {
                section = Section::Tau;
                continue;
            }
            _ => {}
        }
        match section {
            Section::None => {
                return Err(err(lineno, "content before any section header"));
            }
            Section::Curves => {
                let (kind_str, rest) = line
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| err(lineno, "expected `alpha|beta <name> : <points>`"))?;
                let kind = match kind_str {
                    "alpha" => CurveKind::Alpha,
                    "beta" => CurveKind::Beta,
                    other => return Err(err(lineno, format!("unknown curve kind `{other}`"))),
                };
                let (name, pts) = rest
                    .split_once(':')
                    .ok_or_else(|| err(lineno, "missing `:` in curve line"))?;
                let points = pts
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse::<usize>()
                            .map_err(|e| err(lineno, format!("bad point id `{tok}`: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                raw_curves.push(RawCurve {
                    kind,
                    name: name.trim().to_string(),
                    points,
                    line: lineno,
                });
            }
            Section::Regions => {
                let (id_str, rest) = line
                    .split_once(':')
                    .ok_or_else(|| err(lineno, "missing `:` in region line"))?;
                let id: usize = id_str
                    .trim()
                    .parse()
                    .map_err(|e| err(lineno, format!("bad region id: {e}")))?;
                let (word_part, corner_part) = rest
                    .split_once('|')
                    .ok_or_else(|| err(lineno, "missing `| corners:` in region line"))?;
                let corner_part = corner_part
                    .trim()
                    .strip_prefix("corners:")
                    .ok_or_else(|| err(lineno, "expected `corners:` after `|`"))?;
                let toks: Vec<&str> = word_part.split_whitespace().collect();
                if toks.len() % 2 != 0 {
                    return Err(err(lineno, "boundary word must be (edge dir) pairs"));
                }
                let mut word = Vec::new();
                for pair in toks.chunks(2) {
                    let dir = match pair[1] {
                        "+" => Dir::Plus,
                        "-" => Dir::Minus,
                        other => {
                            return Err(err(lineno, format!("bad direction `{other}`")));
                        }
                    };
                    word.push((pair[0].to_string(), dir));
                }
                let ctoks: Vec<&str> = corner_part.split_whitespace().collect();
                if ctoks.len() % 2 != 0 {
                    return Err(err(lineno, "corners must be (point quadrant) pairs"));
                }
                let mut corners = Vec::new();
                for pair in ctoks.chunks(2) {
                    let pt: usize = pair[0]
                        .parse()
                        .map_err(|e| err(lineno, format!("bad corner point: {e}")))?;
                    let quad = parse_quad(pair[1])
                        .ok_or_else(|| err(lineno, format!("bad quadrant `{}`", pair[1])))?;
                    corners.push((pt, quad));
                }
                raw_regions.push((id, word, corners, lineno));
            }
            Section::Basepoints => {
                let (rid_str, label) = line
                    .split_once('=')
                    .ok_or_else(|| err(lineno, "missing `=` in basepoint line"))?;
                let rid: usize = rid_str
                    .trim()
                    .parse()
                    .map_err(|e| err(lineno, format!("bad region id: {e}")))?;
                let label = label.trim();
                let (kind, index_str) = match label.split_at(1) {
                    ("w", rest) => (BasepointKind::W, rest),
                    ("z", rest) => (BasepointKind::Z, rest),
                    _ => return Err(err(lineno, format!("bad basepoint label `{label}`"))),
                };
                let index: usize = index_str
                    .parse()
                    .map_err(|e| err(lineno, format!("bad basepoint index: {e}")))?;
                raw_basepoints.push((rid, Basepoint { kind, index }, lineno));
            }
            Section::Tau => {
                // involution data is an output-only annotation; accepted and
                // ignored on input
            }
        }
    }

    if raw_curves.is_empty() {
        return Err(ParseError::Structure("missing curves section".into()));
    }
    if raw_regions.is_empty() {
        return Err(ParseError::Structure("missing regions section".into()));
    }

    // renumber points densely in order of first appearance
    let mut point_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut order: Vec<usize> = Vec::new();
    for rc in &raw_curves {
        for &p in &rc.points {
            point_index.entry(p).or_insert_with(|| {
                order.push(p);
                order.len() - 1
            });
        }
    }
    let num_points = order.len();

    let mut points = vec![
        Point {
            alpha: CurveId(usize::MAX),
            alpha_pos: 0,
            beta: CurveId(usize::MAX),
            beta_pos: 0,
        };
        num_points
    ];
    let mut curves = Vec::new();
    let mut curve_by_name: BTreeMap<String, CurveId> = BTreeMap::new();
    for rc in &raw_curves {
        let cid = CurveId(curves.len());
        if curve_by_name.insert(rc.name.clone(), cid).is_some() {
            return Err(err(rc.line, format!("duplicate curve name `{}`", rc.name)));
        }
        let mut pts = Vec::new();
        for (pos, &raw_p) in rc.points.iter().enumerate() {
            let p = point_index[&raw_p];
            pts.push(PointId(p));
            match rc.kind {
                CurveKind::Alpha => {
                    if points[p].alpha != CurveId(usize::MAX) {
                        return Err(err(
                            rc.line,
                            format!("point {raw_p} appears on two alpha curves"),
                        ));
                    }
                    points[p].alpha = cid;
                    points[p].alpha_pos = pos;
                }
                CurveKind::Beta => {
                    if points[p].beta != CurveId(usize::MAX) {
                        return Err(err(
                            rc.line,
                            format!("point {raw_p} appears on two beta curves"),
                        ));
                    }
                    points[p].beta = cid;
                    points[p].beta_pos = pos;
                }
            }
        }
        curves.push(Curve {
            kind: rc.kind,
            name: rc.name.clone(),
            points: pts,
        });
    }
    for (p, pt) in points.iter().enumerate() {
        if pt.alpha == CurveId(usize::MAX) || pt.beta == CurveId(usize::MAX) {
            return Err(ParseError::Structure(format!(
                "point {} does not lie on one alpha and one beta curve",
                order[p]
            )));
        }
    }

    // edge references need the curve point counts; replicate the diagram's
    // edge numbering
    let mut edge_offsets = Vec::new();
    let mut total_edges = 0;
    for c in &curves {
        edge_offsets.push(total_edges);
        total_edges += c.points.len();
    }
    let resolve_edge = |name: &str, lineno: usize| -> Result<super::EdgeId, ParseError> {
        let (cname, pos_str) = name
            .rsplit_once('.')
            .ok_or_else(|| err(lineno, format!("bad edge reference `{name}`")))?;
        let cid = curve_by_name
            .get(cname)
            .ok_or_else(|| err(lineno, format!("unknown curve `{cname}`")))?;
        let pos: usize = pos_str
            .parse()
            .map_err(|e| err(lineno, format!("bad edge position in `{name}`: {e}")))?;
        if pos >= curves[cid.0].points.len() {
            return Err(err(lineno, format!("edge position out of range in `{name}`")));
        }
        Ok(super::EdgeId(edge_offsets[cid.0] + pos))
    };

    let mut region_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut regions = Vec::new();
    for (raw_id, word, corners, lineno) in &raw_regions {
        if region_index.insert(*raw_id, regions.len()).is_some() {
            return Err(err(*lineno, format!("duplicate region id {raw_id}")));
        }
        let word = word
            .iter()
            .map(|(name, dir)| {
                Ok(HalfEdge {
                    edge: resolve_edge(name, *lineno)?,
                    dir: *dir,
                })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        let corners = corners
            .iter()
            .map(|(raw_p, quad)| {
                let p = point_index
                    .get(raw_p)
                    .ok_or_else(|| err(*lineno, format!("unknown corner point {raw_p}")))?;
                Ok(Corner {
                    point: PointId(*p),
                    quadrant: *quad,
                })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        regions.push(Region { word, corners });
    }

    let mut basepoints = BTreeMap::new();
    for (raw_rid, bp, lineno) in &raw_basepoints {
        let rid = region_index
            .get(raw_rid)
            .ok_or_else(|| err(*lineno, format!("unknown region id {raw_rid}")))?;
        if basepoints.insert(RegionId(*rid), *bp).is_some() {
            return Err(err(*lineno, format!("region {raw_rid} has two basepoints")));
        }
    }

    Ok(Diagram::validated(points, curves, regions, basepoints)?)
}

#[cfg(test)]
mod tests {
    use super::super::grid::{from_grid, GridSpec};
    use super::*;

    #[test]
    fn round_trip_grid_diagram() {
        let d = from_grid(&GridSpec::new(2, vec![0, 1], vec![1, 0]).unwrap()).unwrap();
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn empty_file_reports_missing_curves() {
        let e = parse_diagram("").unwrap_err();
        assert!(e.to_string().contains("missing curves section"), "{e}");
    }

    #[test]
    fn corrupted_corner_is_a_validation_error() {
        let d = from_grid(&GridSpec::new(2, vec![0, 1], vec![1, 0]).unwrap()).unwrap();
        let mut text = serialize_diagram(&d);
        // duplicate a corner quadrant: swap one NE to NW
        let pos = text.find(" NE").unwrap();
        text.replace_range(pos..pos + 3, " NW");
        let e = parse_diagram(&text).unwrap_err();
        assert!(matches!(e, ParseError::Invalid(_)), "{e}");
    }

    #[test]
    fn bad_direction_is_a_parse_error_with_line() {
        let d = from_grid(&GridSpec::new(2, vec![0, 1], vec![1, 0]).unwrap()).unwrap();
        let text = serialize_diagram(&d).replace(" + ", " ? ");
        let e = parse_diagram(&text).unwrap_err();
        assert!(matches!(e, ParseError::At { .. }), "{e}");
    }
}
