//! Toroidal grid diagrams: n horizontal alpha circles, n vertical beta
//! circles on the torus, X/O markers giving the z/w basepoints.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{
    Basepoint, BasepointKind, Curve, CurveId, CurveKind, Diagram, DiagramError, Dir, HalfEdge,
    Point, PointId, Region, RegionId,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub size: usize,
    /// `x[c]` = row of the X marker in column c (0-based).
    pub x: Vec<usize>,
    /// `o[c]` = row of the O marker in column c (0-based).
    pub o: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("grid size {0} is degenerate; need n >= 2")]
    TooSmall(usize),
    #[error("{0} placements are not a permutation of 1..n")]
    NotAPermutation(&'static str),
    #[error("column {0} holds both its X and O marker")]
    SharedCell(usize),
    #[error("the grid describes a {0}-component link, not a knot")]
    NotAKnot(usize),
    #[error("grid file: {0}")]
    Parse(String),
}

impl GridSpec {
    pub fn new(size: usize, x: Vec<usize>, o: Vec<usize>) -> Result<GridSpec, GridError> {
        if size < 2 {
            return Err(GridError::TooSmall(size));
        }
        let is_perm = |v: &[usize]| {
            let mut seen = vec![false; size];
            v.len() == size
                && v.iter().all(|&r| {
                    r < size && !std::mem::replace(&mut seen[r], true)
                })
        };
        if !is_perm(&x) {
            return Err(GridError::NotAPermutation("X"));
        }
        if !is_perm(&o) {
            return Err(GridError::NotAPermutation("O"));
        }
        if let Some(c) = (0..size).find(|&c| x[c] == o[c]) {
            return Err(GridError::SharedCell(c));
        }
        let spec = GridSpec { size, x, o };
        let comps = spec.components();
        if comps != 1 {
            return Err(GridError::NotAKnot(comps));
        }
        Ok(spec)
    }

    /// Number of link components traced by the marker-connection rule.
    fn components(&self) -> usize {
        let n = self.size;
        let mut o_inv = vec![0usize; n];
        for (c, &r) in self.o.iter().enumerate() {
            o_inv[r] = c;
        }
        let mut visited = vec![false; n];
        let mut comps = 0;
        for start in 0..n {
            if visited[start] {
                continue;
            }
            comps += 1;
            let mut c = start;
            while !visited[c] {
                visited[c] = true;
                c = o_inv[self.x[c]];
            }
        }
        comps
    }

    /// Parses the `grid <n>` / `X: ...` / `O: ...` file format (1-based).
    pub fn parse(text: &str) -> Result<GridSpec, GridError> {
        let mut size: Option<usize> = None;
        let mut x: Option<Vec<usize>> = None;
        let mut o: Option<Vec<usize>> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| GridError::Parse(format!("line {}: {msg}", lineno + 1));
            if let Some(rest) = line.strip_prefix("grid") {
                size = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|e| err(format!("bad grid size: {e}")))?,
                );
            } else if let Some(rest) = line.strip_prefix("X:") {
                x = Some(parse_positions(rest).map_err(err)?);
            } else if let Some(rest) = line.strip_prefix("O:") {
                o = Some(parse_positions(rest).map_err(err)?);
            } else {
                return Err(err(format!("unrecognized line: {line}")));
            }
        }
        let size = size.ok_or_else(|| GridError::Parse("missing `grid <n>` line".into()))?;
        let x = x.ok_or_else(|| GridError::Parse("missing `X:` line".into()))?;
        let o = o.ok_or_else(|| GridError::Parse("missing `O:` line".into()))?;
        GridSpec::new(size, x, o)
    }

    pub fn serialize(&self) -> String {
        let fmt = |v: &[usize]| {
            v.iter()
                .map(|&r| (r + 1).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "grid {}\nX: {}\nO: {}\n",
            self.size,
            fmt(&self.x),
            fmt(&self.o)
        )
    }
}

fn parse_positions(rest: &str) -> Result<Vec<usize>, String> {
    rest.split_whitespace()
        .map(|tok| {
            let v: usize = tok
                .parse()
                .map_err(|e| format!("bad position {tok}: {e}"))?;
            if v == 0 {
                return Err(format!("position {tok} must be 1-based"));
            }
            Ok(v - 1)
        })
        .collect()
}

/// Builds the torus diagram of a grid: n^2 points, n^2 square regions,
/// genus 1, n basepoint pairs.
pub fn from_grid(spec: &GridSpec) -> Result<Diagram, DiagramError> {
    let n = spec.size;
    let pid = |r: usize, c: usize| PointId((r % n) * n + (c % n));

    let mut points = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            points.push(Point {
                alpha: CurveId(r),
                alpha_pos: c,
                beta: CurveId(n + c),
                beta_pos: r,
            });
        }
    }
    let mut curves = Vec::with_capacity(2 * n);
    for r in 0..n {
        curves.push(Curve {
            kind: CurveKind::Alpha,
            name: format!("a{r}"),
            points: (0..n).map(|c| pid(r, c)).collect(),
        });
    }
    for c in 0..n {
        curves.push(Curve {
            kind: CurveKind::Beta,
            name: format!("b{c}"),
            points: (0..n).map(|r| pid(r, c)).collect(),
        });
    }

    // edge ids follow Diagram::new_unchecked's layout: alphas first
    let alpha_edge = |r: usize, c: usize| super::EdgeId(r * n + c);
    let beta_edge = |c: usize, r: usize| super::EdgeId(n * n + c * n + r);

    let skeleton = Diagram::new_unchecked(points.clone(), curves.clone(), Vec::new(), BTreeMap::new());
    let mut regions = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            // square with south-west corner at point (r, c)
            let word = vec![
                HalfEdge {
                    edge: alpha_edge(r, c),
                    dir: Dir::Plus,
                },
                HalfEdge {
                    edge: beta_edge((c + 1) % n, r),
                    dir: Dir::Plus,
                },
                HalfEdge {
                    edge: alpha_edge((r + 1) % n, c),
                    dir: Dir::Minus,
                },
                HalfEdge {
                    edge: beta_edge(c, r),
                    dir: Dir::Minus,
                },
            ];
            let corners = skeleton
                .derive_corners(&word)
                .map_err(DiagramError::Construction)?;
            regions.push(Region { word, corners });
        }
    }

    let mut basepoints = BTreeMap::new();
    for c in 0..n {
        basepoints.insert(
            RegionId(spec.x[c] * n + c),
            Basepoint {
                kind: BasepointKind::Z,
                index: c + 1,
            },
        );
        basepoints.insert(
            RegionId(spec.o[c] * n + c),
            Basepoint {
                kind: BasepointKind::W,
                index: c + 1,
            },
        );
    }

    Diagram::validated(points, curves, regions, basepoints)
}
