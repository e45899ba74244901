//! Honeycomb block map: nodal points joined by single or double (glued)
//! walls, enclosed by the block outline.
//!
//! A map is either produced by [`generate`] (a jittered regular lattice) or
//! loaded from the versioned text format in [`io`]. Maps are immutable; the
//! lookup tables and spatial indexes behind the queries are built on first
//! use.

mod generate;
pub mod io;
mod validate;

pub use generate::{generate, GeneratorParams};
pub use io::{load_map, save_map};
pub use validate::{validate, Violation};

use crate::geom::{
    point_in_polygon, point_segment_distance, seg_seg_intersection, Bbox, GeomError, OrientedRect, Point2, Segment,
    SpatialIndex, EPS_GEOM,
};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub pos: Point2,
}

/// Wall thickness class. Double walls are the glued strip joints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Single,
    Double,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Single => "single",
            EdgeKind::Double => "double",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub a: NodeId,
    pub b: NodeId,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("map parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("unsupported map schema version {0}")]
    SchemaVersionUnsupported(u64),
    #[error("map has no nodes")]
    EmptyMap,
    #[error("contour segment {segment_index} runs along edge {edge_id}")]
    ContourOnEdge { edge_id: EdgeId, segment_index: usize },
}

/// Raw map content, as stored in a map file.
#[derive(Debug, Clone, PartialEq)]
pub struct MapParts {
    pub nominal_cell_edge: f64,
    /// Glue-line direction, degrees.
    pub ribbon_axis: f64,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub outline: Vec<Point2>,
}

/// Intersection of a polyline with a map edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub edge_id: EdgeId,
    pub point: Point2,
    /// Parameter along the edge from `a` to `b`.
    pub t_on_edge: f64,
    /// Index of the polyline segment carrying the crossing.
    pub segment_index: usize,
    /// Parameter along that polyline segment.
    pub t_on_segment: f64,
}

#[derive(Debug)]
struct Derived {
    node_at: HashMap<NodeId, usize>,
    edge_at: HashMap<EdgeId, usize>,
    edge_segs: Vec<Option<Segment>>,
    edge_index: SpatialIndex,
    node_index: SpatialIndex,
    node_extent: Bbox,
    /// Per edge: nodes other than its endpoints lying within half the edge
    /// length of it.
    near_nodes: Vec<Vec<usize>>,
}

pub struct HoneycombMap {
    parts: MapParts,
    derived: OnceLock<Derived>,
}

impl fmt::Debug for HoneycombMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HoneycombMap")
            .field("nominal_cell_edge", &self.parts.nominal_cell_edge)
            .field("ribbon_axis", &self.parts.ribbon_axis)
            .field("nodes", &self.parts.nodes.len())
            .field("edges", &self.parts.edges.len())
            .finish()
    }
}

impl Clone for HoneycombMap {
    fn clone(&self) -> Self {
        Self::from_parts(self.parts.clone())
    }
}

impl PartialEq for HoneycombMap {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl HoneycombMap {
    /// Wrap raw parts. No invariants are checked; see [`validate`].
    pub fn from_parts(parts: MapParts) -> Self {
        Self {
            parts,
            derived: OnceLock::new(),
        }
    }

    pub fn parts(&self) -> &MapParts {
        &self.parts
    }

    pub fn into_parts(self) -> MapParts {
        self.parts
    }

    pub fn nominal_cell_edge(&self) -> f64 {
        self.parts.nominal_cell_edge
    }

    pub fn ribbon_axis(&self) -> f64 {
        self.parts.ribbon_axis
    }

    pub fn nodes(&self) -> &[Node] {
        &self.parts.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.parts.edges
    }

    pub fn outline(&self) -> &[Point2] {
        &self.parts.outline
    }

    pub fn outline_bbox(&self) -> Bbox {
        Bbox::from_points(self.parts.outline.iter().copied())
    }

    /// The same map moved by `v`.
    pub fn translated(&self, v: Point2) -> Self {
        let mut parts = self.parts.clone();
        for n in &mut parts.nodes {
            n.pos = n.pos + v;
        }
        for p in &mut parts.outline {
            *p = *p + v;
        }
        Self::from_parts(parts)
    }

    fn derived(&self) -> &Derived {
        self.derived.get_or_init(|| Derived::build(&self.parts))
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.derived().node_at.get(&id).map(|&i| &self.parts.nodes[i])
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.derived().edge_at.get(&id).map(|&i| &self.parts.edges[i])
    }

    /// Geometry of an edge, `None` for unknown, dangling or degenerate edges.
    pub fn edge_segment(&self, id: EdgeId) -> Option<Segment> {
        let d = self.derived();
        d.edge_at.get(&id).and_then(|&i| d.edge_segs[i])
    }

    /// Whether the outline is an axis-aligned rectangle equal to its bbox.
    pub fn outline_is_axis_rect(&self) -> bool {
        let o = &self.parts.outline;
        if o.len() != 4 {
            return false;
        }
        let bb = self.outline_bbox();
        o.iter()
            .all(|p| (p.x == bb.min.x || p.x == bb.max.x) && (p.y == bb.min.y || p.y == bb.max.y))
            && (crate::geom::polygon_signed_area(o).abs() - bb.width() * bb.height()).abs() <= EPS_GEOM
    }

    /// Node closest to `p`; ties go to the smaller id.
    pub fn nearest_node(&self, p: Point2) -> Result<(NodeId, f64), MapError> {
        let d = self.derived();
        if self.parts.nodes.is_empty() {
            return Err(MapError::EmptyMap);
        }
        let nodes = &self.parts.nodes;
        let better = |cand: (NodeId, f64), best: Option<(NodeId, f64)>| match best {
            None => true,
            Some((bid, bd)) => cand.1 < bd || (cand.1 == bd && cand.0 < bid),
        };
        let ext = d.node_extent;
        let far = ext.width() + ext.height() + (p.x - ext.min.x).abs() + (p.y - ext.min.y).abs() + 1.0;
        let mut r = d.node_index.cell_size().max(1.0);
        let mut buf = Vec::new();
        while r <= 2.0 * far {
            let probe = Bbox {
                min: Point2::new(p.x - r, p.y - r),
                max: Point2::new(p.x + r, p.y + r),
            };
            d.node_index.query_into(&probe, &mut buf);
            let mut best: Option<(NodeId, f64)> = None;
            for &i in &buf {
                let c = (nodes[i].id, p.distance(nodes[i].pos));
                if better(c, best) {
                    best = Some(c);
                }
            }
            if let Some(b) = best {
                if b.1 <= r {
                    return Ok(b);
                }
            }
            r *= 2.0;
        }
        let mut best: Option<(NodeId, f64)> = None;
        for n in nodes {
            let c = (n.id, p.distance(n.pos));
            if better(c, best) {
                best = Some(c);
            }
        }
        Ok(best.expect("non-empty"))
    }

    /// Distance from a point on edge `id` to the nearest node. Equal to
    /// [`nearest_node`](Self::nearest_node)'s distance for such points.
    pub(crate) fn node_distance_on_edge(&self, id: EdgeId, p: Point2) -> Option<f64> {
        let d = self.derived();
        let &i = d.edge_at.get(&id)?;
        d.edge_segs[i]?;
        let e = &self.parts.edges[i];
        let na = &self.parts.nodes[d.node_at[&e.a]];
        let nb = &self.parts.nodes[d.node_at[&e.b]];
        let mut best = p.distance(na.pos).min(p.distance(nb.pos));
        for &j in &d.near_nodes[i] {
            best = best.min(p.distance(self.parts.nodes[j].pos));
        }
        Some(best)
    }

    /// Every crossing between the polyline and a map edge, in traversal
    /// order. An intersection exactly at a segment's end is attributed to the
    /// following segment when that one starts there (cyclically for closed
    /// polylines), so shared vertices are reported once.
    pub fn edges_crossing(&self, polyline: &[Segment]) -> Result<Vec<Crossing>, MapError> {
        let (crossings, overlaps) = self.crossings_and_overlaps(polyline);
        match overlaps.first() {
            Some(&(edge_id, segment_index)) => Err(MapError::ContourOnEdge { edge_id, segment_index }),
            None => Ok(crossings),
        }
    }

    /// Crossings plus `(edge, segment)` pairs that overlap collinearly.
    pub(crate) fn crossings_and_overlaps(&self, polyline: &[Segment]) -> (Vec<Crossing>, Vec<(EdgeId, usize)>) {
        let mut out = Vec::new();
        let mut overlaps = Vec::new();
        let mut buf = Vec::new();
        for si in 0..polyline.len() {
            self.segment_crossings(polyline, si, &mut buf, &mut out, &mut overlaps);
        }
        overlaps.sort_by_key(|&(e, s)| (s, e));
        (out, overlaps)
    }

    /// Crossings carried by segment `si` of the polyline, appended in order
    /// along the segment. `buf` is scratch space.
    pub(crate) fn segment_crossings(
        &self,
        polyline: &[Segment],
        si: usize,
        buf: &mut Vec<usize>,
        out: &mut Vec<Crossing>,
        overlaps: &mut Vec<(EdgeId, usize)>,
    ) {
        let d = self.derived();
        let n = polyline.len();
        let seg = &polyline[si];
        let closed = n > 1 && polyline[n - 1].b().distance(polyline[0].a()) <= EPS_GEOM;
        let has_next = si + 1 < n || closed;
        let next_start = if si + 1 < n {
            polyline[si + 1].a()
        } else {
            polyline[0].a()
        };
        let hands_off = has_next && next_start.distance(seg.b()) <= EPS_GEOM;
        d.edge_index.query_into(&seg.bbox().inflated(EPS_GEOM), buf);
        let first = out.len();
        for &ei in buf.iter() {
            let Some(es) = d.edge_segs[ei] else { continue };
            let edge_id = self.parts.edges[ei].id;
            match seg_seg_intersection(seg, &es) {
                Err(_) => overlaps.push((edge_id, si)),
                Ok(None) => {}
                Ok(Some(p)) => {
                    if hands_off && seg.b().distance(p) <= EPS_GEOM {
                        continue;
                    }
                    let u = point_segment_distance(p, seg).1;
                    let t = point_segment_distance(p, &es).1;
                    out.push(Crossing {
                        edge_id,
                        point: p,
                        t_on_edge: t,
                        segment_index: si,
                        t_on_segment: u,
                    });
                }
            }
        }
        out[first..].sort_by(|x, y| {
            x.t_on_segment
                .total_cmp(&y.t_on_segment)
                .then(x.edge_id.cmp(&y.edge_id))
        });
    }

    pub(crate) fn edge_kind_at(&self, id: EdgeId) -> Option<EdgeKind> {
        let d = self.derived();
        d.edge_at.get(&id).map(|&i| self.parts.edges[i].kind)
    }

    /// Ids of edges intersecting the rectangle.
    pub fn edges_hitting_rect(&self, r: &OrientedRect) -> Vec<EdgeId> {
        let d = self.derived();
        let mut out: Vec<EdgeId> = d
            .edge_index
            .query(&r.bbox())
            .into_iter()
            .filter_map(|ei| {
                let s = d.edge_segs[ei]?;
                crate::geom::rect_intersects_segment(r, &s).then_some(self.parts.edges[ei].id)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Ids of nodes inside the closed rectangle.
    pub fn nodes_in_rect(&self, r: &OrientedRect) -> Vec<NodeId> {
        let d = self.derived();
        let mut out: Vec<NodeId> = d
            .node_index
            .query(&r.bbox())
            .into_iter()
            .filter(|&i| r.contains(self.parts.nodes[i].pos))
            .map(|i| self.parts.nodes[i].id)
            .collect();
        out.sort_unstable();
        out
    }

    /// Edge ids whose segment lies within `radius` of `p`, nearest first.
    pub fn edges_near(&self, p: Point2, radius: f64) -> Vec<(EdgeId, f64)> {
        let d = self.derived();
        let probe = Bbox { min: p, max: p }.inflated(radius);
        let mut out: Vec<(EdgeId, f64)> = d
            .edge_index
            .query(&probe)
            .into_iter()
            .filter_map(|ei| {
                let s = d.edge_segs[ei]?;
                let dist = point_segment_distance(p, &s).0;
                (dist <= radius).then_some((self.parts.edges[ei].id, dist))
            })
            .collect();
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }

    pub fn contains_point(&self, p: Point2) -> bool {
        point_in_polygon(p, &self.parts.outline)
    }

    pub(crate) fn edge_index_raw(&self) -> (&SpatialIndex, &[Option<Segment>]) {
        let d = self.derived();
        (&d.edge_index, &d.edge_segs)
    }
}

impl Derived {
    fn build(parts: &MapParts) -> Self {
        let mut node_at = HashMap::new();
        for (i, n) in parts.nodes.iter().enumerate() {
            node_at.entry(n.id).or_insert(i);
        }
        let mut edge_at = HashMap::new();
        for (i, e) in parts.edges.iter().enumerate() {
            edge_at.entry(e.id).or_insert(i);
        }
        let edge_segs: Vec<Option<Segment>> = parts
            .edges
            .iter()
            .map(|e| {
                let a = node_at.get(&e.a)?;
                let b = node_at.get(&e.b)?;
                Segment::new(parts.nodes[*a].pos, parts.nodes[*b].pos)
                    .map_err(|_: GeomError| ())
                    .ok()
            })
            .collect();
        let cell = if parts.nominal_cell_edge.is_finite() && parts.nominal_cell_edge > 0.0 {
            parts.nominal_cell_edge
        } else {
            10.0
        };
        let edge_index = SpatialIndex::build(
            cell,
            edge_segs
                .iter()
                .enumerate()
                .filter_map(|(i, s)| s.map(|s| (i, s.bbox()))),
        );
        let node_index = SpatialIndex::build(
            cell,
            parts
                .nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| n.pos.is_finite())
                .map(|(i, n)| (i, Bbox { min: n.pos, max: n.pos })),
        );
        let node_extent = Bbox::from_points(parts.nodes.iter().map(|n| n.pos).filter(|p| p.is_finite()));
        let near_nodes = parts
            .edges
            .iter()
            .zip(&edge_segs)
            .map(|(e, s)| {
                let Some(s) = s else { return Vec::new() };
                let half = s.length() * 0.5;
                let mut v: Vec<usize> = node_index
                    .query(&s.bbox().inflated(half))
                    .into_iter()
                    .filter(|&j| {
                        let n = &parts.nodes[j];
                        n.id != e.a && n.id != e.b && point_segment_distance(n.pos, s).0 <= half
                    })
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        Self {
            node_at,
            edge_at,
            edge_segs,
            edge_index,
            node_index,
            node_extent,
            near_nodes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular(cols: u32, rows: u32) -> HoneycombMap {
        generate(&GeneratorParams {
            columns: cols,
            rows,
            cell_edge: 10.0,
            jitter_sigma: 0.0,
            seed: 1,
            ribbon_axis: 0.0,
        })
        .unwrap()
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point2::new(ax, ay), Point2::new(bx, by)).unwrap()
    }

    #[test]
    fn nearest_node_exact_and_tie() {
        let m = regular(3, 3);
        let n = m.nodes()[5];
        assert_eq!(m.nearest_node(n.pos).unwrap(), (n.id, 0.0));
        let e = m.edges().iter().find(|e| e.kind == EdgeKind::Double).unwrap();
        let s = m.edge_segment(e.id).unwrap();
        let mid = s.point_at(0.5);
        let (id, d) = m.nearest_node(mid).unwrap();
        assert!((d - 5.0).abs() < 1e-9);
        assert_eq!(id, e.a.min(e.b));
    }

    #[test]
    fn nearest_node_empty_map() {
        let m = HoneycombMap::from_parts(MapParts {
            nominal_cell_edge: 10.0,
            ribbon_axis: 0.0,
            nodes: vec![],
            edges: vec![],
            outline: vec![],
        });
        assert_eq!(m.nearest_node(Point2::new(0.0, 0.0)), Err(MapError::EmptyMap));
    }

    #[test]
    fn horizontal_line_across_one_cell() {
        // Cell (0,0) spans x in [0, 20] around its center in the regular lattice.
        let m = regular(3, 3);
        let c0 = m.nodes()[0].pos; // vertex (2,0) of cell (0,0): center + (10, 0)
        let center = c0 - Point2::new(10.0, 0.0);
        let y = center.y + 2.0;
        let cr = m.edges_crossing(&[seg(center.x - 9.5, y, center.x + 9.5, y)]).unwrap();
        assert_eq!(cr.len(), 2);
        let inside = m.edges_crossing(&[seg(center.x - 2.0, y, center.x + 2.0, y)]).unwrap();
        assert!(inside.is_empty());
    }

    #[test]
    fn contour_on_edge_is_an_error() {
        let m = regular(2, 2);
        let e = m.edges()[0];
        let s = m.edge_segment(e.id).unwrap();
        let err = m.edges_crossing(&[s]).unwrap_err();
        assert!(matches!(err, MapError::ContourOnEdge { .. }));
    }

    #[test]
    fn shared_vertex_reported_once() {
        let m = regular(3, 3);
        let e = m.edges()[0];
        let s = m.edge_segment(e.id).unwrap();
        // A polyline whose vertex sits on the middle of edge e.
        let p = s.point_at(0.5);
        let n = s.direction().perp() * (1.0 / s.length());
        let a = p + n * 3.0 + s.direction() * 0.05;
        let b = p - n * 3.0 + s.direction() * 0.05;
        let cr = m
            .edges_crossing(&[seg(a.x, a.y, p.x, p.y), seg(p.x, p.y, b.x, b.y)])
            .unwrap();
        assert_eq!(cr.iter().filter(|c| c.edge_id == e.id).count(), 1);
        assert_eq!(cr[0].segment_index, 1);
    }
}
