use super::{EdgeId, HoneycombMap, NodeId};
use crate::geom::{point_in_polygon, polygon_signed_area, seg_seg_intersection, EPS_GEOM};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

/// A broken map invariant, naming the offending ids.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    InvalidCellEdge(f64),
    InvalidOutline(&'static str),
    NonFiniteNode(NodeId),
    DuplicateNodeId(NodeId),
    DuplicateEdgeId(EdgeId),
    DanglingEdge(EdgeId),
    SelfLoop(EdgeId),
    DegenerateEdge(EdgeId),
    DuplicateEdge(EdgeId, EdgeId),
    NodeDegree { node: NodeId, degree: usize },
    NodeOutsideOutline(NodeId),
    EdgeCrossing(EdgeId, EdgeId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidCellEdge(v) => write!(f, "nominal cell edge {v} is not positive"),
            Violation::InvalidOutline(why) => write!(f, "outline: {why}"),
            Violation::NonFiniteNode(n) => write!(f, "node {n} has a non-finite position"),
            Violation::DuplicateNodeId(n) => write!(f, "node id {n} is used twice"),
            Violation::DuplicateEdgeId(e) => write!(f, "edge id {e} is used twice"),
            Violation::DanglingEdge(e) => write!(f, "edge {e} references a missing node"),
            Violation::SelfLoop(e) => write!(f, "edge {e} joins a node to itself"),
            Violation::DegenerateEdge(e) => write!(f, "edge {e} has zero length"),
            Violation::DuplicateEdge(a, b) => write!(f, "edges {a} and {b} join the same nodes"),
            Violation::NodeDegree { node, degree } => write!(f, "node {node} has degree {degree}, expected 1..=3"),
            Violation::NodeOutsideOutline(n) => write!(f, "node {n} lies outside the outline"),
            Violation::EdgeCrossing(a, b) => write!(f, "edges {a} and {b} cross"),
        }
    }
}

/// All invariant violations of `map`; empty iff the map is well formed.
pub fn validate(map: &HoneycombMap) -> Vec<Violation> {
    let mut out = Vec::new();
    let parts = map.parts();
    if !(parts.nominal_cell_edge > 0.0) || !parts.nominal_cell_edge.is_finite() {
        out.push(Violation::InvalidCellEdge(parts.nominal_cell_edge));
    }
    if parts.outline.len() < 3 {
        out.push(Violation::InvalidOutline("fewer than three vertices"));
    } else if parts.outline.iter().any(|p| !p.is_finite()) {
        out.push(Violation::InvalidOutline("non-finite vertex"));
    } else if polygon_signed_area(&parts.outline).abs() <= EPS_GEOM {
        out.push(Violation::InvalidOutline("zero area"));
    }

    let mut seen_nodes = HashSet::new();
    for n in &parts.nodes {
        if !seen_nodes.insert(n.id) {
            out.push(Violation::DuplicateNodeId(n.id));
        }
        if !n.pos.is_finite() {
            out.push(Violation::NonFiniteNode(n.id));
        }
    }

    let mut seen_edges = HashSet::new();
    let mut pairs: HashMap<(NodeId, NodeId), EdgeId> = HashMap::new();
    let mut degree: BTreeMap<NodeId, usize> = parts.nodes.iter().map(|n| (n.id, 0)).collect();
    for e in &parts.edges {
        if !seen_edges.insert(e.id) {
            out.push(Violation::DuplicateEdgeId(e.id));
        }
        if map.node(e.a).is_none() || map.node(e.b).is_none() {
            out.push(Violation::DanglingEdge(e.id));
            continue;
        }
        if e.a == e.b {
            out.push(Violation::SelfLoop(e.id));
            continue;
        }
        if map.edge_segment(e.id).is_none() && map.edge(e.id).map(|x| x == e).unwrap_or(false) {
            out.push(Violation::DegenerateEdge(e.id));
        }
        let key = (e.a.min(e.b), e.a.max(e.b));
        if let Some(prev) = pairs.get(&key) {
            out.push(Violation::DuplicateEdge(*prev, e.id));
        } else {
            pairs.insert(key, e.id);
        }
        *degree.entry(e.a).or_default() += 1;
        *degree.entry(e.b).or_default() += 1;
    }
    for (&node, &d) in &degree {
        if !(1..=3).contains(&d) {
            out.push(Violation::NodeDegree { node, degree: d });
        }
    }

    if parts.outline.len() >= 3 {
        for n in &parts.nodes {
            if n.pos.is_finite() && !point_in_polygon(n.pos, &parts.outline) {
                out.push(Violation::NodeOutsideOutline(n.id));
            }
        }
    }

    let (index, segs) = map.edge_index_raw();
    let mut buf = Vec::new();
    for (i, e) in parts.edges.iter().enumerate() {
        let Some(si) = segs[i] else { continue };
        index.query_into(&si.bbox().inflated(EPS_GEOM), &mut buf);
        for &j in buf.iter().filter(|&&j| j > i) {
            let Some(sj) = segs[j] else { continue };
            let f = &parts.edges[j];
            let shared = [e.a, e.b].into_iter().find(|x| *x == f.a || *x == f.b);
            let hit = match seg_seg_intersection(&si, &sj) {
                Err(_) => true,
                Ok(None) => false,
                Ok(Some(p)) => match shared {
                    Some(nid) => map.node(nid).map(|n| n.pos.distance(p) > EPS_GEOM).unwrap_or(true),
                    None => true,
                },
            };
            if hit {
                out.push(Violation::EdgeCrossing(e.id, f.id));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;
    use crate::honeycomb::{generate, Edge, EdgeKind, GeneratorParams, MapParts, Node};

    fn small() -> MapParts {
        generate(&GeneratorParams {
            columns: 2,
            rows: 2,
            cell_edge: 10.0,
            jitter_sigma: 0.0,
            seed: 3,
            ribbon_axis: 0.0,
        })
        .unwrap()
        .into_parts()
    }

    #[test]
    fn generated_maps_are_valid() {
        for seed in 0..5 {
            let m = generate(&GeneratorParams {
                columns: 6,
                rows: 4,
                cell_edge: 10.0,
                jitter_sigma: 0.1,
                seed,
                ribbon_axis: 15.0 * seed as f64,
            })
            .unwrap();
            assert_eq!(validate(&m), vec![]);
        }
    }

    #[test]
    fn dangling_edge() {
        let mut p = small();
        let id = EdgeId(999);
        p.edges.push(Edge {
            id,
            a: NodeId(0),
            b: NodeId(12345),
            kind: EdgeKind::Single,
        });
        let v = validate(&HoneycombMap::from_parts(p));
        assert_eq!(v, vec![Violation::DanglingEdge(id)]);
    }

    #[test]
    fn crossing_edges() {
        // A square's two diagonals: (0,0)-(10,10) and (0,10)-(10,0) meet at (5,5).
        let nodes = vec![
            Node {
                id: NodeId(0),
                pos: Point2::new(0.0, 0.0),
            },
            Node {
                id: NodeId(1),
                pos: Point2::new(10.0, 10.0),
            },
            Node {
                id: NodeId(2),
                pos: Point2::new(0.0, 10.0),
            },
            Node {
                id: NodeId(3),
                pos: Point2::new(10.0, 0.0),
            },
        ];
        let edges = vec![
            Edge {
                id: EdgeId(0),
                a: NodeId(0),
                b: NodeId(1),
                kind: EdgeKind::Single,
            },
            Edge {
                id: EdgeId(1),
                a: NodeId(2),
                b: NodeId(3),
                kind: EdgeKind::Single,
            },
        ];
        let m = HoneycombMap::from_parts(MapParts {
            nominal_cell_edge: 10.0,
            ribbon_axis: 0.0,
            nodes,
            edges,
            outline: vec![
                Point2::new(0.0, 0.0),
                Point2::new(10.0, 0.0),
                Point2::new(10.0, 10.0),
                Point2::new(0.0, 10.0),
            ],
        });
        let (s0, s1) = (m.edge_segment(EdgeId(0)).unwrap(), m.edge_segment(EdgeId(1)).unwrap());
        let p = seg_seg_intersection(&s0, &s1).unwrap().unwrap();
        assert!(p.distance(Point2::new(5.0, 5.0)) < 1e-12);
        assert_eq!(validate(&m), vec![Violation::EdgeCrossing(EdgeId(0), EdgeId(1))]);
    }

    #[test]
    fn degree_and_outline_violations() {
        let mut p = small();
        let far = NodeId(500);
        p.nodes.push(Node {
            id: far,
            pos: Point2::new(-50.0, -50.0),
        });
        let v = validate(&HoneycombMap::from_parts(p));
        assert!(v.contains(&Violation::NodeDegree { node: far, degree: 0 }));
        assert!(v.contains(&Violation::NodeOutsideOutline(far)));
    }

    #[test]
    fn duplicate_edge() {
        let mut p = small();
        let e = p.edges[0];
        p.edges.push(Edge {
            id: EdgeId(777),
            a: e.b,
            b: e.a,
            kind: e.kind,
        });
        let v = validate(&HoneycombMap::from_parts(p));
        assert!(v.contains(&Violation::DuplicateEdge(e.id, EdgeId(777))));
    }
}
