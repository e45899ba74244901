//! Map file format, version 1.
//!
//! ```text
//! {
//!   "header": {"format":"honeycomb-map","version":1,"units":"mm","nominal_cell_edge":10.0,"ribbon_axis_deg":0.0},
//!   "nodes": [
//!     {"id":0,"x":20.0,"y":8.660254037844387},
//!     ...
//!   ],
//!   "edges": [
//!     {"id":0,"a":0,"b":1,"kind":"single"},
//!     ...
//!   ],
//!   "outline": [
//!     {"x":0.0,"y":0.0},
//!     ...
//!   ]
//! }
//! ```
//!
//! Numbers use the shortest decimal form that parses back to the same `f64`.
//! Unknown fields are rejected at every level.

use super::{Edge, EdgeId, EdgeKind, HoneycombMap, MapError, MapParts, Node, NodeId};
use crate::geom::Point2;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use std::fmt::Write as _;

pub const FORMAT_NAME: &str = "honeycomb-map";
pub const FORMAT_VERSION: u64 = 1;

impl Serialize for EdgeKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for EdgeKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "single" => Ok(EdgeKind::Single),
            "double" => Ok(EdgeKind::Double),
            other => Err(de::Error::custom(format!("unknown edge kind `{other}`"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format: String,
    version: u64,
    units: String,
    nominal_cell_edge: f64,
    ribbon_axis_deg: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRec {
    id: u32,
    x: f64,
    y: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRec {
    id: u32,
    a: u32,
    b: u32,
    kind: EdgeKind,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointRec {
    x: f64,
    y: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    header: Header,
    nodes: Vec<NodeRec>,
    edges: Vec<EdgeRec>,
    outline: Vec<PointRec>,
}

#[derive(Deserialize)]
struct VersionProbe {
    header: HeaderProbe,
}

#[derive(Deserialize)]
struct HeaderProbe {
    version: u64,
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("map records serialize")
}

fn push_array<T: Serialize>(out: &mut String, name: &str, items: impl ExactSizeIterator<Item = T>, last: bool) {
    let n = items.len();
    if n == 0 {
        let _ = writeln!(out, "  \"{name}\": []{}", if last { "" } else { "," });
        return;
    }
    let _ = writeln!(out, "  \"{name}\": [");
    for (i, it) in items.enumerate() {
        let sep = if i + 1 < n { "," } else { "" };
        let _ = writeln!(out, "    {}{sep}", json(&it));
    }
    let _ = writeln!(out, "  ]{}", if last { "" } else { "," });
}

/// Serialize a map to the versioned text format.
pub fn save_map(map: &HoneycombMap) -> String {
    let p = map.parts();
    let header = Header {
        format: FORMAT_NAME.into(),
        version: FORMAT_VERSION,
        units: "mm".into(),
        nominal_cell_edge: p.nominal_cell_edge,
        ribbon_axis_deg: p.ribbon_axis,
    };
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"header\": {},", json(&header));
    push_array(
        &mut out,
        "nodes",
        p.nodes.iter().map(|n| NodeRec {
            id: n.id.0,
            x: n.pos.x,
            y: n.pos.y,
        }),
        false,
    );
    push_array(
        &mut out,
        "edges",
        p.edges.iter().map(|e| EdgeRec {
            id: e.id.0,
            a: e.a.0,
            b: e.b.0,
            kind: e.kind,
        }),
        false,
    );
    push_array(
        &mut out,
        "outline",
        p.outline.iter().map(|q| PointRec { x: q.x, y: q.y }),
        true,
    );
    out.push_str("}\n");
    out
}

fn parse_error(e: serde_json::Error) -> MapError {
    let msg = e.to_string();
    let reason = match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg,
    };
    MapError::Parse { line: e.line(), reason }
}

/// Parse a map document. Structural invariants are not checked here; run
/// [`validate`](super::validate) on the result.
pub fn load_map(text: &str) -> Result<HoneycombMap, MapError> {
    if let Ok(probe) = serde_json::from_str::<VersionProbe>(text) {
        if probe.header.version != FORMAT_VERSION {
            return Err(MapError::SchemaVersionUnsupported(probe.header.version));
        }
    }
    let doc: Document = serde_json::from_str(text).map_err(parse_error)?;
    if doc.header.format != FORMAT_NAME {
        return Err(MapError::Parse {
            line: 2,
            reason: format!("unexpected format `{}`", doc.header.format),
        });
    }
    if doc.header.units != "mm" {
        return Err(MapError::Parse {
            line: 2,
            reason: format!("unsupported units `{}`", doc.header.units),
        });
    }
    Ok(HoneycombMap::from_parts(MapParts {
        nominal_cell_edge: doc.header.nominal_cell_edge,
        ribbon_axis: doc.header.ribbon_axis_deg,
        nodes: doc
            .nodes
            .into_iter()
            .map(|n| Node {
                id: NodeId(n.id),
                pos: Point2::new(n.x, n.y),
            })
            .collect(),
        edges: doc
            .edges
            .into_iter()
            .map(|e| Edge {
                id: EdgeId(e.id),
                a: NodeId(e.a),
                b: NodeId(e.b),
                kind: e.kind,
            })
            .collect(),
        outline: doc.outline.into_iter().map(|p| Point2::new(p.x, p.y)).collect(),
    }))
}
