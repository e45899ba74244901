//! SVG rendering of a map with an optional placed shape and plan.
//!
//! One user unit is one millimetre and y points up, as on the machine
//! table. Single walls are thin black strokes, double walls thick blue ones.

use crate::geom::Point2;
use crate::honeycomb::{EdgeKind, HoneycombMap};
use crate::planner::{CutPlan, KnifeSpec};
use crate::shape::{Shape, DEFAULT_FLATTEN_TOL};
use std::fmt::Write as _;

fn n(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn points_attr(pts: impl IntoIterator<Item = Point2>) -> String {
    pts.into_iter()
        .map(|p| format!("{},{}", n(p.x), n(p.y)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Render the map; `shape` must already be placed.
pub fn render_svg(map: &HoneycombMap, shape: Option<&Shape>, plan: Option<&CutPlan>, knife: &KnifeSpec) -> String {
    let bb = map.outline_bbox();
    let pad = map.nominal_cell_edge();
    let (x0, y0) = (bb.min.x - pad, bb.min.y - pad);
    let (w, h) = (bb.width() + 2.0 * pad, bb.height() + 2.0 * pad);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}mm" height="{}mm" viewBox="{} {} {} {}">"#,
        n(w),
        n(h),
        n(x0),
        n(-(y0 + h)),
        n(w),
        n(h)
    );
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    let _ = writeln!(
        out,
        r#"<polygon class="outline" points="{}" fill="none" stroke="gray" stroke-width="0.5"/>"#,
        points_attr(map.outline().iter().copied())
    );
    for e in map.edges() {
        let Some(s) = map.edge_segment(e.id) else { continue };
        let (class, stroke, width) = match e.kind {
            EdgeKind::Single => ("edge single", "black", "0.3"),
            EdgeKind::Double => ("edge double", "blue", "1.2"),
        };
        let _ = writeln!(
            out,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{width}"/>"#,
            n(s.a().x),
            n(s.a().y),
            n(s.b().x),
            n(s.b().y)
        );
    }
    for node in map.nodes() {
        let _ = writeln!(
            out,
            r#"<circle class="node" cx="{}" cy="{}" r="0.5" fill="black"/>"#,
            n(node.pos.x),
            n(node.pos.y)
        );
    }
    if let Some(shape) = shape {
        for poly in shape.flatten(DEFAULT_FLATTEN_TOL) {
            let mut d = String::new();
            for (i, s) in poly.iter().enumerate() {
                if i == 0 {
                    let _ = write!(d, "M {} {}", n(s.a().x), n(s.a().y));
                }
                let _ = write!(d, " L {} {}", n(s.b().x), n(s.b().y));
            }
            d.push_str(" Z");
            let _ = writeln!(
                out,
                r#"<path class="contour" d="{d}" fill="none" stroke="red" stroke-width="0.4"/>"#
            );
        }
    }
    if let Some(plan) = plan {
        for p in &plan.points {
            let rect = knife.footprint(p.position, p.knife_angle);
            let _ = writeln!(
                out,
                r#"<polygon class="knife" points="{}" fill="green" fill-opacity="0.8"/>"#,
                points_attr(rect.corners())
            );
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}
