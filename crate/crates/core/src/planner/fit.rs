use super::PlanError;
use crate::geom::{direction_deg, normalize_deg, Point2, Transform2, EPS_GEOM};
use crate::honeycomb::HoneycombMap;
use crate::shape::{Piece, Placement, Shape, DEFAULT_FLATTEN_TOL};

fn convex_hull(mut pts: Vec<Point2>) -> Vec<Point2> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Minimum-area enclosing rectangle of the flattened outer contour, as
/// `(short, long)` side lengths.
pub fn min_area_rect(shape: &Shape) -> (f64, f64) {
    let pts: Vec<Point2> = shape
        .outer()
        .flatten(DEFAULT_FLATTEN_TOL)
        .iter()
        .map(|s| s.a())
        .collect();
    let hull = convex_hull(pts);
    let n = hull.len();
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 0..n {
        let e = hull[(i + 1) % n] - hull[i];
        let len = e.norm();
        if len <= 0.0 {
            continue;
        }
        let u = e * (1.0 / len);
        let v = u.perp();
        let (mut lo_u, mut hi_u, mut lo_v, mut hi_v) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &p in &hull {
            let a = p.dot(u);
            let b = p.dot(v);
            lo_u = lo_u.min(a);
            hi_u = hi_u.max(a);
            lo_v = lo_v.min(b);
            hi_v = hi_v.max(b);
        }
        let (w, h) = (hi_u - lo_u, hi_v - lo_v);
        if best.is_none_or(|b| w * h < b.0) {
            best = Some((w * h, w.min(h), w.max(h)));
        }
    }
    match best {
        Some((_, s, l)) => (s, l),
        None => {
            let bb = shape.bbox();
            (bb.width().min(bb.height()), bb.width().max(bb.height()))
        }
    }
}

/// Reject shapes whose minimal rectangle cannot fit the outline's bbox in
/// any orientation of the two.
pub fn fit_check(shape: &Shape, map: &HoneycombMap) -> Result<(), PlanError> {
    let (s, l) = min_area_rect(shape);
    let bb = map.outline_bbox();
    let (bs, bl) = (bb.width().min(bb.height()), bb.width().max(bb.height()));
    if s <= bs + EPS_GEOM && l <= bl + EPS_GEOM {
        Ok(())
    } else {
        Err(PlanError::ShapeTooLarge {
            shape_dims: (l, s),
            block_dims: (bb.width(), bb.height()),
        })
    }
}

/// Rotation aligning the longest straight side with the ribbon axis, modulo
/// 180 degrees, and a translation putting the rotated bbox one cell edge in
/// from the outline's lower left corner.
///
/// With `use_block_edge`, the longest outer side of at least two cell edges
/// that can become the bottom of the rotated shape is laid on the outline's
/// bottom edge instead.
pub fn initial_placement(shape: &Shape, map: &HoneycombMap, use_block_edge: bool) -> Placement {
    let ob = map.outline_bbox();
    let margin = map.nominal_cell_edge();
    if use_block_edge {
        if let Some(p) = block_edge_placement(shape, map) {
            return p;
        }
    }
    let rot = match shape.longest_straight_segment() {
        Some((_, seg)) => normalize_deg(map.ribbon_axis() - direction_deg(seg.direction())) % 180.0,
        None => 0.0,
    };
    let bb = shape.apply_placement(&Transform2::new(rot, 0.0, 0.0)).bbox();
    Transform2::new(rot, ob.min.x + margin - bb.min.x, ob.min.y + margin - bb.min.y)
}

pub(super) fn block_edge_placement(shape: &Shape, map: &HoneycombMap) -> Option<Placement> {
    let ob = map.outline_bbox();
    let margin = map.nominal_cell_edge();
    let mut sides: Vec<_> = shape
        .outer()
        .pieces()
        .into_iter()
        .filter_map(|p| match p {
            Piece::Line { seg, .. } if seg.length() >= 2.0 * margin - EPS_GEOM => Some(seg),
            _ => None,
        })
        .collect();
    sides.sort_by(|a, b| b.length().total_cmp(&a.length()));
    for seg in sides {
        let d = direction_deg(seg.direction());
        for rot in [normalize_deg(-d), normalize_deg(180.0 - d)] {
            let t = Transform2::new(rot, 0.0, 0.0);
            let placed = shape.apply_placement(&t);
            let bb = placed.bbox();
            let (a, b) = (t.apply(seg.a()), t.apply(seg.b()));
            if (a.y - bb.min.y).abs() <= EPS_GEOM && (b.y - bb.min.y).abs() <= EPS_GEOM {
                return Some(Transform2::new(rot, ob.min.x + margin - bb.min.x, ob.min.y - bb.min.y));
            }
        }
    }
    None
}
