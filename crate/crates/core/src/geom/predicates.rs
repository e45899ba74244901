use super::{GeomError, OrientedRect, Point2, Segment, EPS_GEOM};

/// Intersection of two closed segments.
///
/// Endpoint contact within [`EPS_GEOM`] counts as an intersection. Collinear
/// segments sharing more than one point yield [`GeomError::CollinearOverlap`].
pub fn seg_seg_intersection(s1: &Segment, s2: &Segment) -> Result<Option<Point2>, GeomError> {
    let p = s1.a();
    let r = s1.direction();
    let q = s2.a();
    let s = s2.direction();
    let len_r = r.norm();
    let len_s = s.norm();
    let denom = r.cross(s);
    let qp = q - p;

    if denom.abs() <= 1e-12 * len_r * len_s {
        // Parallel: only collinear segments can meet.
        let off = qp.cross(r).abs() / len_r;
        if off > EPS_GEOM {
            return Ok(None);
        }
        let t0 = qp.dot(r) / (len_r * len_r);
        let t1 = (s2.b() - p).dot(r) / (len_r * len_r);
        let lo = t0.min(t1).max(0.0);
        let hi = t0.max(t1).min(1.0);
        let overlap = (hi - lo) * len_r;
        if overlap > EPS_GEOM {
            return Err(GeomError::CollinearOverlap);
        }
        if overlap >= -EPS_GEOM {
            return Ok(Some(s1.point_at(((lo + hi) * 0.5).clamp(0.0, 1.0))));
        }
        return Ok(None);
    }

    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    let et = EPS_GEOM / len_r;
    let eu = EPS_GEOM / len_s;
    if t < -et || t > 1.0 + et || u < -eu || u > 1.0 + eu {
        return Ok(None);
    }
    Ok(Some(s1.point_at(t.clamp(0.0, 1.0))))
}

/// Distance from `p` to the closest point of `s`, with that point's
/// parameter `t` in `[0, 1]`.
pub fn point_segment_distance(p: Point2, s: &Segment) -> (f64, f64) {
    let d = s.direction();
    let t = ((p - s.a()).dot(d) / d.dot(d)).clamp(0.0, 1.0);
    (p.distance(s.point_at(t)), t)
}

/// True iff the closed rectangle and the segment share a point.
pub fn rect_intersects_segment(r: &OrientedRect, s: &Segment) -> bool {
    // Liang-Barsky clip in the rectangle frame.
    let (u, v) = r.axes();
    let a = s.a() - r.center();
    let b = s.b() - r.center();
    let a_local = Point2::new(a.dot(u), a.dot(v));
    let d_local = Point2::new((b - a).dot(u), (b - a).dot(v));
    let hl = r.half_length();
    let hw = r.half_width();

    let mut t0 = 0.0_f64;
    let mut t1 = 1.0_f64;
    let checks = [
        (-d_local.x, a_local.x + hl),
        (d_local.x, hl - a_local.x),
        (-d_local.y, a_local.y + hw),
        (d_local.y, hw - a_local.y),
    ];
    for (pk, qk) in checks {
        if pk == 0.0 {
            if qk < 0.0 {
                return false;
            }
        } else {
            let ratio = qk / pk;
            if pk < 0.0 {
                t0 = t0.max(ratio);
            } else {
                t1 = t1.min(ratio);
            }
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}
