use super::{ArcGeom, Piece};
use crate::geom::{Segment, EPS_GEOM};

/// Number of chords for an arc so that each chord spans at most
/// `acos(1 - tol / r)` radians.
pub(crate) fn arc_chord_count(arc: &ArcGeom, tol: f64) -> usize {
    let step = (1.0 - tol / arc.radius).max(-1.0).acos();
    ((arc.sweep.abs() / step).ceil() as usize).max(1)
}

pub(crate) fn flatten_pieces(pieces: &[Piece], tol: f64) -> Vec<Segment> {
    assert!(tol > 0.0, "flatten tolerance must be positive");
    let mut out = Vec::new();
    for p in pieces {
        match p {
            Piece::Line { seg, .. } => out.push(*seg),
            Piece::Arc { arc, .. } => {
                let n = arc_chord_count(arc, tol);
                let mut prev = arc.start;
                for k in 1..=n {
                    let q = if k == n {
                        arc.end
                    } else {
                        arc.point_at(k as f64 / n as f64)
                    };
                    if q.distance(prev) > EPS_GEOM {
                        out.push(Segment::new(prev, q).expect("chord above tolerance"));
                        prev = q;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::geom::{point_segment_distance, Point2};
    use crate::shape::{parse_path, Piece};
    use std::f64::consts::PI;

    const CIRCLE40: &str = "M 20 0 A -20 0 20 ccw small A 20 0 20 ccw small Z";

    #[test]
    fn rectangle_passes_through() {
        let s = parse_path("M 0 0 L 100 0 L 100 50 L 0 50 Z").unwrap();
        for tol in [0.001, 0.01, 1.0] {
            let f = s.flatten(tol);
            assert_eq!(f.len(), 1);
            let pts: Vec<Point2> = f[0].iter().map(|s| s.a()).collect();
            assert_eq!(
                pts,
                vec![
                    Point2::new(0.0, 0.0),
                    Point2::new(100.0, 0.0),
                    Point2::new(100.0, 50.0),
                    Point2::new(0.0, 50.0)
                ]
            );
        }
    }

    #[test]
    fn circle_chord_count_closed_form() {
        let s = parse_path(CIRCLE40).unwrap();
        let tol: f64 = 0.01;
        let per_half = (PI / (1.0 - tol / 20.0).acos()).ceil() as usize;
        assert_eq!(per_half, 100);
        assert_eq!(s.flatten(tol)[0].len(), 2 * per_half);
    }

    #[test]
    fn circle_deviation_within_tolerance() {
        // Dense sampling oracle: every sampled arc point must lie within tol
        // of the polyline, and every chord midpoint within tol of the arc.
        let s = parse_path(CIRCLE40).unwrap();
        for tol in [0.01, 0.05, 0.2] {
            let segs = &s.flatten(tol)[0];
            let mut worst: f64 = 0.0;
            for piece in s.outer().pieces() {
                let Piece::Arc { arc, .. } = piece else { continue };
                for k in 0..=10_000 {
                    let p = arc.point_at(k as f64 / 10_000.0);
                    let d = segs
                        .iter()
                        .map(|sg| point_segment_distance(p, sg).0)
                        .fold(f64::INFINITY, f64::min);
                    worst = worst.max(d);
                }
            }
            assert!(worst <= tol, "tol {tol}: deviation {worst}");
            for sg in segs {
                let mid = sg.point_at(0.5);
                assert!((20.0 - mid.norm()) <= tol);
            }
        }
    }
}
