//! Target cut shapes: closed contours of straight lines and circular arcs.
//!
//! The outer contour is the one with the largest enclosed area; any others
//! are holes (fastener cut-outs, for instance) and must sit strictly inside
//! it without touching each other.

mod flatten;
mod parse;

pub use parse::parse_path;

use crate::geom::{point_in_polygon, seg_seg_intersection, Bbox, Point2, Segment, SpatialIndex, Transform2, EPS_GEOM};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Default chord tolerance for arc flattening, mm.
pub const DEFAULT_FLATTEN_TOL: f64 = 0.01;

/// Rigid placement of a shape on the block.
pub type Placement = Transform2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShapeError {
    #[error("path parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("contour starting at line {line} is not closed")]
    OpenContour { line: usize },
    #[error("contour {contour} intersects itself")]
    SelfIntersecting { contour: usize },
    #[error("hole {hole} is not strictly inside the outer contour")]
    HoleOutsideOuter { hole: usize },
    #[error("holes {0} and {1} overlap")]
    HolesOverlap(usize, usize),
    #[error("contour {contour} encloses no area")]
    ZeroArea { contour: usize },
    #[error("command {index}: {reason}")]
    InvalidCommand { index: usize, reason: String },
    #[error("shape has no contours")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepDirection {
    Cw,
    Ccw,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathCommand {
    MoveTo(Point2),
    LineTo(Point2),
    /// Circular arc from the current point to `end`.
    ArcTo {
        end: Point2,
        radius: f64,
        sweep: SweepDirection,
        large_arc: bool,
    },
    Close,
}

/// Center-parameterized circular arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcGeom {
    pub start: Point2,
    pub end: Point2,
    pub center: Point2,
    pub radius: f64,
    /// Start angle, radians.
    pub start_angle: f64,
    /// Signed sweep, radians; positive is counter-clockwise.
    pub sweep: f64,
}

impl ArcGeom {
    pub fn from_endpoints(
        start: Point2,
        end: Point2,
        radius: f64,
        dir: SweepDirection,
        large_arc: bool,
    ) -> Result<Self, String> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(format!("arc radius {radius} must be positive"));
        }
        let chord = end - start;
        let d = chord.norm();
        if d <= EPS_GEOM {
            return Err("arc end point equals its start".into());
        }
        if d > 2.0 * radius + EPS_GEOM {
            return Err(format!("arc chord {d} exceeds diameter {}", 2.0 * radius));
        }
        let half = d * 0.5;
        let h = (radius * radius - half * half).max(0.0).sqrt();
        let mid = start.lerp(end, 0.5);
        let left = chord.perp() * (1.0 / d);
        let ccw = dir == SweepDirection::Ccw;
        let center = if ccw != large_arc {
            mid + left * h
        } else {
            mid - left * h
        };
        let a0 = (start.y - center.y).atan2(start.x - center.x);
        let a1 = (end.y - center.y).atan2(end.x - center.x);
        let sweep = if ccw {
            let s = (a1 - a0).rem_euclid(TAU);
            if s == 0.0 {
                TAU
            } else {
                s
            }
        } else {
            let s = (a0 - a1).rem_euclid(TAU);
            -(if s == 0.0 { TAU } else { s })
        };
        Ok(Self {
            start,
            end,
            center,
            radius,
            start_angle: a0,
            sweep,
        })
    }

    pub fn point_at(&self, f: f64) -> Point2 {
        if f >= 1.0 {
            return self.end;
        }
        if f <= 0.0 {
            return self.start;
        }
        let a = self.start_angle + self.sweep * f;
        self.center + Point2::new(a.cos(), a.sin()) * self.radius
    }

    pub fn length(&self) -> f64 {
        self.radius * self.sweep.abs()
    }

    /// Area between the chord and the arc, signed like the sweep.
    pub fn segment_area(&self) -> f64 {
        0.5 * self.radius * self.radius * (self.sweep - self.sweep.sin())
    }

    /// Whether the arc passes through direction `angle` (radians) from its center.
    fn covers(&self, angle: f64) -> bool {
        let rel = if self.sweep > 0.0 {
            (angle - self.start_angle).rem_euclid(TAU)
        } else {
            (self.start_angle - angle).rem_euclid(TAU)
        };
        rel <= self.sweep.abs()
    }

    pub fn bbox(&self) -> Bbox {
        let mut b = Bbox::from_points([self.start, self.end]);
        for k in 0..4 {
            let a = k as f64 * PI * 0.5;
            if self.covers(a) {
                b.include(self.center + Point2::new(a.cos(), a.sin()) * self.radius);
            }
        }
        b
    }
}

/// One drawing element of a contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Line { seg: Segment, command: usize },
    Arc { arc: ArcGeom, command: usize },
}

/// A closed, simple contour.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    commands: Vec<PathCommand>,
}

impl Contour {
    pub fn new(commands: Vec<PathCommand>) -> Result<Self, ShapeError> {
        let bad = |index: usize, reason: &str| ShapeError::InvalidCommand {
            index,
            reason: reason.to_string(),
        };
        match commands.first() {
            Some(PathCommand::MoveTo(_)) => {}
            _ => return Err(bad(0, "contour must begin with a move")),
        }
        if commands.last() != Some(&PathCommand::Close) {
            return Err(bad(commands.len().saturating_sub(1), "contour must end with close"));
        }
        if commands.len() < 3 {
            return Err(bad(0, "contour has no drawing commands"));
        }
        for (i, c) in commands.iter().enumerate().skip(1) {
            match c {
                PathCommand::MoveTo(_) => return Err(bad(i, "move inside a contour")),
                PathCommand::Close if i + 1 != commands.len() => return Err(bad(i, "close before end of contour")),
                _ => {}
            }
            let p = match c {
                PathCommand::LineTo(p) => Some(*p),
                PathCommand::ArcTo { end, radius, .. } => {
                    if !radius.is_finite() {
                        return Err(bad(i, "non-finite radius"));
                    }
                    Some(*end)
                }
                _ => None,
            };
            if p.map(|p| !p.is_finite()).unwrap_or(false) {
                return Err(bad(i, "non-finite coordinate"));
            }
        }
        let contour = Self { commands };
        contour.try_pieces()?;
        Ok(contour)
    }

    pub fn commands(&self) -> &[PathCommand] {
        &self.commands
    }

    pub fn start(&self) -> Point2 {
        match self.commands[0] {
            PathCommand::MoveTo(p) => p,
            _ => unreachable!("validated contour"),
        }
    }

    fn try_pieces(&self) -> Result<Vec<Piece>, ShapeError> {
        let start = self.start();
        let mut cur = start;
        let mut out = Vec::with_capacity(self.commands.len());
        for (i, c) in self.commands.iter().enumerate().skip(1) {
            match *c {
                PathCommand::LineTo(p) => {
                    let seg = Segment::new(cur, p).map_err(|e| ShapeError::InvalidCommand {
                        index: i,
                        reason: e.to_string(),
                    })?;
                    out.push(Piece::Line { seg, command: i });
                    cur = p;
                }
                PathCommand::ArcTo {
                    end,
                    radius,
                    sweep,
                    large_arc,
                } => {
                    let arc = ArcGeom::from_endpoints(cur, end, radius, sweep, large_arc)
                        .map_err(|reason| ShapeError::InvalidCommand { index: i, reason })?;
                    out.push(Piece::Arc { arc, command: i });
                    cur = end;
                }
                PathCommand::Close => {
                    if cur.distance(start) > EPS_GEOM {
                        let seg = Segment::new(cur, start).expect("gap above tolerance");
                        out.push(Piece::Line { seg, command: i });
                    }
                }
                PathCommand::MoveTo(_) => unreachable!("validated contour"),
            }
        }
        Ok(out)
    }

    /// Lines and arcs in drawing order, including the implicit closing line.
    pub fn pieces(&self) -> Vec<Piece> {
        self.try_pieces().expect("validated contour")
    }

    /// Signed enclosed area, positive for counter-clockwise contours.
    pub fn signed_area(&self) -> f64 {
        let mut area = 0.0;
        for piece in self.pieces() {
            match piece {
                Piece::Line { seg, .. } => area += 0.5 * seg.a().cross(seg.b()),
                Piece::Arc { arc, .. } => area += 0.5 * arc.start.cross(arc.end) + arc.segment_area(),
            }
        }
        area
    }

    pub fn perimeter(&self) -> f64 {
        self.pieces()
            .iter()
            .map(|p| match p {
                Piece::Line { seg, .. } => seg.length(),
                Piece::Arc { arc, .. } => arc.length(),
            })
            .sum()
    }

    pub fn bbox(&self) -> Bbox {
        let mut b = Bbox::empty();
        for p in self.pieces() {
            let pb = match p {
                Piece::Line { seg, .. } => seg.bbox(),
                Piece::Arc { arc, .. } => arc.bbox(),
            };
            b.include(pb.min);
            b.include(pb.max);
        }
        b
    }

    pub fn transformed(&self, t: &Transform2) -> Self {
        let commands = self
            .commands
            .iter()
            .map(|c| match *c {
                PathCommand::MoveTo(p) => PathCommand::MoveTo(t.apply(p)),
                PathCommand::LineTo(p) => PathCommand::LineTo(t.apply(p)),
                PathCommand::ArcTo {
                    end,
                    radius,
                    sweep,
                    large_arc,
                } => PathCommand::ArcTo {
                    end: t.apply(end),
                    radius,
                    sweep,
                    large_arc,
                },
                PathCommand::Close => PathCommand::Close,
            })
            .collect();
        Self { commands }
    }

    pub fn flatten(&self, tol: f64) -> Vec<Segment> {
        flatten::flatten_pieces(&self.pieces(), tol)
    }
}

/// A cut shape: one outer contour and zero or more holes.
#[derive(Debug, Clone, PartialEq)]
pub struct Shape {
    outer: Contour,
    holes: Vec<Contour>,
}

impl Shape {
    /// Build a shape from contours in any order. The largest by absolute area
    /// becomes the outer contour; the rest keep their relative order as holes.
    pub fn from_contours(contours: Vec<Contour>) -> Result<Self, ShapeError> {
        if contours.is_empty() {
            return Err(ShapeError::Empty);
        }
        let areas: Vec<f64> = contours.iter().map(|c| c.signed_area().abs()).collect();
        for (i, a) in areas.iter().enumerate() {
            if *a <= EPS_GEOM {
                return Err(ShapeError::ZeroArea { contour: i });
            }
        }
        let mut outer_ix = 0;
        for (i, a) in areas.iter().enumerate() {
            if *a > areas[outer_ix] {
                outer_ix = i;
            }
        }
        let mut contours = contours;
        let outer = contours.remove(outer_ix);
        let shape = Self { outer, holes: contours };
        shape.check_topology()?;
        Ok(shape)
    }

    fn check_topology(&self) -> Result<(), ShapeError> {
        let flat: Vec<Vec<Segment>> = self.contours().map(|c| c.flatten(DEFAULT_FLATTEN_TOL)).collect();
        for (i, segs) in flat.iter().enumerate() {
            if self_intersects(segs) {
                return Err(ShapeError::SelfIntersecting { contour: i });
            }
        }
        let outer_poly = polyline_vertices(&flat[0]);
        for h in 1..flat.len() {
            let inside = flat[h]
                .iter()
                .all(|s| point_in_polygon(s.a(), &outer_poly) && !on_boundary(s.a(), &flat[0]));
            if !inside || segments_meet(&flat[0], &flat[h]) {
                return Err(ShapeError::HoleOutsideOuter { hole: h - 1 });
            }
        }
        for a in 1..flat.len() {
            for b in (a + 1)..flat.len() {
                let pa = polyline_vertices(&flat[a]);
                let pb = polyline_vertices(&flat[b]);
                if segments_meet(&flat[a], &flat[b]) || point_in_polygon(pa[0], &pb) || point_in_polygon(pb[0], &pa) {
                    return Err(ShapeError::HolesOverlap(a - 1, b - 1));
                }
            }
        }
        Ok(())
    }

    pub fn outer(&self) -> &Contour {
        &self.outer
    }

    pub fn holes(&self) -> &[Contour] {
        &self.holes
    }

    /// Outer contour first, then holes.
    pub fn contours(&self) -> impl Iterator<Item = &Contour> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn bbox(&self) -> Bbox {
        self.outer.bbox()
    }

    /// Net area: outer minus holes.
    pub fn area(&self) -> f64 {
        self.outer.signed_area().abs() - self.holes.iter().map(|h| h.signed_area().abs()).sum::<f64>()
    }

    /// Rotate about the origin, then translate.
    pub fn apply_placement(&self, placement: &Placement) -> Shape {
        Shape {
            outer: self.outer.transformed(placement),
            holes: self.holes.iter().map(|h| h.transformed(placement)).collect(),
        }
    }

    /// Polyline per contour, outer first.
    pub fn flatten(&self, tol: f64) -> Vec<Vec<Segment>> {
        self.contours().map(|c| c.flatten(tol)).collect()
    }

    /// The longest straight segment over all contours; earlier contour and
    /// command win ties.
    pub fn longest_straight_segment(&self) -> Option<(usize, Segment)> {
        let mut best: Option<(usize, Segment)> = None;
        for (ci, c) in self.contours().enumerate() {
            for p in c.pieces() {
                if let Piece::Line { seg, .. } = p {
                    let better = match &best {
                        None => true,
                        Some((_, b)) => seg.length() > b.length() + EPS_GEOM,
                    };
                    if better {
                        best = Some((ci, seg));
                    }
                }
            }
        }
        best
    }

    /// Smallest arc radius, infinity for all-straight shapes.
    pub fn min_curvature_radius(&self) -> f64 {
        self.contours()
            .flat_map(|c| c.commands().iter())
            .filter_map(|c| match c {
                PathCommand::ArcTo { radius, .. } => Some(*radius),
                _ => None,
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Path-grammar text that parses back to an equal shape.
    pub fn to_path_text(&self) -> String {
        parse::serialize(self)
    }
}

pub(crate) fn polyline_vertices(segs: &[Segment]) -> Vec<Point2> {
    segs.iter().map(|s| s.a()).collect()
}

fn on_boundary(p: Point2, segs: &[Segment]) -> bool {
    segs.iter()
        .any(|s| crate::geom::point_segment_distance(p, s).0 <= EPS_GEOM)
}

fn segment_index(segs: &[Segment]) -> SpatialIndex {
    let bb = Bbox::from_points(segs.iter().flat_map(|s| [s.a(), s.b()]));
    let cell = ((bb.width() + bb.height()) / 64.0).max(0.5);
    SpatialIndex::build(cell, segs.iter().enumerate().map(|(i, s)| (i, s.bbox())))
}

fn self_intersects(segs: &[Segment]) -> bool {
    let n = segs.len();
    let ix = segment_index(segs);
    let mut buf = Vec::new();
    for i in 0..n {
        ix.query_into(&segs[i].bbox().inflated(EPS_GEOM), &mut buf);
        for &j in buf.iter().filter(|&&j| j > i) {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            match seg_seg_intersection(&segs[i], &segs[j]) {
                Err(_) => return true,
                Ok(Some(_)) if !adjacent => return true,
                Ok(Some(p)) => {
                    // Adjacent pieces may only share their common vertex.
                    let shared = if j == i + 1 { segs[i].b() } else { segs[i].a() };
                    if p.distance(shared) > EPS_GEOM {
                        return true;
                    }
                }
                Ok(None) => {}
            }
        }
    }
    false
}

fn segments_meet(a: &[Segment], b: &[Segment]) -> bool {
    let ix = segment_index(b);
    let mut buf = Vec::new();
    a.iter().any(|s| {
        ix.query_into(&s.bbox().inflated(EPS_GEOM), &mut buf);
        buf.iter().any(|&j| !matches!(seg_seg_intersection(s, &b[j]), Ok(None)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect() -> Shape {
        parse_path("M 0 0 L 100 0 L 100 50 L 0 50 Z").unwrap()
    }

    fn circle_text(cx: f64, cy: f64, r: f64) -> String {
        format!(
            "M {} {cy} A {} {cy} {r} ccw small A {} {cy} {r} ccw small Z",
            cx + r,
            cx - r,
            cx + r
        )
    }

    #[test]
    fn rectangle_bbox_and_area() {
        let s = rect();
        let bb = s.bbox();
        assert_eq!((bb.min, bb.max), (Point2::new(0.0, 0.0), Point2::new(100.0, 50.0)));
        assert_eq!(s.area(), 5000.0);
    }

    #[test]
    fn circle_perimeter_and_radius() {
        let s = parse_path(&circle_text(0.0, 0.0, 20.0)).unwrap();
        assert!((s.outer().perimeter() - 125.6637).abs() < 1e-3);
        assert!((s.area() - PI * 400.0).abs() < 1e-9);
        assert_eq!(s.min_curvature_radius(), 20.0);
        assert_eq!(rect().min_curvature_radius(), f64::INFINITY);
        let bb = s.bbox();
        assert!((bb.min.x + 20.0).abs() < 1e-12 && (bb.max.y - 20.0).abs() < 1e-12);
    }

    #[test]
    fn min_radius_over_mixed_arcs() {
        let text = "M 0 0 L 50 0 A 50 24 12 ccw small L 0 24 A 0 0 25 ccw small Z";
        let s = parse_path(text).unwrap();
        assert_eq!(s.min_curvature_radius(), 12.0);
    }

    #[test]
    fn longest_segment_rules() {
        let (ci, seg) = rect().longest_straight_segment().unwrap();
        assert_eq!(ci, 0);
        assert_eq!((seg.a(), seg.b()), (Point2::new(0.0, 0.0), Point2::new(100.0, 0.0)));
        let circle = parse_path(&circle_text(0.0, 0.0, 20.0)).unwrap();
        assert!(circle.longest_straight_segment().is_none());
        // L-shape with sides 30, 60, 90 among others.
        let l = parse_path("M 0 0 L 90 0 L 90 30 L 30 30 L 30 60 L 0 60 Z").unwrap();
        assert_eq!(l.longest_straight_segment().unwrap().1.length(), 90.0);
    }

    #[test]
    fn placement_rotation_and_inverse() {
        let s = rect();
        assert_eq!(s.apply_placement(&Placement::identity()), s);
        let r = s.apply_placement(&Placement::new(90.0, 0.0, 0.0));
        let bb = r.bbox();
        assert!(bb.min.distance(Point2::new(-50.0, 0.0)) < 1e-9);
        assert!(bb.max.distance(Point2::new(0.0, 100.0)) < 1e-9);
        let p = Placement::new(37.0, 12.0, -3.0);
        let back = s.apply_placement(&p).apply_placement(&p.inverse());
        for (a, b) in back.outer().commands().iter().zip(s.outer().commands()) {
            if let (PathCommand::LineTo(x), PathCommand::LineTo(y)) = (a, b) {
                assert!(x.distance(*y) < 1e-9);
            }
        }
    }

    #[test]
    fn holes_classified() {
        let text = format!(
            "{}\nM 0 0 L 200 0 L 200 100 L 0 100 Z\n{}",
            circle_text(50.0, 50.0, 20.0),
            circle_text(150.0, 50.0, 20.0)
        );
        let s = parse_path(&text).unwrap();
        assert_eq!(s.holes().len(), 2);
        assert_eq!(s.outer().bbox().width(), 200.0);
        let outside = format!("M 0 0 L 100 0 L 100 100 L 0 100 Z\n{}", circle_text(150.0, 50.0, 20.0));
        // The circle is smaller, so it is a hole, and it lies outside.
        assert_eq!(parse_path(&outside), Err(ShapeError::HoleOutsideOuter { hole: 0 }));
        let overlap = format!(
            "M 0 0 L 200 0 L 200 100 L 0 100 Z\n{}\n{}",
            circle_text(50.0, 50.0, 20.0),
            circle_text(70.0, 50.0, 20.0)
        );
        assert_eq!(parse_path(&overlap), Err(ShapeError::HolesOverlap(0, 1)));
    }

    #[test]
    fn self_intersection_rejected() {
        let bowtie = "M 0 0 L 10 10 L 10 0 L 0 5 Z";
        assert_eq!(parse_path(bowtie), Err(ShapeError::SelfIntersecting { contour: 0 }));
    }

    #[test]
    fn arc_orientation() {
        // Quarter circle around the origin, counter-clockwise.
        let a = ArcGeom::from_endpoints(
            Point2::new(10.0, 0.0),
            Point2::new(0.0, 10.0),
            10.0,
            SweepDirection::Ccw,
            false,
        )
        .unwrap();
        assert!(a.center.norm() < 1e-12);
        assert!((a.sweep - PI / 2.0).abs() < 1e-12);
        let big = ArcGeom::from_endpoints(
            Point2::new(10.0, 0.0),
            Point2::new(0.0, 10.0),
            10.0,
            SweepDirection::Cw,
            true,
        )
        .unwrap();
        assert!(big.center.norm() < 1e-12);
        assert!((big.sweep + 1.5 * PI).abs() < 1e-12);
        assert!(ArcGeom::from_endpoints(
            Point2::new(0.0, 0.0),
            Point2::new(30.0, 0.0),
            10.0,
            SweepDirection::Cw,
            false
        )
        .is_err());
    }
}
