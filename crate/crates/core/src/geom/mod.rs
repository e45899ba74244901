//! Planar geometry kernel: points, segments, oriented rectangles, rigid
//! transforms and a uniform-grid spatial index.
//!
//! All lengths are millimetres and all angles are degrees. Tolerance tests
//! use [`EPS_GEOM`].

mod index;
mod predicates;

pub use index::SpatialIndex;
pub use predicates::{point_segment_distance, rect_intersects_segment, seg_seg_intersection};

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Degeneracy and equality tolerance, millimetres.
pub const EPS_GEOM: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("degenerate segment: length {0} mm is below tolerance")]
    DegenerateSegment(f64),
    #[error("invalid rectangle: {0}")]
    InvalidRect(&'static str),
    #[error("segments overlap collinearly")]
    CollinearOverlap,
}

/// A point (or free vector) in the table plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Checked constructor rejecting NaN and infinities.
    pub fn try_new(x: f64, y: f64) -> Result<Self, GeomError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeomError::NonFinite)
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn distance(self, o: Self) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn rotated_deg(self, deg: f64) -> Self {
        let (s, c) = sin_cos_deg(deg);
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, o: Self, t: f64) -> Self {
        self + (o - self) * t
    }
}

impl Add for Point2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Sine and cosine of an angle in degrees, exact at multiples of 90°.
pub fn sin_cos_deg(deg: f64) -> (f64, f64) {
    let d = normalize_deg(deg);
    if d == 0.0 {
        (0.0, 1.0)
    } else if d == 90.0 {
        (1.0, 0.0)
    } else if d == 180.0 {
        (0.0, -1.0)
    } else if d == 270.0 {
        (-1.0, 0.0)
    } else {
        d.to_radians().sin_cos()
    }
}

/// Map an angle into `[0, 360)`.
pub fn normalize_deg(deg: f64) -> f64 {
    let r = deg.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

/// Signed difference `a - b` wrapped into `(-180, 180]`.
pub fn angle_diff_deg(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    if d > 180.0 {
        d - 360.0
    } else {
        d
    }
}

/// Direction of a vector in degrees, `[0, 360)`.
pub fn direction_deg(v: Point2) -> f64 {
    normalize_deg(v.y.atan2(v.x).to_degrees())
}

/// A closed line segment with non-degenerate length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    a: Point2,
    b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Result<Self, GeomError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(GeomError::NonFinite);
        }
        let len = a.distance(b);
        if len <= EPS_GEOM {
            return Err(GeomError::DegenerateSegment(len));
        }
        Ok(Self { a, b })
    }

    /// Shifted copy. Lengths are preserved up to rounding.
    pub(crate) fn translated(&self, v: Point2) -> Self {
        Self {
            a: self.a + v,
            b: self.b + v,
        }
    }

    pub fn a(&self) -> Point2 {
        self.a
    }

    pub fn b(&self) -> Point2 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn direction(&self) -> Point2 {
        self.b - self.a
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        self.a.lerp(self.b, t)
    }

    pub fn bbox(&self) -> Bbox {
        Bbox::from_points([self.a, self.b])
    }

    pub fn reversed(&self) -> Self {
        Self { a: self.b, b: self.a }
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bbox {
    pub min: Point2,
    pub max: Point2,
}

impl Bbox {
    pub fn empty() -> Self {
        Self {
            min: Point2::new(f64::INFINITY, f64::INFINITY),
            max: Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn from_points<I: IntoIterator<Item = Point2>>(pts: I) -> Self {
        let mut b = Self::empty();
        for p in pts {
            b.include(p);
        }
        b
    }

    pub fn include(&mut self, p: Point2) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn is_empty(&self) -> bool {
        self.min.x > self.max.x || self.min.y > self.max.y
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn inflated(&self, d: f64) -> Self {
        Self {
            min: Point2::new(self.min.x - d, self.min.y - d),
            max: Point2::new(self.max.x + d, self.max.y + d),
        }
    }

    pub fn overlaps(&self, o: &Bbox) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }

    pub fn contains_bbox(&self, o: &Bbox, tol: f64) -> bool {
        o.min.x >= self.min.x - tol
            && o.min.y >= self.min.y - tol
            && o.max.x <= self.max.x + tol
            && o.max.y <= self.max.y + tol
    }
}

/// A rectangle rotated about its center. `angle` is the direction of the
/// length axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedRect {
    center: Point2,
    half_length: f64,
    half_width: f64,
    angle: f64,
}

impl OrientedRect {
    pub fn new(center: Point2, half_length: f64, half_width: f64, angle: f64) -> Result<Self, GeomError> {
        if !center.is_finite() || !angle.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if !(half_length > 0.0) {
            return Err(GeomError::InvalidRect("half_length must be positive"));
        }
        if !(half_width > 0.0) {
            return Err(GeomError::InvalidRect("half_width must be positive"));
        }
        Ok(Self {
            center,
            half_length,
            half_width,
            angle: normalize_deg(angle),
        })
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Unit vectors along the length and width axes.
    pub fn axes(&self) -> (Point2, Point2) {
        let (s, c) = sin_cos_deg(self.angle);
        let u = Point2::new(c, s);
        (u, u.perp())
    }

    /// Corners in counter-clockwise order.
    pub fn corners(&self) -> [Point2; 4] {
        let (u, v) = self.axes();
        let l = u * self.half_length;
        let w = v * self.half_width;
        [
            self.center - l - w,
            self.center + l - w,
            self.center + l + w,
            self.center - l + w,
        ]
    }

    pub fn bbox(&self) -> Bbox {
        Bbox::from_points(self.corners())
    }

    /// Closed containment test.
    pub fn contains(&self, p: Point2) -> bool {
        let (u, v) = self.axes();
        let d = p - self.center;
        d.dot(u).abs() <= self.half_length + EPS_GEOM * 1e-3 && d.dot(v).abs() <= self.half_width + EPS_GEOM * 1e-3
    }
}

/// Rigid motion: rotation about the origin followed by translation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transform2 {
    #[serde(rename = "rotation_deg")]
    rotation: f64,
    dx: f64,
    dy: f64,
}

impl Default for Transform2 {
    fn default() -> Self {
        Self::identity()
    }
}

impl Transform2 {
    pub fn new(rotation: f64, dx: f64, dy: f64) -> Self {
        Self {
            rotation: normalize_deg(rotation),
            dx,
            dy,
        }
    }

    pub fn identity() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    pub fn translation(&self) -> Point2 {
        Point2::new(self.dx, self.dy)
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        p.rotated_deg(self.rotation) + self.translation()
    }

    pub fn inverse(&self) -> Self {
        let t = (-self.translation()).rotated_deg(-self.rotation);
        Self::new(-self.rotation, t.x, t.y)
    }

    /// `self` applied after `first`.
    pub fn compose(&self, first: &Transform2) -> Self {
        let t = self.apply(first.translation());
        Self::new(self.rotation + first.rotation, t.x, t.y)
    }

    pub fn with_translation(&self, dx: f64, dy: f64) -> Self {
        Self::new(self.rotation, dx, dy)
    }
}

/// Even-odd point-in-polygon; points within `EPS_GEOM` of the boundary count
/// as inside.
pub fn point_in_polygon(p: Point2, poly: &[Point2]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if let Ok(s) = Segment::new(a, b) {
            if point_segment_distance(p, &s).0 <= EPS_GEOM {
                return true;
            }
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Shoelace signed area (positive for counter-clockwise).
pub fn polygon_signed_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>() * 0.5
}
