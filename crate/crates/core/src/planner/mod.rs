//! Cut planning: place a shape on a honeycomb map and choose a knife plunge
//! for every wall the contour crosses.
//!
//! For each crossing the planner slides along the crossed wall, within the
//! relocation radius, to the position closest to a nodal point that still
//! keeps the required clearance and admits a blade angle whose footprint
//! touches no other wall. Placements are searched in a fixed order until one
//! yields no problem points.

mod fit;
pub mod io;
mod search;
mod select;
mod verify;

pub use fit::{fit_check, initial_placement, min_area_rect};
pub use search::{orientation_list, plan, PlanOptions};
pub use select::{feasible_knife_angle, select_cut_point, KnifeAngle};
pub use verify::{verify_plan, PlanViolation};

pub(crate) use verify::{verify_points, VerifyTolerance};

use crate::geom::{point_segment_distance, OrientedRect, Point2, Segment};
use crate::honeycomb::{Crossing, EdgeId, EdgeKind, HoneycombMap};
use crate::shape::Placement;
use std::fmt;
use thiserror::Error;

/// Blade geometry and rotary axis limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnifeSpec {
    /// Blade width along the cut direction, mm.
    pub width: f64,
    pub thickness: f64,
    /// Largest allowed deviation from the wall-perpendicular, degrees.
    pub max_angle_deviation: f64,
    /// Rotary step, degrees.
    pub angle_resolution: f64,
}

impl Default for KnifeSpec {
    fn default() -> Self {
        Self {
            width: 5.0,
            thickness: 0.3,
            max_angle_deviation: 30.0,
            angle_resolution: 0.1,
        }
    }
}

impl KnifeSpec {
    pub fn check(&self) -> Result<(), PlanError> {
        let bad = |m: &str| Err(PlanError::InvalidKnife(m.to_string()));
        if !(self.thickness > 0.0) || !self.thickness.is_finite() {
            return bad("thickness must be positive");
        }
        if !(self.width > self.thickness) || !self.width.is_finite() {
            return bad("width must exceed thickness");
        }
        if !(self.max_angle_deviation > 0.0 && self.max_angle_deviation <= 90.0) {
            return bad("max_angle_deviation must be in (0, 90]");
        }
        if !(self.angle_resolution > 0.0) || !self.angle_resolution.is_finite() {
            return bad("angle_resolution must be positive");
        }
        Ok(())
    }

    /// Horizontal projection of the blade at full plunge.
    pub fn footprint(&self, center: Point2, angle: f64) -> OrientedRect {
        OrientedRect::new(center, self.width * 0.5, self.thickness * 0.5, angle).expect("checked knife dimensions")
    }
}

/// Placement rules for cut points, lengths in mm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraints {
    pub node_clearance: f64,
    pub relocation_radius: f64,
    pub position_step: f64,
    pub max_indentation: f64,
    pub same_edge_min_separation: f64,
    /// Permit cuts on glued double walls.
    pub allow_double: bool,
}

impl Default for Constraints {
    fn default() -> Self {
        Self {
            node_clearance: 0.5,
            relocation_radius: 5.0,
            position_step: 0.1,
            max_indentation: 5.0,
            same_edge_min_separation: 0.4,
            allow_double: false,
        }
    }
}

impl Constraints {
    pub fn check(&self) -> Result<(), PlanError> {
        let vals = [
            ("node_clearance", self.node_clearance),
            ("relocation_radius", self.relocation_radius),
            ("position_step", self.position_step),
            ("max_indentation", self.max_indentation),
            ("same_edge_min_separation", self.same_edge_min_separation),
        ];
        for (name, v) in vals {
            if !(v > 0.0) || !v.is_finite() {
                return Err(PlanError::InvalidConstraints(format!("{name} must be positive")));
            }
        }
        if self.relocation_radius < self.node_clearance {
            return Err(PlanError::InvalidConstraints(
                "relocation_radius must be at least node_clearance".into(),
            ));
        }
        Ok(())
    }
}

/// A planned knife plunge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPoint {
    pub edge_id: EdgeId,
    pub position: Point2,
    pub t_on_edge: f64,
    /// Absolute blade direction, degrees, a multiple of the rotary step.
    pub knife_angle: f64,
    /// Unsigned deviation from the wall-perpendicular, degrees.
    pub angle_deviation: f64,
    /// Distance from the plunge to the target contour.
    pub indentation: f64,
    /// Distance to the nearest nodal point.
    pub node_distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemReason {
    NodeZone,
    DoubleEdge,
    KnifeCollision,
    NoFeasiblePosition,
}

impl ProblemReason {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemReason::NodeZone => "NodeZone",
            ProblemReason::DoubleEdge => "DoubleEdge",
            ProblemReason::KnifeCollision => "KnifeCollision",
            ProblemReason::NoFeasiblePosition => "NoFeasiblePosition",
        }
    }
}

impl fmt::Display for ProblemReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A crossing with no acceptable cut under the current placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemPoint {
    pub crossing: Crossing,
    pub reason: ProblemReason,
}

/// Aggregate quality figures of a plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Report {
    pub cut_point_count: usize,
    /// `None` for plans without cut points.
    pub min_node_distance: Option<f64>,
    pub max_indentation: f64,
    pub double_edge_cuts: usize,
    pub max_angle_deviation_used: f64,
    pub placements_tried: u64,
}

impl Report {
    pub(crate) fn from_points(points: &[CutPoint], map: &HoneycombMap, placements_tried: u64) -> Self {
        Self {
            cut_point_count: points.len(),
            min_node_distance: points.iter().map(|p| p.node_distance).reduce(f64::min),
            max_indentation: points.iter().map(|p| p.indentation).fold(0.0, f64::max),
            double_edge_cuts: points
                .iter()
                .filter(|p| map.edge(p.edge_id).map(|e| e.kind == EdgeKind::Double).unwrap_or(false))
                .count(),
            max_angle_deviation_used: points.iter().map(|p| p.angle_deviation).fold(0.0, f64::max),
            placements_tried,
        }
    }
}

/// An accepted plan: every crossing has a cut point.
#[derive(Debug, Clone, PartialEq)]
pub struct CutPlan {
    pub placement: Placement,
    /// Contour traversal order, outer contour first.
    pub points: Vec<CutPoint>,
    pub metrics: Report,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanningFailure {
    /// Fewest problem points, then smallest indentation sum; `None` when no
    /// placement fit inside the outline.
    pub best_placement: Option<Placement>,
    pub problem_points: Vec<ProblemPoint>,
    pub placements_tried: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("invalid knife: {0}")]
    InvalidKnife(String),
    #[error("invalid constraints: {0}")]
    InvalidConstraints(String),
    #[error("shape {:.3} x {:.3} mm does not fit block {:.3} x {:.3} mm", shape_dims.0, shape_dims.1, block_dims.0, block_dims.1)]
    ShapeTooLarge {
        shape_dims: (f64, f64),
        block_dims: (f64, f64),
    },
    #[error("no placement without problem points after {} placements ({} problems at best)", .0.placements_tried, .0.problem_points.len())]
    PlanningFailed(Box<PlanningFailure>),
}

/// Distance from `p` to the nearest boundary segment.
pub(crate) fn boundary_distance(p: Point2, boundary: &[Segment]) -> f64 {
    boundary
        .iter()
        .map(|s| point_segment_distance(p, s).0)
        .fold(f64::INFINITY, f64::min)
}

/// Blade direction perpendicular to a wall, degrees in `[0, 360)`.
pub(crate) fn perpendicular_deg(edge: &Segment) -> f64 {
    crate::geom::normalize_deg(crate::geom::direction_deg(edge.direction()) + 90.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        KnifeSpec::default().check().unwrap();
        Constraints::default().check().unwrap();
    }

    #[test]
    fn invalid_specs() {
        let k = KnifeSpec {
            width: 0.2,
            ..KnifeSpec::default()
        };
        assert!(matches!(k.check(), Err(PlanError::InvalidKnife(_))));
        let k = KnifeSpec {
            max_angle_deviation: 95.0,
            ..KnifeSpec::default()
        };
        assert!(k.check().is_err());
        let c = Constraints {
            relocation_radius: 0.3,
            ..Constraints::default()
        };
        assert!(matches!(c.check(), Err(PlanError::InvalidConstraints(_))));
        let c = Constraints {
            position_step: 0.0,
            ..Constraints::default()
        };
        assert!(c.check().is_err());
    }
}
