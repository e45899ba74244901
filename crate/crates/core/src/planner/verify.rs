use super::{perpendicular_deg, Constraints, CutPlan, CutPoint, KnifeSpec, Report};
use crate::geom::{angle_diff_deg, point_segment_distance, rect_intersects_segment, Segment, EPS_GEOM};
use crate::honeycomb::{EdgeId, EdgeKind, HoneycombMap, NodeId};
use crate::shape::{Shape, DEFAULT_FLATTEN_TOL};
use std::fmt;

/// A broken plan constraint. `index` is the cut point's position in the
/// plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanViolation {
    UnknownEdge {
        index: usize,
        edge_id: EdgeId,
    },
    OffEdge {
        index: usize,
        distance: f64,
    },
    NodeZone {
        index: usize,
        node_distance: f64,
    },
    Indentation {
        index: usize,
        indentation: f64,
    },
    AngleDeviation {
        index: usize,
        deviation: f64,
    },
    AngleNotQuantized {
        index: usize,
        angle: f64,
    },
    KnifeCollision {
        index: usize,
        edge_id: EdgeId,
    },
    KnifeOnNode {
        index: usize,
        node_id: NodeId,
    },
    DoubleEdgeCut {
        index: usize,
        edge_id: EdgeId,
    },
    Separation {
        edge_id: EdgeId,
        first: usize,
        second: usize,
        distance: f64,
    },
    FieldMismatch {
        index: usize,
        field: &'static str,
        stored: f64,
        actual: f64,
    },
    MetricsMismatch {
        field: &'static str,
    },
}

impl fmt::Display for PlanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PlanViolation::*;
        match self {
            UnknownEdge { index, edge_id } => write!(f, "point {index}: unknown edge {edge_id}"),
            OffEdge { index, distance } => write!(f, "point {index}: {distance:.6} mm off its edge"),
            NodeZone { index, node_distance } => write!(f, "point {index}: {node_distance:.6} mm from a node"),
            Indentation { index, indentation } => write!(f, "point {index}: indentation {indentation:.6} mm"),
            AngleDeviation { index, deviation } => write!(f, "point {index}: blade deviation {deviation:.3} deg"),
            AngleNotQuantized { index, angle } => write!(f, "point {index}: angle {angle} off the rotary grid"),
            KnifeCollision { index, edge_id } => write!(f, "point {index}: blade hits edge {edge_id}"),
            KnifeOnNode { index, node_id } => write!(f, "point {index}: blade covers node {node_id}"),
            DoubleEdgeCut { index, edge_id } => write!(f, "point {index}: cut on double edge {edge_id}"),
            Separation {
                edge_id,
                first,
                second,
                distance,
            } => write!(
                f,
                "points {first} and {second} on edge {edge_id} only {distance:.6} mm apart"
            ),
            FieldMismatch {
                index,
                field,
                stored,
                actual,
            } => write!(f, "point {index}: stored {field} {stored} but recomputed {actual}"),
            MetricsMismatch { field } => write!(f, "metrics field {field} disagrees with the points"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct VerifyTolerance {
    /// Extra slack on every length bound.
    pub position: f64,
    /// Compare stored per-point fields with recomputed ones.
    pub check_fields: bool,
}

const FIELD_TOL: f64 = 1e-9;

/// Check cut points against the map by exhaustive scans. Returns the
/// recomputed report (with `placements_tried` zero) and all violations.
pub(crate) fn verify_points(
    points: &[CutPoint],
    boundary: &[Segment],
    map: &HoneycombMap,
    knife: &KnifeSpec,
    constraints: &Constraints,
    tol: VerifyTolerance,
) -> (Report, Vec<PlanViolation>) {
    let mut out = Vec::new();
    let mut recomputed = Vec::with_capacity(points.len());
    let lookup = |id: EdgeId| {
        let e = map.edges().iter().find(|e| e.id == id)?;
        let a = map.nodes().iter().find(|n| n.id == e.a)?.pos;
        let b = map.nodes().iter().find(|n| n.id == e.b)?.pos;
        Some((e.kind, Segment::new(a, b).ok()?))
    };
    let slack = EPS_GEOM + tol.position;

    for (index, p) in points.iter().enumerate() {
        let Some((kind, seg)) = lookup(p.edge_id) else {
            out.push(PlanViolation::UnknownEdge {
                index,
                edge_id: p.edge_id,
            });
            continue;
        };
        let (off, t) = point_segment_distance(p.position, &seg);
        if off > slack {
            out.push(PlanViolation::OffEdge { index, distance: off });
        }
        let node_distance = map
            .nodes()
            .iter()
            .map(|n| n.pos.distance(p.position))
            .fold(f64::INFINITY, f64::min);
        let indentation = boundary
            .iter()
            .map(|s| point_segment_distance(p.position, s).0)
            .fold(f64::INFINITY, f64::min);
        let deviation = angle_diff_deg(p.knife_angle, perpendicular_deg(&seg)).abs();

        if tol.check_fields {
            for (field, stored, actual) in [
                ("t", p.t_on_edge, t),
                ("node_distance", p.node_distance, node_distance),
                ("indentation", p.indentation, indentation),
                ("angle_deviation", p.angle_deviation, deviation),
            ] {
                if !((stored - actual).abs() <= FIELD_TOL) {
                    out.push(PlanViolation::FieldMismatch {
                        index,
                        field,
                        stored,
                        actual,
                    });
                }
            }
        }
        let worst_nd = if tol.check_fields {
            node_distance.min(p.node_distance)
        } else {
            node_distance
        };
        if !(worst_nd >= constraints.node_clearance - slack) {
            out.push(PlanViolation::NodeZone {
                index,
                node_distance: worst_nd,
            });
        }
        let worst_ind = if tol.check_fields {
            indentation.max(p.indentation)
        } else {
            indentation
        };
        if !(worst_ind <= constraints.max_indentation + slack) {
            out.push(PlanViolation::Indentation {
                index,
                indentation: worst_ind,
            });
        }
        let worst_dev = if tol.check_fields {
            deviation.max(p.angle_deviation)
        } else {
            deviation
        };
        if !(worst_dev <= knife.max_angle_deviation + 1e-9) {
            out.push(PlanViolation::AngleDeviation {
                index,
                deviation: worst_dev,
            });
        }
        let steps = p.knife_angle / knife.angle_resolution;
        if !((steps - steps.round()).abs() <= 1e-6) {
            out.push(PlanViolation::AngleNotQuantized {
                index,
                angle: p.knife_angle,
            });
        }
        if kind == EdgeKind::Double && !constraints.allow_double {
            out.push(PlanViolation::DoubleEdgeCut {
                index,
                edge_id: p.edge_id,
            });
        }
        if let Ok(rect) =
            crate::geom::OrientedRect::new(p.position, knife.width * 0.5, knife.thickness * 0.5, p.knife_angle)
        {
            for e in map.edges() {
                if e.id == p.edge_id {
                    continue;
                }
                let Some((_, s)) = lookup(e.id) else { continue };
                if rect_intersects_segment(&rect, &s) {
                    out.push(PlanViolation::KnifeCollision { index, edge_id: e.id });
                    break;
                }
            }
            if let Some(n) = map.nodes().iter().find(|n| rect.contains(n.pos)) {
                out.push(PlanViolation::KnifeOnNode { index, node_id: n.id });
            }
        }
        recomputed.push((p.edge_id, kind, node_distance, indentation, deviation));
    }

    for j in 0..points.len() {
        for i in 0..j {
            if points[i].edge_id != points[j].edge_id {
                continue;
            }
            let d = points[i].position.distance(points[j].position);
            if d < constraints.same_edge_min_separation - slack {
                out.push(PlanViolation::Separation {
                    edge_id: points[i].edge_id,
                    first: i,
                    second: j,
                    distance: d,
                });
            }
        }
    }

    let report = Report {
        cut_point_count: points.len(),
        min_node_distance: recomputed.iter().map(|r| r.2).reduce(f64::min),
        max_indentation: recomputed.iter().map(|r| r.3).fold(0.0, f64::max),
        double_edge_cuts: recomputed.iter().filter(|r| r.1 == EdgeKind::Double).count(),
        max_angle_deviation_used: recomputed.iter().map(|r| r.4).fold(0.0, f64::max),
        placements_tried: 0,
    };
    (report, out)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= FIELD_TOL
}

/// Re-check a plan from scratch against the map and the placed shape.
pub fn verify_plan(
    plan: &CutPlan,
    shape: &Shape,
    map: &HoneycombMap,
    knife: &KnifeSpec,
    constraints: &Constraints,
) -> Result<Report, Vec<PlanViolation>> {
    let boundary: Vec<Segment> = shape
        .apply_placement(&plan.placement)
        .flatten(DEFAULT_FLATTEN_TOL)
        .into_iter()
        .flatten()
        .collect();
    let tol = VerifyTolerance {
        position: 0.0,
        check_fields: true,
    };
    let (mut report, mut out) = verify_points(&plan.points, &boundary, map, knife, constraints, tol);
    report.placements_tried = plan.metrics.placements_tried;
    let m = &plan.metrics;
    let checks = [
        ("cut_point_count", report.cut_point_count == m.cut_point_count),
        (
            "min_node_distance",
            match (report.min_node_distance, m.min_node_distance) {
                (Some(a), Some(b)) => close(a, b),
                (None, None) => true,
                _ => false,
            },
        ),
        ("max_indentation", close(report.max_indentation, m.max_indentation)),
        ("double_edge_cuts", report.double_edge_cuts == m.double_edge_cuts),
        (
            "max_angle_deviation_used",
            close(report.max_angle_deviation_used, m.max_angle_deviation_used),
        ),
    ];
    for (field, ok) in checks {
        if !ok {
            out.push(PlanViolation::MetricsMismatch { field });
        }
    }
    if out.is_empty() {
        Ok(report)
    } else {
        Err(out)
    }
}
