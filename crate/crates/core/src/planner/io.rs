//! Plan export format.
//!
//! A JSON document with a format tag and version, the placement, the cut
//! points in traversal order and the report. Floats round-trip exactly.

use super::{CutPlan, CutPoint, PlanningFailure, Report};
use crate::geom::{Point2, Transform2};
use crate::honeycomb::EdgeId;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_NAME: &str = "cut-plan";
pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanIoError {
    #[error("malformed plan file: {0}")]
    Parse(String),
    #[error("not a plan file (format `{0}`)")]
    Format(String),
    #[error("unsupported plan version {0}")]
    Version(u64),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlacementRec {
    rotation_deg: f64,
    dx: f64,
    dy: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointRec {
    edge_id: EdgeId,
    x: f64,
    y: f64,
    t: f64,
    angle_deg: f64,
    deviation_deg: f64,
    indentation_mm: f64,
    node_distance_mm: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricsRec {
    cut_point_count: usize,
    min_node_distance_mm: Option<f64>,
    max_indentation_mm: f64,
    double_edge_cuts: usize,
    max_angle_deviation_deg: f64,
    placements_tried: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanDoc {
    format: String,
    version: u64,
    placement: PlacementRec,
    points: Vec<PointRec>,
    metrics: MetricsRec,
}

#[derive(Deserialize)]
struct Probe {
    format: String,
    version: u64,
}

fn metrics_rec(m: &Report) -> MetricsRec {
    MetricsRec {
        cut_point_count: m.cut_point_count,
        min_node_distance_mm: m.min_node_distance,
        max_indentation_mm: m.max_indentation,
        double_edge_cuts: m.double_edge_cuts,
        max_angle_deviation_deg: m.max_angle_deviation_used,
        placements_tried: m.placements_tried,
    }
}

fn placement_rec(t: &Transform2) -> PlacementRec {
    PlacementRec {
        rotation_deg: t.rotation(),
        dx: t.translation().x,
        dy: t.translation().y,
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializes");
    s.push('\n');
    s
}

/// A report in the same dialect as the `metrics` block of a plan file.
pub fn report_json(m: &Report) -> String {
    pretty(&metrics_rec(m))
}

#[derive(Serialize)]
struct ProblemRec {
    reason: &'static str,
    edge_id: EdgeId,
    x: f64,
    y: f64,
    segment_index: usize,
}

#[derive(Serialize)]
struct FailureDoc {
    placements_tried: u64,
    best_placement: Option<PlacementRec>,
    problems: Vec<ProblemRec>,
}

/// Best-effort problem list of a failed search.
pub fn failure_json(f: &PlanningFailure) -> String {
    pretty(&FailureDoc {
        placements_tried: f.placements_tried,
        best_placement: f.best_placement.as_ref().map(placement_rec),
        problems: f
            .problem_points
            .iter()
            .map(|p| ProblemRec {
                reason: p.reason.as_str(),
                edge_id: p.crossing.edge_id,
                x: p.crossing.point.x,
                y: p.crossing.point.y,
                segment_index: p.crossing.segment_index,
            })
            .collect(),
    })
}

pub fn save_plan(plan: &CutPlan) -> String {
    let doc = PlanDoc {
        format: FORMAT_NAME.into(),
        version: FORMAT_VERSION,
        placement: placement_rec(&plan.placement),
        points: plan
            .points
            .iter()
            .map(|p| PointRec {
                edge_id: p.edge_id,
                x: p.position.x,
                y: p.position.y,
                t: p.t_on_edge,
                angle_deg: p.knife_angle,
                deviation_deg: p.angle_deviation,
                indentation_mm: p.indentation,
                node_distance_mm: p.node_distance,
            })
            .collect(),
        metrics: metrics_rec(&plan.metrics),
    };
    pretty(&doc)
}

pub fn load_plan(text: &str) -> Result<CutPlan, PlanIoError> {
    let parse = |e: serde_json::Error| PlanIoError::Parse(e.to_string());
    if let Ok(p) = serde_json::from_str::<Probe>(text) {
        if p.format != FORMAT_NAME {
            return Err(PlanIoError::Format(p.format));
        }
        if p.version != FORMAT_VERSION {
            return Err(PlanIoError::Version(p.version));
        }
    }
    let doc: PlanDoc = serde_json::from_str(text).map_err(parse)?;
    let m = doc.metrics;
    Ok(CutPlan {
        placement: Transform2::new(doc.placement.rotation_deg, doc.placement.dx, doc.placement.dy),
        points: doc
            .points
            .into_iter()
            .map(|p| CutPoint {
                edge_id: p.edge_id,
                position: Point2::new(p.x, p.y),
                t_on_edge: p.t,
                knife_angle: p.angle_deg,
                angle_deviation: p.deviation_deg,
                indentation: p.indentation_mm,
                node_distance: p.node_distance_mm,
            })
            .collect(),
        metrics: Report {
            cut_point_count: m.cut_point_count,
            min_node_distance: m.min_node_distance_mm,
            max_indentation: m.max_indentation_mm,
            double_edge_cuts: m.double_edge_cuts,
            max_angle_deviation_used: m.max_angle_deviation_deg,
            placements_tried: m.placements_tried,
        },
    })
}
