use super::fit::{block_edge_placement, fit_check, initial_placement};
use super::{
    select_cut_point, Constraints, CutPlan, CutPoint, KnifeSpec, PlanError, PlanningFailure, ProblemPoint,
    ProblemReason, Report,
};
use crate::geom::{normalize_deg, point_in_polygon, point_segment_distance, Point2, Segment, Transform2, EPS_GEOM};
use crate::honeycomb::{Crossing, EdgeKind, HoneycombMap};
use crate::shape::{Placement, Shape, DEFAULT_FLATTEN_TOL};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PlanOptions {
    /// Lay a long straight side on the outline's bottom edge and try that
    /// row first. Contour segments lying on the outline need no cuts.
    pub use_block_edge: bool,
}

/// Rotations tried, in order: `α, α+180, α+90, α+270, α±5, α±10, α±15`.
pub fn orientation_list(alpha: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for d in [0.0, 180.0, 90.0, 270.0, 5.0, -5.0, 10.0, -10.0, 15.0, -15.0] {
        let r = normalize_deg(alpha + d);
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

struct Eval {
    points: Vec<CutPoint>,
    problems: Vec<ProblemPoint>,
    indentation_sum: f64,
}

impl Eval {
    fn key(&self) -> (usize, f64) {
        (self.problems.len(), self.indentation_sum)
    }
}

fn better(a: (usize, f64), b: (usize, f64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Whether a contour segment lies along the outline.
fn on_outline(seg: &Segment, outline: &[Segment]) -> bool {
    outline
        .iter()
        .any(|o| point_segment_distance(seg.a(), o).0 <= EPS_GEOM && point_segment_distance(seg.b(), o).0 <= EPS_GEOM)
}

fn outline_segments(map: &HoneycombMap) -> Vec<Segment> {
    let o = map.outline();
    (0..o.len())
        .filter_map(|i| Segment::new(o[i], o[(i + 1) % o.len()]).ok())
        .collect()
}

struct Ctx<'a> {
    map: &'a HoneycombMap,
    knife: &'a KnifeSpec,
    constraints: &'a Constraints,
    /// Outline segments when contour parts on the block edge are exempt.
    exempt: Option<Vec<Segment>>,
}

impl Ctx<'_> {
    /// Crossings and cut points for placed, flattened contours. Returns
    /// `None` once more than `cap` problems are found.
    fn evaluate(&self, contours: &[Vec<Segment>], cap: usize) -> Option<Eval> {
        let map = self.map;
        let mut crossings: Vec<Crossing> = Vec::new();
        let mut overlaps = Vec::new();
        let mut overlap_contour = Vec::new();
        let mut buf = Vec::new();
        let mut cheap = 0usize;
        for (ci, poly) in contours.iter().enumerate() {
            for si in 0..poly.len() {
                if let Some(o) = &self.exempt {
                    if on_outline(&poly[si], o) {
                        continue;
                    }
                }
                let first = crossings.len();
                let had = overlaps.len();
                map.segment_crossings(poly, si, &mut buf, &mut crossings, &mut overlaps);
                overlap_contour.resize(overlaps.len(), ci);
                cheap += overlaps.len() - had;
                if !self.constraints.allow_double {
                    cheap += crossings[first..]
                        .iter()
                        .filter(|c| map.edge_kind_at(c.edge_id) == Some(EdgeKind::Double))
                        .count();
                }
                if cheap > cap {
                    return None;
                }
            }
        }

        let boundary: Vec<Segment> = contours.iter().flatten().copied().collect();
        let mut points = Vec::with_capacity(crossings.len());
        let mut point_crossing = Vec::with_capacity(crossings.len());
        let mut problems = Vec::new();
        let mut costly = 0usize;
        for c in &crossings {
            match select_cut_point(c, map, &boundary, self.knife, self.constraints) {
                Ok(p) => {
                    points.push(p);
                    point_crossing.push(*c);
                }
                Err(pp) => {
                    problems.push(pp);
                    if pp.reason != ProblemReason::DoubleEdge {
                        costly += 1;
                        if cheap + costly > cap {
                            return None;
                        }
                    }
                }
            }
        }
        // A contour segment lying along a wall: reported at the segment's
        // midpoint.
        for (&(edge_id, si), &ci) in overlaps.iter().zip(&overlap_contour) {
            let point = contours[ci][si].point_at(0.5);
            let t_on_edge = map
                .edge_segment(edge_id)
                .map_or(0.0, |s| point_segment_distance(point, &s).1);
            problems.push(ProblemPoint {
                crossing: Crossing {
                    edge_id,
                    point,
                    t_on_edge,
                    segment_index: si,
                    t_on_segment: 0.5,
                },
                reason: ProblemReason::NoFeasiblePosition,
            });
        }

        let sep = self.constraints.same_edge_min_separation - 1e-9;
        for j in 0..points.len() {
            for i in 0..j {
                if points[i].edge_id == points[j].edge_id && points[i].position.distance(points[j].position) < sep {
                    problems.push(ProblemPoint {
                        crossing: point_crossing[j],
                        reason: ProblemReason::NoFeasiblePosition,
                    });
                    break;
                }
            }
        }
        if problems.len() > cap {
            return None;
        }
        let indentation_sum = points.iter().map(|p| p.indentation).sum();
        Some(Eval {
            points,
            problems,
            indentation_sum,
        })
    }

    /// Evaluation through the canonical placed-shape path, identical to what
    /// a verifier reconstructs.
    fn evaluate_exact(&self, shape: &Shape, placement: &Placement) -> Eval {
        let flat = shape.apply_placement(placement).flatten(DEFAULT_FLATTEN_TOL);
        self.evaluate(&flat, usize::MAX).expect("uncapped")
    }
}

fn inside_outline(contours: &[Vec<Segment>], map: &HoneycombMap) -> bool {
    let o = map.outline();
    contours.iter().flatten().all(|s| point_in_polygon(s.a(), o))
}

/// Search placements in the fixed order until one produces a cut point for
/// every crossing.
pub fn plan(
    shape: &Shape,
    map: &HoneycombMap,
    knife: &KnifeSpec,
    constraints: &Constraints,
    options: &PlanOptions,
) -> Result<CutPlan, PlanError> {
    knife.check()?;
    constraints.check()?;
    fit_check(shape, map)?;
    let ob = map.outline_bbox();
    let cell = map.nominal_cell_edge();
    let step = cell / 5.0;
    let rect_outline = map.outline_is_axis_rect();

    let block = if options.use_block_edge {
        block_edge_placement(shape, map)
    } else {
        None
    };
    let ctx = Ctx {
        map,
        knife,
        constraints,
        exempt: block.map(|_| outline_segments(map)),
    };
    let init = block.unwrap_or_else(|| initial_placement(shape, map, false));

    // (rotation, fixed dy for the block-edge row)
    let mut stages: Vec<(f64, Option<f64>)> = Vec::new();
    if let Some(b) = block {
        stages.push((b.rotation(), Some(b.translation().y)));
    }
    stages.extend(orientation_list(init.rotation()).into_iter().map(|r| (r, None)));

    let mut tried: u64 = 0;
    let mut best: Option<((usize, f64), Placement)> = None;
    for (rot, fixed_dy) in stages {
        let base = shape.apply_placement(&Transform2::new(rot, 0.0, 0.0));
        let bb = base.bbox();
        let flat = base.flatten(DEFAULT_FLATTEN_TOL);
        let ks = |lo: f64, hi: f64, anchor: f64| {
            let k0 = ((lo - anchor) / step - 1e-9).ceil() as i64;
            let k1 = ((hi - anchor) / step + 1e-9).floor() as i64;
            k0..=k1
        };
        let ax = ob.min.x + cell - bb.min.x;
        let ay = ob.min.y + cell - bb.min.y;
        let xs: Vec<f64> = ks(ob.min.x - bb.min.x, ob.max.x - bb.max.x, ax)
            .map(|k| ax + k as f64 * step)
            .collect();
        let ys: Vec<f64> = match fixed_dy {
            Some(dy) => vec![dy],
            None => ks(ob.min.y - bb.min.y, ob.max.y - bb.max.y, ay)
                .map(|k| ay + k as f64 * step)
                .collect(),
        };
        for &dy in &ys {
            let cap = best.as_ref().map_or(usize::MAX, |b| b.0 .0);
            let row: Vec<Option<Option<Eval>>> = xs
                .par_iter()
                .map(|&dx| {
                    let v = Point2::new(dx, dy);
                    let placed: Vec<Vec<Segment>> = flat
                        .iter()
                        .map(|c| c.iter().map(|s| s.translated(v)).collect())
                        .collect();
                    if !rect_outline && !inside_outline(&placed, map) {
                        return None;
                    }
                    Some(ctx.evaluate(&placed, cap))
                })
                .collect();
            for (&dx, r) in xs.iter().zip(row) {
                let Some(eval) = r else { continue };
                tried += 1;
                let Some(eval) = eval else { continue };
                let placement = Transform2::new(rot, dx, dy);
                if eval.problems.is_empty() {
                    let exact = ctx.evaluate_exact(shape, &placement);
                    if exact.problems.is_empty() {
                        let metrics = Report::from_points(&exact.points, map, tried);
                        return Ok(CutPlan {
                            placement,
                            points: exact.points,
                            metrics,
                        });
                    }
                }
                if best.as_ref().is_none_or(|b| better(eval.key(), b.0)) {
                    best = Some((eval.key(), placement));
                }
            }
        }
    }

    let (best_placement, problem_points) = match best {
        Some((_, p)) => (Some(p), ctx.evaluate_exact(shape, &p).problems),
        None => (None, Vec::new()),
    };
    Err(PlanError::PlanningFailed(Box::new(PlanningFailure {
        best_placement,
        problem_points,
        placements_tried: tried,
    })))
}
