use super::{boundary_distance, perpendicular_deg, Constraints, CutPoint, KnifeSpec, ProblemPoint, ProblemReason};
use crate::geom::{angle_diff_deg, normalize_deg, Point2, Segment};
use crate::honeycomb::{Crossing, EdgeId, EdgeKind, HoneycombMap};

/// Candidates whose node distances differ by less than this are tied.
const TIE_EPS: f64 = 1e-9;

/// A feasible blade direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnifeAngle {
    /// Absolute direction, degrees in `[0, 360)`.
    pub angle: f64,
    /// Unsigned deviation from the wall-perpendicular.
    pub deviation: f64,
}

/// Smallest-deviation blade angle on the rotary grid whose footprint at
/// `position` avoids every wall except `edge_id` and every nodal point.
/// Equal deviations on both sides go to the counter-clockwise one.
pub fn feasible_knife_angle(
    edge_id: EdgeId,
    position: Point2,
    map: &HoneycombMap,
    knife: &KnifeSpec,
) -> Option<KnifeAngle> {
    let seg = map.edge_segment(edge_id)?;
    knife_angle_on(edge_id, &seg, position, map, knife)
}

fn knife_angle_on(
    edge_id: EdgeId,
    seg: &Segment,
    position: Point2,
    map: &HoneycombMap,
    knife: &KnifeSpec,
) -> Option<KnifeAngle> {
    let perp = perpendicular_deg(seg);
    let res = knife.angle_resolution;
    let base = (perp / res).round() as i64;
    let max = knife.max_angle_deviation + 1e-9;
    let (index, segs) = map.edge_index_raw();
    let mut buf = Vec::new();
    let ok = |angle: f64, buf: &mut Vec<usize>| {
        let rect = knife.footprint(position, angle);
        index.query_into(&rect.bbox(), buf);
        let edges = map.edges();
        for &ei in buf.iter() {
            if edges[ei].id == edge_id {
                continue;
            }
            if let Some(s) = &segs[ei] {
                if crate::geom::rect_intersects_segment(&rect, s) {
                    return false;
                }
            }
        }
        map.nodes_in_rect(&rect).is_empty()
    };
    let at = |step: i64| {
        let angle = normalize_deg((base + step) as f64 * res);
        (angle, angle_diff_deg(angle, perp).abs())
    };
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        let steps = if k == 0 {
            vec![at(0)]
        } else {
            let (up, down) = (at(k), at(-k));
            if down.1 + 1e-9 < up.1 {
                vec![down, up]
            } else {
                vec![up, down]
            }
        };
        for (angle, deviation) in steps {
            if deviation > max {
                continue;
            }
            any = true;
            if ok(angle, &mut buf) {
                return Some(KnifeAngle { angle, deviation });
            }
        }
        if !any {
            return None;
        }
        k += 1;
    }
}

struct Candidate {
    edge_id: EdgeId,
    seg: Segment,
    position: Point2,
    t: f64,
    node_distance: f64,
}

/// Choose the cut for one crossing. `boundary` is the flattened placed
/// contour set used for indentation.
///
/// Candidates lie on the crossed wall within the relocation radius, on the
/// step grid through the crossing. A crossing on a forbidden double wall
/// instead takes candidates on single walls within the radius, on grids
/// stepped from either end of each wall. A candidate is feasible when it
/// keeps the node clearance, stays within the indentation limit and admits a
/// blade angle. The result minimizes node distance, then indentation, then
/// `t`, then edge id.
pub fn select_cut_point(
    crossing: &Crossing,
    map: &HoneycombMap,
    boundary: &[Segment],
    knife: &KnifeSpec,
    constraints: &Constraints,
) -> Result<CutPoint, ProblemPoint> {
    let problem = |reason| ProblemPoint {
        crossing: *crossing,
        reason,
    };
    let edge_id = crossing.edge_id;
    let (Some(seg), Some(kind)) = (map.edge_segment(edge_id), map.edge_kind_at(edge_id)) else {
        return Err(problem(ProblemReason::NoFeasiblePosition));
    };
    let step = constraints.position_step;
    let radius = constraints.relocation_radius;
    let clear = constraints.node_clearance - 1e-9;

    let mut raw: Vec<(EdgeId, Segment, f64)> = Vec::new();
    if kind == EdgeKind::Double && !constraints.allow_double {
        for (id, _) in map.edges_near(crossing.point, radius) {
            if id == edge_id || map.edge_kind_at(id) != Some(EdgeKind::Single) {
                continue;
            }
            let s = map.edge_segment(id).expect("listed edge");
            let len = s.length();
            let n = (len / step + 1e-9).floor() as i64;
            for k in 0..=n {
                let d = k as f64 * step;
                for t in [d / len, (len - d) / len] {
                    let t = t.clamp(0.0, 1.0);
                    if s.point_at(t).distance(crossing.point) <= radius + 1e-9 {
                        raw.push((id, s, t));
                    }
                }
            }
        }
        if raw.is_empty() {
            return Err(problem(ProblemReason::DoubleEdge));
        }
    } else {
        let len = seg.length();
        let sc = crossing.t_on_edge * len;
        let kmax = (radius / step + 1e-9).floor() as i64;
        for k in -kmax..=kmax {
            let s = sc + k as f64 * step;
            if s < -1e-9 || s > len + 1e-9 {
                continue;
            }
            raw.push((edge_id, seg, (s / len).clamp(0.0, 1.0)));
        }
        if raw.is_empty() {
            return Err(problem(ProblemReason::NoFeasiblePosition));
        }
    }

    let mut cands: Vec<Candidate> = raw
        .into_iter()
        .filter_map(|(id, s, t)| {
            let position = s.point_at(t);
            let node_distance = map.node_distance_on_edge(id, position).expect("edge exists");
            (node_distance >= clear).then_some(Candidate {
                edge_id: id,
                seg: s,
                position,
                t,
                node_distance,
            })
        })
        .collect();
    if cands.is_empty() {
        return Err(problem(if kind == EdgeKind::Double && !constraints.allow_double {
            ProblemReason::DoubleEdge
        } else {
            ProblemReason::NodeZone
        }));
    }
    cands.sort_by(|a, b| {
        a.node_distance
            .total_cmp(&b.node_distance)
            .then(a.t.total_cmp(&b.t))
            .then(a.edge_id.cmp(&b.edge_id))
    });

    let mut knife_failed = false;
    let mut best_d: Option<f64> = None;
    let mut tied: Vec<(Candidate, KnifeAngle, f64)> = Vec::new();
    for c in cands {
        if let Some(d) = best_d {
            if c.node_distance > d + TIE_EPS {
                break;
            }
        }
        let indentation = boundary_distance(c.position, boundary);
        if indentation > constraints.max_indentation {
            continue;
        }
        let Some(angle) = knife_angle_on(c.edge_id, &c.seg, c.position, map, knife) else {
            knife_failed = true;
            continue;
        };
        best_d.get_or_insert(c.node_distance);
        tied.push((c, angle, indentation));
    }
    let Some(min_ind) = tied.iter().map(|x| x.2).reduce(f64::min) else {
        return Err(problem(if kind == EdgeKind::Double && !constraints.allow_double {
            ProblemReason::DoubleEdge
        } else if knife_failed {
            ProblemReason::KnifeCollision
        } else {
            ProblemReason::NoFeasiblePosition
        }));
    };
    let (c, angle, indentation) = tied
        .into_iter()
        .filter(|x| x.2 <= min_ind + TIE_EPS)
        .min_by(|a, b| a.0.t.total_cmp(&b.0.t).then(a.0.edge_id.cmp(&b.0.edge_id)))
        .expect("non-empty");
    Ok(CutPoint {
        edge_id: c.edge_id,
        position: c.position,
        t_on_edge: c.t,
        knife_angle: angle.angle,
        angle_deviation: angle.deviation,
        indentation,
        node_distance: c.node_distance,
    })
}
