//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use honeycut::geom::{angle_diff_deg, direction_deg, normalize_deg, OrientedRect, Point2, Segment, Transform2};
use honeycut::honeycomb::{generate, Crossing, EdgeId, EdgeKind, GeneratorParams, HoneycombMap, NodeId};
use honeycut::planner::{plan, Constraints, KnifeSpec, PlanOptions, ProblemReason};
use honeycut::shape::{parse_path, Shape};
use rand::Rng;

pub const FIXTURES: [&str; 7] = [
    "rectangle",
    "l_bracket",
    "rounded_plate",
    "two_hole_plate",
    "tee",
    "trapezoid",
    "slot",
];

pub fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/shapes/{name}.path", env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> Shape {
    parse_path(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

/// The 500 x 340 mm test block: 10 mm cells, 0.1 mm jitter.
pub fn block_params(seed: u64) -> GeneratorParams {
    GeneratorParams {
        columns: 33,
        rows: 19,
        cell_edge: 10.0,
        jitter_sigma: 0.1,
        seed,
        ribbon_axis: 0.0,
    }
}

pub fn block(seed: u64) -> HoneycombMap {
    generate(&block_params(seed)).unwrap()
}

pub fn small_map(columns: u32, rows: u32, jitter: f64, seed: u64) -> HoneycombMap {
    generate(&GeneratorParams {
        columns,
        rows,
        jitter_sigma: jitter,
        seed,
        ..GeneratorParams::default()
    })
    .unwrap()
}

pub fn seg(a: Point2, b: Point2) -> Segment {
    Segment::new(a, b).unwrap()
}

fn own_distance(p: Point2, s: &Segment) -> f64 {
    let (a, b) = (s.a(), s.b());
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    let (qx, qy) = (a.x + t * dx - p.x, a.y + t * dy - p.y);
    (qx * qx + qy * qy).sqrt()
}

/// Every (edge, polyline segment, point) intersection, found by testing all
/// pairs. `None` when some intersection lies within `1e-6` of a segment end
/// or a pair is close to parallel, where attribution is a convention.
pub fn brute_crossings(map: &HoneycombMap, polyline: &[Segment]) -> Option<Vec<(EdgeId, usize, Point2)>> {
    let mut out = Vec::new();
    for (si, s) in polyline.iter().enumerate() {
        for e in map.edges() {
            let es = map.edge_segment(e.id).unwrap();
            let r = s.b() - s.a();
            let q = es.b() - es.a();
            let den = r.x * q.y - r.y * q.x;
            let w = es.a() - s.a();
            if den.abs() < 1e-9 * r.norm() * q.norm() {
                if own_distance(es.a(), s).min(own_distance(es.b(), s)) < 1e-3 {
                    return None;
                }
                continue;
            }
            let t = (w.x * q.y - w.y * q.x) / den;
            let u = (w.x * r.y - w.y * r.x) / den;
            let (mt, mu) = (1e-6 / r.norm(), 1e-6 / q.norm());
            if (t.abs() < mt || (t - 1.0).abs() < mt) && u > -mu && u < 1.0 + mu {
                return None;
            }
            if (u.abs() < mu || (u - 1.0).abs() < mu) && t > -mt && t < 1.0 + mt {
                return None;
            }
            if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
                out.push((e.id, si, Point2::new(s.a().x + t * r.x, s.a().y + t * r.y)));
            }
        }
    }
    out.sort_by_key(|a| (a.1, a.0));
    Some(out)
}

/// Nearest node by exhaustive scan, ties to the smaller id.
pub fn brute_nearest(map: &HoneycombMap, p: Point2) -> (NodeId, f64) {
    map.nodes()
        .iter()
        .map(|n| (n.id, p.distance(n.pos)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .unwrap()
}

/// Whether the footprint is clear of every other wall and every node,
/// scanning the whole map.
pub fn footprint_clear(map: &HoneycombMap, edge_id: EdgeId, rect: &OrientedRect) -> bool {
    map.edges()
        .iter()
        .all(|e| e.id == edge_id || !honeycut::geom::rect_intersects_segment(rect, &map.edge_segment(e.id).unwrap()))
        && map.nodes().iter().all(|n| !rect.contains(n.pos))
}

/// Full scan of the rotary grid: the feasible angle of least deviation,
/// equal deviations going to the counter-clockwise side.
pub fn brute_knife_angle(map: &HoneycombMap, edge_id: EdgeId, pos: Point2, knife: &KnifeSpec) -> Option<(f64, f64)> {
    let s = map.edge_segment(edge_id)?;
    let perp = normalize_deg(direction_deg(s.direction()) + 90.0);
    let n = (360.0 / knife.angle_resolution).round() as i64;
    let mut feasible: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        let a = normalize_deg(i as f64 * knife.angle_resolution);
        let signed = angle_diff_deg(a, perp);
        if signed.abs() > knife.max_angle_deviation + 1e-9 {
            continue;
        }
        if footprint_clear(map, edge_id, &knife.footprint(pos, a)) {
            feasible.push((a, signed));
        }
    }
    let m = feasible.iter().map(|f| f.1.abs()).reduce(f64::min)?;
    feasible
        .into_iter()
        .filter(|f| f.1.abs() <= m + 1e-9)
        .max_by(|a, b| (a.1 > 0.0).cmp(&(b.1 > 0.0)).then(b.1.abs().total_cmp(&a.1.abs())))
        .map(|(a, s)| (a, s.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCut {
    pub edge_id: EdgeId,
    pub t: f64,
    pub angle: f64,
    pub node_distance: f64,
    pub indentation: f64,
}

/// Cut point selection by enumerating the whole candidate grid with
/// exhaustive node, boundary and angle scans.
pub fn brute_select(
    crossing: &Crossing,
    map: &HoneycombMap,
    boundary: &[Segment],
    knife: &KnifeSpec,
    c: &Constraints,
) -> Result<OracleCut, ProblemReason> {
    let kind = map.edge(crossing.edge_id).unwrap().kind;
    let forbid = kind == EdgeKind::Double && !c.allow_double;
    let step = c.position_step;
    let mut raw: Vec<(EdgeId, Segment, f64)> = Vec::new();
    if forbid {
        for e in map.edges() {
            if e.id == crossing.edge_id || e.kind != EdgeKind::Single {
                continue;
            }
            let s = map.edge_segment(e.id).unwrap();
            if own_distance(crossing.point, &s) > c.relocation_radius {
                continue;
            }
            let len = s.length();
            for k in 0..=((len / step + 1e-9).floor() as i64) {
                let d = k as f64 * step;
                for t in [d / len, (len - d) / len] {
                    let t = t.clamp(0.0, 1.0);
                    if s.point_at(t).distance(crossing.point) <= c.relocation_radius + 1e-9 {
                        raw.push((e.id, s, t));
                    }
                }
            }
        }
        if raw.is_empty() {
            return Err(ProblemReason::DoubleEdge);
        }
    } else {
        let s = map.edge_segment(crossing.edge_id).unwrap();
        let len = s.length();
        let sc = crossing.t_on_edge * len;
        let kmax = (c.relocation_radius / step + 1e-9).floor() as i64;
        for k in -kmax..=kmax {
            let d = sc + k as f64 * step;
            if (-1e-9..=len + 1e-9).contains(&d) {
                raw.push((crossing.edge_id, s, (d / len).clamp(0.0, 1.0)));
            }
        }
        if raw.is_empty() {
            return Err(ProblemReason::NoFeasiblePosition);
        }
    }
    let clear: Vec<_> = raw
        .into_iter()
        .map(|(id, s, t)| {
            let p = s.point_at(t);
            (id, t, p, brute_nearest(map, p).1)
        })
        .filter(|x| x.3 >= c.node_clearance - 1e-9)
        .collect();
    if clear.is_empty() {
        return Err(if forbid {
            ProblemReason::DoubleEdge
        } else {
            ProblemReason::NodeZone
        });
    }
    let mut shallow: Vec<_> = clear
        .into_iter()
        .map(|(id, t, p, d)| {
            let ind = boundary
                .iter()
                .map(|b| own_distance(p, b))
                .fold(f64::INFINITY, f64::min);
            (id, t, p, d, ind)
        })
        .filter(|x| x.4 <= c.max_indentation)
        .collect();
    shallow.sort_by(|a, b| a.3.total_cmp(&b.3));
    let mut dmin = None;
    let mut tied = Vec::new();
    for (id, t, p, d, ind) in shallow.iter().copied() {
        if dmin.is_some_and(|m: f64| d > m + 1e-9) {
            break;
        }
        if let Some((angle, _)) = brute_knife_angle(map, id, p, knife) {
            dmin.get_or_insert(d);
            tied.push(OracleCut {
                edge_id: id,
                t,
                angle,
                node_distance: d,
                indentation: ind,
            });
        }
    }
    let Some(imin) = tied.iter().map(|x| x.indentation).reduce(f64::min) else {
        return Err(if forbid {
            ProblemReason::DoubleEdge
        } else if !shallow.is_empty() {
            ProblemReason::KnifeCollision
        } else {
            ProblemReason::NoFeasiblePosition
        });
    };
    Ok(tied
        .into_iter()
        .filter(|x| x.indentation <= imin + 1e-9)
        .min_by(|a, b| a.t.total_cmp(&b.t).then(a.edge_id.cmp(&b.edge_id)))
        .unwrap())
}

/// Dense sampling along the segment. `None` when the closest sample is too
/// near the rectangle to decide.
pub fn sampled_rect_hit(r: &OrientedRect, s: &Segment, samples: usize) -> Option<bool> {
    let (u, v) = r.axes();
    let h = s.length() / samples as f64;
    let mut closest = f64::INFINITY;
    for i in 0..=samples {
        let d = s.point_at(i as f64 / samples as f64) - r.center();
        let lu = d.dot(u).abs() - r.half_length();
        let lv = d.dot(v).abs() - r.half_width();
        if lu < -1e-9 && lv < -1e-9 {
            return Some(true);
        }
        closest = closest.min(lu.max(0.0).hypot(lv.max(0.0)));
    }
    (closest > h / 2.0 + 1e-9).then_some(false)
}

/// Plan a shape on a map and on both moved by `v`; `Err` describes the
/// first mismatch.
pub fn equivariance_case(shape: &Shape, map: &HoneycombMap, v: Point2) -> Result<usize, String> {
    let knife = KnifeSpec::default();
    let c = Constraints::default();
    let o = PlanOptions::default();
    let moved_shape = shape.apply_placement(&Transform2::new(0.0, v.x, v.y));
    let moved_map = map.translated(v);
    let a = plan(shape, map, &knife, &c, &o).map_err(|e| format!("original: {e}"))?;
    let b = plan(&moved_shape, &moved_map, &knife, &c, &o).map_err(|e| format!("moved: {e}"))?;
    if a.points.len() != b.points.len() {
        return Err(format!("{} vs {} cut points", a.points.len(), b.points.len()));
    }
    for (i, (p, q)) in a.points.iter().zip(&b.points).enumerate() {
        let d = (q.position - p.position - v).norm();
        if p.edge_id != q.edge_id || d > 1e-6 || (p.knife_angle - q.knife_angle).abs() > 1e-9 {
            return Err(format!("point {i}: {p:?} vs {q:?}"));
        }
    }
    Ok(a.points.len())
}

/// A random simple shape: rectangle, optionally with rounded corners or a
/// central hole.
pub fn random_shape<R: Rng>(rng: &mut R) -> Shape {
    let w: f64 = rng.random_range(30.0..90.0);
    let h: f64 = rng.random_range(30.0..70.0);
    let text = match rng.random_range(0..3) {
        0 => format!("M 0 0 L {w} 0 L {w} {h} L 0 {h} Z"),
        1 => {
            let r = 10.0;
            format!(
                "M {r} 0 L {a} 0 A {w} {r} {r} ccw small L {w} {b} A {a} {h} {r} ccw small \
                 L {r} {h} A 0 {b} {r} ccw small L 0 {r} A {r} 0 {r} ccw small Z",
                a = w - r,
                b = h - r
            )
        }
        _ => {
            let (cx, cy, r) = (w / 2.0, h / 2.0, 10.0);
            format!(
                "M 0 0 L {w} 0 L {w} {h} L 0 {h} Z\nM {} {cy} A {} {cy} {r} ccw small A {} {cy} {r} ccw small Z",
                cx + r,
                cx - r,
                cx + r
            )
        }
    };
    parse_path(&text).unwrap()
}
