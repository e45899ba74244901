use super::{GCommand, GProgram, GcodeError, MachineConfig};
use crate::geom::{angle_diff_deg, direction_deg, normalize_deg, point_segment_distance, Point2, Segment};
use crate::honeycomb::{EdgeId, HoneycombMap};
use crate::planner::{verify_points, Constraints, CutPoint, KnifeSpec, PlanViolation, Report, VerifyTolerance};
use crate::shape::{Shape, DEFAULT_FLATTEN_TOL};
use std::fmt;

/// Maximum distance from a simulated cut to the wall it is attributed to.
const SNAP_TOL: f64 = 0.02;

/// One full-depth plunge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulatedCut {
    pub x: f64,
    pub y: f64,
    pub angle: f64,
    /// Penetration below the block top, positive.
    pub depth: f64,
    /// Source line of the plunge.
    pub line: usize,
}

/// Replay a program from the home state (X0 Y0 at safe Z, blade angle
/// unset).
pub fn simulate(program: &GProgram, cfg: &MachineConfig) -> Result<Vec<SimulatedCut>, GcodeError> {
    cfg.check()?;
    let floor = cfg.plunge_z();
    let (mut x, mut y, mut z) = (0.0, 0.0, cfg.safe_z);
    let mut a: Option<f64> = None;
    let mut cuts = Vec::new();
    for (cmd, &line) in program.commands.iter().zip(&program.source_line_map) {
        let (nx, ny, nz, na, linear) = match *cmd {
            GCommand::Rapid { x, y, z, a } => (x, y, z, a, false),
            GCommand::Linear { x, y, z, a, .. } => (x, y, z, a, true),
            _ => continue,
        };
        x = nx.unwrap_or(x);
        y = ny.unwrap_or(y);
        if let Some(v) = na {
            a = Some(v);
        }
        if let Some(v) = nz {
            if v < floor - 1e-9 {
                return Err(GcodeError::ZBelowBacking { line, z: v });
            }
            let reached = (v - floor).abs() <= 1e-9 && (z - floor).abs() > 1e-9;
            z = v;
            if linear && reached {
                let angle = a.ok_or(GcodeError::PlungeWithoutAngle { line })?;
                cuts.push(SimulatedCut {
                    x,
                    y,
                    angle,
                    depth: -z,
                    line,
                });
            }
        }
    }
    Ok(cuts)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProgramViolation {
    Simulation(GcodeError),
    /// A plunge farther than 0.02 mm from every wall.
    CutOffEdge {
        index: usize,
        line: usize,
        distance: f64,
    },
    Plan(PlanViolation),
}

impl fmt::Display for ProgramViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProgramViolation::Simulation(e) => write!(f, "{e}"),
            ProgramViolation::CutOffEdge { index, line, distance } => {
                write!(f, "cut {index} (line {line}) is {distance:.4} mm from the nearest edge")
            }
            ProgramViolation::Plan(v) => write!(f, "{v}"),
        }
    }
}

/// Simulate a program and check every plunge against the map and the
/// placed shape with plan rules. Length bounds get one position quantum of
/// slack.
pub fn verify_program(
    program: &GProgram,
    map: &HoneycombMap,
    placed_shape: &Shape,
    knife: &KnifeSpec,
    constraints: &Constraints,
    cfg: &MachineConfig,
) -> Result<Report, Vec<ProgramViolation>> {
    let cuts = simulate(program, cfg).map_err(|e| vec![ProgramViolation::Simulation(e)])?;
    let mut out = Vec::new();
    let mut points = Vec::with_capacity(cuts.len());
    let edges: Vec<(EdgeId, Segment)> = map
        .edges()
        .iter()
        .filter_map(|e| Some((e.id, map.edge_segment(e.id)?)))
        .collect();
    for (index, c) in cuts.iter().enumerate() {
        let p = Point2::new(c.x, c.y);
        let nearest = edges
            .iter()
            .map(|(id, s)| {
                let (d, t) = point_segment_distance(p, s);
                (d, *id, *s, t)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let Some((_, edge_id, seg, t)) = nearest.filter(|n| n.0 <= SNAP_TOL) else {
            out.push(ProgramViolation::CutOffEdge {
                index,
                line: c.line,
                distance: nearest.map_or(f64::INFINITY, |n| n.0),
            });
            continue;
        };
        let perp = normalize_deg(direction_deg(seg.direction()) + 90.0);
        points.push(CutPoint {
            edge_id,
            position: p,
            t_on_edge: t,
            knife_angle: c.angle,
            angle_deviation: angle_diff_deg(c.angle, perp).abs(),
            indentation: 0.0,
            node_distance: 0.0,
        });
    }
    let boundary: Vec<Segment> = placed_shape
        .flatten(DEFAULT_FLATTEN_TOL)
        .into_iter()
        .flatten()
        .collect();
    let tol = VerifyTolerance {
        position: cfg.position_quantum,
        check_fields: false,
    };
    let (report, violations) = verify_points(&points, &boundary, map, knife, constraints, tol);
    out.extend(violations.into_iter().map(ProgramViolation::Plan));
    if out.is_empty() {
        Ok(report)
    } else {
        Err(out)
    }
}
