use super::{GcodeError, MachineConfig};
use crate::planner::CutPlan;
use std::collections::HashMap;
use std::fmt::Write as _;

/// Decimal places needed to print multiples of `quantum` exactly, capped at 9.
pub fn quantum_decimals(quantum: f64) -> usize {
    (0..=9)
        .find(|&d| {
            let s = quantum * 10f64.powi(d as i32);
            (s - s.round()).abs() <= 1e-9 * s.max(1.0)
        })
        .unwrap_or(9)
}

/// Nearest multiple of `quantum`, rounding half away from zero, as a count
/// of quanta.
pub fn quantize(v: f64, quantum: f64) -> i64 {
    (v / quantum).round() as i64
}

/// `n` quanta printed with `decimals` places using integer arithmetic only.
fn format_quanta(n: i64, quantum: f64, decimals: usize) -> String {
    let scale = 10i64.pow(decimals as u32);
    let unit = (quantum * scale as f64).round() as i64;
    let v = n * unit;
    let sign = if v < 0 { "-" } else { "" };
    let v = v.unsigned_abs();
    let scale = scale as u64;
    if decimals == 0 {
        format!("{sign}{v}")
    } else {
        format!("{sign}{}.{:0width$}", v / scale, v % scale, width = decimals)
    }
}

fn fmt_pos(v: f64, cfg: &MachineConfig) -> String {
    let d = quantum_decimals(cfg.position_quantum);
    format_quanta(quantize(v, cfg.position_quantum), cfg.position_quantum, d)
}

/// Program text for a plan, LF line endings.
pub fn emit(plan: &CutPlan, cfg: &MachineConfig) -> Result<String, GcodeError> {
    cfg.check()?;
    let pq = cfg.position_quantum;
    let aq = cfg.angle_quantum;
    let ad = quantum_decimals(aq);

    let mut seen: HashMap<(u32, i64, i64), usize> = HashMap::new();
    for (i, p) in plan.points.iter().enumerate() {
        let key = (p.edge_id.0, quantize(p.position.x, pq), quantize(p.position.y, pq));
        if let Some(&first) = seen.get(&key) {
            return Err(GcodeError::QuantizationCollision {
                edge_id: p.edge_id,
                first,
                second: i,
            });
        }
        seen.insert(key, i);
    }

    let safe = fmt_pos(cfg.safe_z, cfg);
    let plunge = fmt_pos(cfg.plunge_z(), cfg);
    let feed = cfg.plunge_feed;
    let mut out = String::from("G21\nG90\n");
    for p in &plan.points {
        let _ = writeln!(
            out,
            "G0 X{} Y{}",
            fmt_pos(p.position.x, cfg),
            fmt_pos(p.position.y, cfg)
        );
        let _ = writeln!(out, "G0 A{}", format_quanta(quantize(p.knife_angle, aq), aq, ad));
        let _ = writeln!(out, "G1 Z{plunge} F{feed}");
        let _ = writeln!(out, "G0 Z{safe}");
    }
    out.push_str("M2\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point2, Transform2};
    use crate::honeycomb::EdgeId;
    use crate::planner::{CutPoint, Report};

    fn point(x: f64, y: f64, a: f64, e: u32) -> CutPoint {
        CutPoint {
            edge_id: EdgeId(e),
            position: Point2::new(x, y),
            t_on_edge: 0.5,
            knife_angle: a,
            angle_deviation: 0.0,
            indentation: 0.0,
            node_distance: 1.0,
        }
    }

    fn plan(points: Vec<CutPoint>) -> CutPlan {
        CutPlan {
            placement: Transform2::identity(),
            metrics: Report {
                cut_point_count: points.len(),
                min_node_distance: None,
                max_indentation: 0.0,
                double_edge_cuts: 0,
                max_angle_deviation_used: 0.0,
                placements_tried: 1,
            },
            points,
        }
    }

    #[test]
    fn single_point_template() {
        let text = emit(&plan(vec![point(12.403, 33.101, 87.34, 0)]), &MachineConfig::default()).unwrap();
        assert_eq!(
            text,
            "G21\nG90\nG0 X12.40 Y33.10\nG0 A87.3\nG1 Z-40.50 F3000\nG0 Z5.00\nM2\n"
        );
    }

    #[test]
    fn empty_plan_and_counts() {
        let cfg = MachineConfig::default();
        assert_eq!(emit(&plan(vec![]), &cfg).unwrap(), "G21\nG90\nM2\n");
        let pts = (0..7).map(|i| point(i as f64, 1.0, 90.0, i)).collect();
        assert_eq!(emit(&plan(pts), &cfg).unwrap().lines().count(), 3 + 4 * 7);
    }

    #[test]
    fn rounding_half_away_from_zero() {
        assert_eq!(format_quanta(quantize(-0.125, 0.25), 0.25, 2), "-0.25");
        assert_eq!(format_quanta(quantize(0.125, 0.25), 0.25, 2), "0.25");
        assert_eq!(format_quanta(quantize(-0.004, 0.01), 0.01, 2), "0.00");
        assert_eq!(format_quanta(quantize(-3.0, 0.01), 0.01, 2), "-3.00");
        assert_eq!(format_quanta(quantize(87.25, 0.5), 0.5, 1), "87.5");
        assert_eq!(quantum_decimals(0.01), 2);
        assert_eq!(quantum_decimals(0.1), 1);
        assert_eq!(quantum_decimals(1.0), 0);
    }

    #[test]
    fn collision_on_one_edge() {
        let cfg = MachineConfig::default();
        let r = emit(
            &plan(vec![point(1.001, 2.0, 90.0, 3), point(1.002, 2.0, 90.0, 3)]),
            &cfg,
        );
        assert!(matches!(
            r,
            Err(GcodeError::QuantizationCollision {
                first: 0,
                second: 1,
                ..
            })
        ));
        // Different edges at one quantized spot are allowed.
        assert!(emit(
            &plan(vec![point(1.001, 2.0, 90.0, 3), point(1.002, 2.0, 90.0, 4)]),
            &cfg
        )
        .is_ok());
    }
}
