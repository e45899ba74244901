//! How planning reports shapes it cannot place.

use honeycut::honeycomb::{generate, EdgeKind, GeneratorParams, HoneycombMap};
use honeycut::planner::{plan, Constraints, KnifeSpec, PlanError, PlanOptions};
use honeycut::shape::parse_path;

fn main() {
    let params = GeneratorParams {
        columns: 12,
        rows: 8,
        jitter_sigma: 0.0,
        ..GeneratorParams::default()
    };
    let map = generate(&params).unwrap();
    let knife = KnifeSpec::default();
    let opts = PlanOptions::default();

    let big = parse_path("M 0 0 L 600 0 L 600 600 L 0 600 Z").unwrap();
    match plan(&big, &map, &knife, &Constraints::default(), &opts) {
        Err(e @ PlanError::ShapeTooLarge { .. }) => println!("{e}"),
        other => println!("unexpected: {other:?}"),
    }

    // Every wall glued: no cut is allowed unless doubles are permitted.
    let mut parts = map.into_parts();
    for e in &mut parts.edges {
        e.kind = EdgeKind::Double;
    }
    let glued = HoneycombMap::from_parts(parts);
    let square = parse_path("M 0 0 L 40 0 L 40 40 L 0 40 Z").unwrap();
    match plan(&square, &glued, &knife, &Constraints::default(), &opts) {
        Err(PlanError::PlanningFailed(f)) => {
            println!("planning failed after {} placements", f.placements_tried);
            for p in f.problem_points.iter().take(3) {
                println!(
                    "  {} at ({:.2}, {:.2}): {}",
                    p.crossing.edge_id, p.crossing.point.x, p.crossing.point.y, p.reason
                );
            }
        }
        other => println!("unexpected: {other:?}"),
    }
    let relaxed = Constraints {
        allow_double: true,
        ..Constraints::default()
    };
    let cut = plan(&square, &glued, &knife, &relaxed, &opts).unwrap();
    println!(
        "with allow_double: {} cuts, {} through double walls",
        cut.points.len(),
        cut.metrics.double_edge_cuts
    );
}
