//! Plan one fixture on a generated block and re-verify the result.
//!
//! cargo run --release --example plan_shape -- [fixture] [seed]

use honeycut::honeycomb::{generate, GeneratorParams};
use honeycut::planner::{plan, verify_plan, Constraints, KnifeSpec, PlanOptions};
use honeycut::shape::parse_path;
use std::time::Instant;

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "two_hole_plate".into());
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let path = format!("{}/fixtures/shapes/{name}.path", env!("CARGO_MANIFEST_DIR"));
    let shape = parse_path(&std::fs::read_to_string(&path).expect("fixture exists")).unwrap();
    let map = generate(&GeneratorParams {
        columns: 33,
        rows: 19,
        jitter_sigma: 0.1,
        seed,
        ..GeneratorParams::default()
    })
    .unwrap();

    let knife = KnifeSpec::default();
    let constraints = Constraints::default();
    let t = Instant::now();
    let cut = plan(&shape, &map, &knife, &constraints, &PlanOptions::default()).expect("plan succeeds");
    let elapsed = t.elapsed();

    let m = &cut.metrics;
    println!(
        "{name} on seed {seed}: {} cut points in {elapsed:.2?}",
        m.cut_point_count
    );
    println!(
        "placement rot {:.1} deg at ({:.2}, {:.2})",
        cut.placement.rotation(),
        cut.placement.translation().x,
        cut.placement.translation().y
    );
    println!(
        "min node distance {:.3} mm, max indentation {:.3} mm, max deviation {:.1} deg, {} placements tried",
        m.min_node_distance.unwrap_or(f64::NAN),
        m.max_indentation,
        m.max_angle_deviation_used,
        m.placements_tried
    );
    for p in cut.points.iter().take(5) {
        println!(
            "  {} at ({:.2}, {:.2}) angle {:.1} node {:.2} mm",
            p.edge_id, p.position.x, p.position.y, p.knife_angle, p.node_distance
        );
    }
    match verify_plan(&cut, &shape, &map, &knife, &constraints) {
        Ok(_) => println!("verify_plan: ok"),
        Err(v) => println!("verify_plan: {} violations", v.len()),
    }
}
