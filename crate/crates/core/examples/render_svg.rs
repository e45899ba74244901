//! Render a planned shape on its block as SVG.
//!
//! cargo run --release --example render_svg -- out.svg

use honeycut::cli::render_svg;
use honeycut::honeycomb::{generate, GeneratorParams};
use honeycut::planner::{plan, Constraints, KnifeSpec, PlanOptions};
use honeycut::shape::parse_path;

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "plan.svg".into());
    let shape = parse_path(include_str!("../fixtures/shapes/l_bracket.path")).unwrap();
    let map = generate(&GeneratorParams {
        columns: 20,
        rows: 12,
        seed: 2,
        ..GeneratorParams::default()
    })
    .unwrap();
    let knife = KnifeSpec::default();
    let cut = plan(&shape, &map, &knife, &Constraints::default(), &PlanOptions::default()).unwrap();
    let placed = shape.apply_placement(&cut.placement);
    let svg = render_svg(&map, Some(&placed), Some(&cut), &knife);
    std::fs::write(&out, &svg).unwrap();
    println!(
        "wrote {out}: {} bytes, {} knife footprints",
        svg.len(),
        cut.points.len()
    );
}
