//! Plan, emit G-code, parse it back and replay it against the map.

use honeycut::gcode::{emit, parse, simulate, verify_program, MachineConfig};
use honeycut::honeycomb::{generate, GeneratorParams};
use honeycut::planner::{plan, Constraints, KnifeSpec, PlanOptions};
use honeycut::shape::parse_path;

fn main() {
    let shape = parse_path(include_str!("../fixtures/shapes/rounded_plate.path")).unwrap();
    let map = generate(&GeneratorParams {
        columns: 33,
        rows: 19,
        seed: 3,
        ..GeneratorParams::default()
    })
    .unwrap();
    let knife = KnifeSpec::default();
    let constraints = Constraints::default();
    let cfg = MachineConfig::default();
    let cut = plan(&shape, &map, &knife, &constraints, &PlanOptions::default()).unwrap();

    let text = emit(&cut, &cfg).unwrap();
    println!("{} lines, first cut:", text.lines().count());
    for line in text.lines().take(6) {
        println!("  {line}");
    }

    let program = parse(&text).unwrap();
    let cuts = simulate(&program, &cfg).unwrap();
    let worst = cuts
        .iter()
        .zip(&cut.points)
        .map(|(c, p)| (c.x - p.position.x).abs().max((c.y - p.position.y).abs()))
        .fold(0.0, f64::max);
    println!(
        "{} plunges to depth {} mm, worst position error {worst:.4} mm",
        cuts.len(),
        cuts[0].depth
    );

    let placed = shape.apply_placement(&cut.placement);
    match verify_program(&program, &map, &placed, &knife, &constraints, &cfg) {
        Ok(r) => println!(
            "program verified, min node distance {:.3} mm",
            r.min_node_distance.unwrap()
        ),
        Err(v) => println!("{} violations", v.len()),
    }

    // Push the first plunge onto a node.
    let node = map.nodes()[0].pos;
    let first = text.lines().nth(2).unwrap().to_string();
    let bad = text.replacen(&first, &format!("G0 X{:.2} Y{:.2}", node.x, node.y), 1);
    let v = verify_program(&parse(&bad).unwrap(), &map, &placed, &knife, &constraints, &cfg).unwrap_err();
    println!("edited program: {}", v[0]);
}
