//! Generate a jittered block map, validate it and round-trip it through
//! the map file format.
//!
//! cargo run --example generate_map -- [seed]

use honeycut::honeycomb::{generate, load_map, save_map, validate, EdgeKind, GeneratorParams};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let params = GeneratorParams {
        columns: 33,
        rows: 19,
        jitter_sigma: 0.1,
        seed,
        ..GeneratorParams::default()
    };
    let map = generate(&params).expect("valid parameters");
    let (w, h) = params.block_size();
    let doubles = map.edges().iter().filter(|e| e.kind == EdgeKind::Double).count();
    println!("block {w:.2} x {h:.2} mm, seed {seed}");
    println!(
        "{} nodes, {} edges ({} double)",
        map.nodes().len(),
        map.edges().len(),
        doubles
    );

    let violations = validate(&map);
    println!("violations: {}", violations.len());

    let text = save_map(&map);
    let back = load_map(&text).expect("own output parses");
    assert_eq!(back, map);
    println!("map file: {} bytes, round trip exact", text.len());
}
