//! The geometric preliminaries of planning: fit check, minimum-area
//! rectangle, initial alignment and the orientation list.

use honeycut::honeycomb::{generate, GeneratorParams};
use honeycut::planner::{fit_check, initial_placement, min_area_rect, orientation_list};
use honeycut::shape::parse_path;

fn main() {
    let map = generate(&GeneratorParams {
        columns: 33,
        rows: 19,
        ..GeneratorParams::default()
    })
    .unwrap();
    let l = parse_path(include_str!("../fixtures/shapes/l_bracket.path")).unwrap();

    let (short, long) = min_area_rect(&l);
    println!("L bracket min-area rectangle: {short:.1} x {long:.1} mm");
    println!("fits block: {}", fit_check(&l, &map).is_ok());

    let big = parse_path("M 0 0 L 600 0 L 600 600 L 0 600 Z").unwrap();
    println!(
        "600 x 600 fits block: {}",
        match fit_check(&big, &map) {
            Ok(()) => "yes".to_string(),
            Err(e) => e.to_string(),
        }
    );

    let p = initial_placement(&l, &map, false);
    let q = initial_placement(&l, &map, true);
    println!(
        "initial placement: rot {:.1}, offset {:?}",
        p.rotation(),
        p.translation()
    );
    println!(
        "block-edge placement: rot {:.1}, offset {:?}",
        q.rotation(),
        q.translation()
    );
    println!("orientations tried: {:?}", orientation_list(p.rotation()));
}
