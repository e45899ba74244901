//! Parse cut contours and inspect their geometry.

use honeycut::shape::{parse_path, DEFAULT_FLATTEN_TOL};

const PLATE: &str = include_str!("../fixtures/shapes/two_hole_plate.path");

fn main() {
    let rounded = "M 10 0 L 110 0 A 120 10 10 ccw small L 120 60 A 110 70 10 ccw small \
                   L 10 70 A 0 60 10 ccw small L 0 10 A 10 0 10 ccw small Z";
    for (name, text) in [("rounded", rounded), ("two-hole plate", PLATE)] {
        let shape = parse_path(text).expect("valid path");
        let bb = shape.bbox();
        let segs: usize = shape.flatten(DEFAULT_FLATTEN_TOL).iter().map(Vec::len).sum();
        println!("{name}:");
        println!(
            "  bbox {:.1} x {:.1} mm, area {:.1} mm2",
            bb.width(),
            bb.height(),
            shape.area()
        );
        println!(
            "  {} hole(s), min curvature radius {}",
            shape.holes().len(),
            shape.min_curvature_radius()
        );
        println!(
            "  outer perimeter {:.2} mm, {segs} segments after flattening",
            shape.outer().perimeter()
        );
        if let Some((i, s)) = shape.longest_straight_segment() {
            println!("  longest line: command {i}, {:.1} mm", s.length());
        }
    }

    match parse_path("M 0 0 L 10 10 L 10 0 L 0 10 Z") {
        Ok(_) => unreachable!(),
        Err(e) => println!("bowtie rejected: {e}"),
    }
}
