//! Cut point selection on a single wall: relocation away from nodes and
//! blade tilt around a neighbouring wall.

use honeycut::geom::{Point2, Segment};
use honeycut::honeycomb::{Crossing, Edge, EdgeId, EdgeKind, HoneycombMap, MapParts, Node, NodeId};
use honeycut::planner::{feasible_knife_angle, select_cut_point, Constraints, KnifeSpec};

fn node(id: u32, x: f64, y: f64) -> Node {
    Node {
        id: NodeId(id),
        pos: Point2::new(x, y),
    }
}

fn edge(id: u32, a: u32, b: u32) -> Edge {
    Edge {
        id: EdgeId(id),
        a: NodeId(a),
        b: NodeId(b),
        kind: EdgeKind::Single,
    }
}

fn main() {
    // A vertical wall with a short parallel wall 2 mm to its right.
    let map = HoneycombMap::from_parts(MapParts {
        nominal_cell_edge: 10.0,
        ribbon_axis: 0.0,
        nodes: vec![
            node(0, 0.0, 0.0),
            node(1, 0.0, 10.0),
            node(2, 2.0, 3.5),
            node(3, 2.0, 5.8),
        ],
        edges: vec![edge(0, 0, 1), edge(1, 2, 3)],
        outline: vec![
            Point2::new(-20.0, -20.0),
            Point2::new(20.0, -20.0),
            Point2::new(20.0, 30.0),
            Point2::new(-20.0, 30.0),
        ],
    });
    let knife = KnifeSpec::default();
    let constraints = Constraints::default();

    for y in [8.0, 5.5, 4.6] {
        let p = Point2::new(0.0, y);
        let a = feasible_knife_angle(EdgeId(0), p, &map, &knife);
        println!("blade at y = {y}: {a:?}");
    }

    // A horizontal contour crossing the wall 0.2 mm above its lower node.
    let contour = [Segment::new(Point2::new(-5.0, 0.2), Point2::new(5.0, 0.2)).unwrap()];
    let crossing = Crossing {
        edge_id: EdgeId(0),
        point: Point2::new(0.0, 0.2),
        t_on_edge: 0.02,
        segment_index: 0,
        t_on_segment: 0.5,
    };
    match select_cut_point(&crossing, &map, &contour, &knife, &constraints) {
        Ok(c) => println!(
            "cut moved to ({:.2}, {:.2}): node {:.2} mm, indentation {:.2} mm, angle {:.1}",
            c.position.x, c.position.y, c.node_distance, c.indentation, c.knife_angle
        ),
        Err(p) => println!("problem: {}", p.reason),
    }
}
