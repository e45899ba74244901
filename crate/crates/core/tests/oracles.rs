//! Map queries and planner primitives against brute-force oracles.

mod common;

use common::*;
use honeycut::geom::{rect_intersects_segment, OrientedRect, Point2, Segment};
use honeycut::honeycomb::{Crossing, HoneycombMap};
use honeycut::planner::{feasible_knife_angle, select_cut_point, Constraints, KnifeSpec};
use proptest::prelude::*;
use std::sync::OnceLock;

fn maps() -> &'static [HoneycombMap] {
    static MAPS: OnceLock<Vec<HoneycombMap>> = OnceLock::new();
    MAPS.get_or_init(|| {
        let mut v = Vec::new();
        for seed in 0..4 {
            for jitter in [0.0, 0.1, 0.5] {
                v.push(small_map(8, 6, jitter, seed));
            }
        }
        v
    })
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 1000,
        max_global_rejects: 4096,
        ..ProptestConfig::default()
    }
}

fn coord() -> impl Strategy<Value = f64> {
    -20.0..150.0f64
}

fn point() -> impl Strategy<Value = Point2> {
    (coord(), coord()).prop_map(|(x, y)| Point2::new(x, y))
}

fn knife() -> impl Strategy<Value = KnifeSpec> {
    (
        3.0..7.0f64,
        0.2..0.6f64,
        prop::sample::select(vec![15.0, 30.0, 45.0]),
        prop::sample::select(vec![0.1, 0.5, 1.0]),
    )
        .prop_map(|(width, thickness, max_angle_deviation, angle_resolution)| KnifeSpec {
            width,
            thickness,
            max_angle_deviation,
            angle_resolution,
        })
}

fn constraints() -> impl Strategy<Value = Constraints> {
    (
        0.3..1.5f64,
        1.5..5.0f64,
        prop::sample::select(vec![0.1, 0.25, 0.5]),
        1.0..5.0f64,
        any::<bool>(),
    )
        .prop_map(
            |(node_clearance, relocation_radius, position_step, max_indentation, allow_double)| Constraints {
                node_clearance,
                relocation_radius,
                position_step,
                max_indentation,
                allow_double,
                ..Constraints::default()
            },
        )
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn edges_crossing_matches_pair_scan(mi in 0..12usize, pts in prop::collection::vec(point(), 2..7)) {
        let map = &maps()[mi];
        let poly: Vec<Segment> = pts.windows(2).filter_map(|w| Segment::new(w[0], w[1]).ok()).collect();
        prop_assume!(!poly.is_empty());
        let expected = brute_crossings(map, &poly);
        prop_assume!(expected.is_some());
        let expected = expected.unwrap();
        let got = map.edges_crossing(&poly).unwrap();
        for w in got.windows(2) {
            prop_assert!((w[0].segment_index, w[0].t_on_segment) <= (w[1].segment_index, w[1].t_on_segment));
        }
        let mut got: Vec<_> = got.iter().map(|c| (c.edge_id, c.segment_index, c.point)).collect();
        got.sort_by_key(|a| (a.1, a.0));
        prop_assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(&expected) {
            prop_assert_eq!((g.0, g.1), (e.0, e.1));
            prop_assert!(g.2.distance(e.2) <= 1e-9, "{:?} vs {:?}", g, e);
        }
    }

    #[test]
    fn nearest_node_matches_scan(mi in 0..12usize, p in (-200.0..300.0f64, -200.0..300.0f64)) {
        let map = &maps()[mi];
        let p = Point2::new(p.0, p.1);
        prop_assert_eq!(map.nearest_node(p).unwrap(), brute_nearest(map, p));
    }

    #[test]
    fn feasible_knife_angle_matches_full_scan(mi in 0..12usize, ei in any::<prop::sample::Index>(), t in 0.0..1.0f64, knife in knife()) {
        let map = &maps()[mi];
        let e = map.edges()[ei.index(map.edges().len())];
        let pos = map.edge_segment(e.id).unwrap().point_at(t);
        let got = feasible_knife_angle(e.id, pos, map, &knife).map(|a| (a.angle, a.deviation));
        let want = brute_knife_angle(map, e.id, pos, &knife);
        match (got, want) {
            (None, None) => {}
            (Some(g), Some(w)) => prop_assert!((g.0 - w.0).abs() <= 1e-9 && (g.1 - w.1).abs() <= 1e-9, "{:?} vs {:?}", g, w),
            _ => prop_assert!(false, "{:?} vs {:?}", got, want),
        }
    }

    #[test]
    fn select_cut_point_matches_enumeration(
        mi in 0..12usize,
        ei in any::<prop::sample::Index>(),
        t in 0.0..1.0f64,
        dir in 0.0..360.0f64,
        offset in -3.0..3.0f64,
        c in constraints(),
    ) {
        let map = &maps()[mi];
        let e = map.edges()[ei.index(map.edges().len())];
        let point = map.edge_segment(e.id).unwrap().point_at(t);
        let d = Point2::new(dir.to_radians().cos(), dir.to_radians().sin());
        let base = point + d.perp() * offset;
        let boundary = [seg(base - d * 30.0, base + d * 30.0)];
        let crossing = Crossing { edge_id: e.id, point, t_on_edge: t, segment_index: 0, t_on_segment: 0.5 };
        let knife = KnifeSpec::default();
        let got = select_cut_point(&crossing, map, &boundary, &knife, &c);
        let want = brute_select(&crossing, map, &boundary, &knife, &c);
        match (&got, &want) {
            (Ok(g), Ok(w)) => {
                prop_assert_eq!(g.edge_id, w.edge_id);
                prop_assert!((g.t_on_edge - w.t).abs() <= 1e-12, "{:?} vs {:?}", g, w);
                prop_assert!((g.knife_angle - w.angle).abs() <= 1e-9, "{:?} vs {:?}", g, w);
                prop_assert!((g.node_distance - w.node_distance).abs() <= 1e-12);
                prop_assert!((g.indentation - w.indentation).abs() <= 1e-9);
            }
            (Err(g), Err(w)) => prop_assert_eq!(g.reason, *w),
            _ => prop_assert!(false, "{:?} vs {:?}", got, want),
        }
    }

    #[test]
    fn rect_intersects_segment_matches_sampling(
        c in (-5.0..5.0f64, -5.0..5.0f64),
        hl in 0.1..5.0f64,
        hw in 0.05..2.0f64,
        angle in 0.0..360.0f64,
        a in (-10.0..10.0f64, -10.0..10.0f64),
        b in (-10.0..10.0f64, -10.0..10.0f64),
    ) {
        let r = OrientedRect::new(Point2::new(c.0, c.1), hl, hw, angle).unwrap();
        let s = Segment::new(Point2::new(a.0, a.1), Point2::new(b.0, b.1));
        prop_assume!(s.is_ok());
        let s = s.unwrap();
        let want = sampled_rect_hit(&r, &s, 4000);
        prop_assume!(want.is_some());
        prop_assert_eq!(rect_intersects_segment(&r, &s), want.unwrap());
    }
}
