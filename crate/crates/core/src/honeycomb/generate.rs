use super::{Edge, EdgeId, EdgeKind, HoneycombMap, MapError, MapParts, Node, NodeId};
use crate::geom::{Bbox, Point2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::collections::{BTreeMap, BTreeSet};

/// Synthetic block description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub columns: u32,
    pub rows: u32,
    pub cell_edge: f64,
    /// Standard deviation of the per-node position noise, truncated at 3σ.
    pub jitter_sigma: f64,
    pub seed: u64,
    pub ribbon_axis: f64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            columns: 10,
            rows: 10,
            cell_edge: 10.0,
            jitter_sigma: 0.1,
            seed: 0,
            ribbon_axis: 0.0,
        }
    }
}

impl GeneratorParams {
    pub fn check(&self) -> Result<(), MapError> {
        if self.columns < 1 || self.rows < 1 {
            return Err(MapError::InvalidParams("columns and rows must be at least 1".into()));
        }
        if !(self.cell_edge > 0.0) || !self.cell_edge.is_finite() {
            return Err(MapError::InvalidParams("cell_edge must be positive".into()));
        }
        if !(self.jitter_sigma >= 0.0) || !self.jitter_sigma.is_finite() {
            return Err(MapError::InvalidParams("jitter_sigma must be non-negative".into()));
        }
        if !self.ribbon_axis.is_finite() {
            return Err(MapError::InvalidParams("ribbon_axis must be finite".into()));
        }
        Ok(())
    }

    /// Nominal block size `(width, height)` along and across the ribbon
    /// axis, before jitter padding.
    pub fn block_size(&self) -> (f64, f64) {
        let s = self.cell_edge;
        let h = s * 3f64.sqrt();
        let width = 1.5 * s * f64::from(self.columns - 1) + 2.0 * s;
        let height = if self.columns > 1 {
            h * (f64::from(self.rows) + 0.5)
        } else {
            h * f64::from(self.rows)
        };
        (width, height)
    }
}

// Hexagon corners in half-edge (x) and half-height (y) units, counter-clockwise
// from the +x vertex. Corners 1-2 and 4-5 bound the walls along the ribbon axis.
const CORNERS: [(i64, i64); 6] = [(2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)];

/// Regular flat-sided hexagonal lattice of `columns × rows` cells with walls
/// along the ribbon axis marked double, each node displaced by truncated
/// Gaussian noise. The outline is the lattice bounding rectangle padded by
/// 3σ, with its lower-left corner at the origin.
pub fn generate(params: &GeneratorParams) -> Result<HoneycombMap, MapError> {
    params.check()?;
    let mut key_to_id: BTreeMap<(i64, i64), u32> = BTreeMap::new();
    let mut keys: Vec<(i64, i64)> = Vec::new();
    let mut edge_set: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut edges = Vec::new();

    for c in 0..i64::from(params.columns) {
        for r in 0..i64::from(params.rows) {
            let cx = 3 * c;
            let cy = 2 * r + (c & 1);
            let ids: Vec<u32> = CORNERS
                .iter()
                .map(|&(dx, dy)| {
                    let k = (cx + dx, cy + dy);
                    *key_to_id.entry(k).or_insert_with(|| {
                        keys.push(k);
                        (keys.len() - 1) as u32
                    })
                })
                .collect();
            for k in 0..6 {
                let (a, b) = (ids[k], ids[(k + 1) % 6]);
                let pair = (a.min(b), a.max(b));
                if edge_set.insert(pair) {
                    let kind = if k == 1 || k == 4 {
                        EdgeKind::Double
                    } else {
                        EdgeKind::Single
                    };
                    edges.push(Edge {
                        id: EdgeId(edges.len() as u32),
                        a: NodeId(pair.0),
                        b: NodeId(pair.1),
                        kind,
                    });
                }
            }
        }
    }

    let s = params.cell_edge;
    let half_h = s * 3f64.sqrt() * 0.5;
    let ideal: Vec<Point2> = keys
        .iter()
        .map(|&(kx, ky)| Point2::new(kx as f64 * s * 0.5, ky as f64 * half_h).rotated_deg(params.ribbon_axis))
        .collect();
    let pad = 3.0 * params.jitter_sigma;
    let bb = Bbox::from_points(ideal.iter().copied()).inflated(pad);
    let shift = -bb.min;

    let offsets = jitter_offsets(ideal.len(), params.jitter_sigma, params.seed);
    let nodes = ideal
        .iter()
        .zip(offsets)
        .enumerate()
        .map(|(i, (p, d))| Node {
            id: NodeId(i as u32),
            pos: *p + shift + d,
        })
        .collect();
    let (w, h) = (bb.width(), bb.height());
    let outline = vec![
        Point2::new(0.0, 0.0),
        Point2::new(w, 0.0),
        Point2::new(w, h),
        Point2::new(0.0, h),
    ];
    Ok(HoneycombMap::from_parts(MapParts {
        nominal_cell_edge: s,
        ribbon_axis: crate::geom::normalize_deg(params.ribbon_axis),
        nodes,
        edges,
        outline,
    }))
}

fn jitter_offsets(n: usize, sigma: f64, seed: u64) -> Vec<Point2> {
    if sigma == 0.0 {
        return vec![Point2::new(0.0, 0.0); n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("finite sigma");
    let limit = 3.0 * sigma;
    (0..n)
        .map(|_| loop {
            let d = Point2::new(normal.sample(&mut rng), normal.sample(&mut rng));
            if d.norm() <= limit {
                break d;
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::angle_diff_deg;

    fn params(jitter: f64, axis: f64) -> GeneratorParams {
        GeneratorParams {
            columns: 3,
            rows: 3,
            cell_edge: 10.0,
            jitter_sigma: jitter,
            seed: 1,
            ribbon_axis: axis,
        }
    }

    fn degrees(m: &HoneycombMap) -> BTreeMap<NodeId, Vec<EdgeKind>> {
        let mut deg: BTreeMap<NodeId, Vec<EdgeKind>> = BTreeMap::new();
        for e in m.edges() {
            deg.entry(e.a).or_default().push(e.kind);
            deg.entry(e.b).or_default().push(e.kind);
        }
        deg
    }

    #[test]
    fn regular_edges_have_cell_length() {
        let m = generate(&params(0.0, 0.0)).unwrap();
        for e in m.edges() {
            let len = m.edge_segment(e.id).unwrap().length();
            assert!((len - 10.0).abs() <= 1e-9, "edge {} length {len}", e.id);
        }
    }

    #[test]
    fn one_double_per_degree_three_node() {
        let m = generate(&params(0.0, 0.0)).unwrap();
        let deg = degrees(&m);
        let mut interior = 0;
        for kinds in deg.values() {
            assert!((1..=3).contains(&kinds.len()));
            if kinds.len() == 3 {
                interior += 1;
                assert_eq!(kinds.iter().filter(|k| **k == EdgeKind::Double).count(), 1);
            }
        }
        assert!(interior > 0);
    }

    #[test]
    fn doubles_parallel_to_ribbon_axis() {
        for axis in [0.0, 30.0, 90.0] {
            let m = generate(&params(0.0, axis)).unwrap();
            for e in m.edges().iter().filter(|e| e.kind == EdgeKind::Double) {
                let dir = crate::geom::direction_deg(m.edge_segment(e.id).unwrap().direction());
                let off = angle_diff_deg(dir, axis).abs();
                assert!(off < 1e-9 || (off - 180.0).abs() < 1e-9, "axis {axis}: {dir}");
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate(&params(0.1, 0.0)).unwrap();
        let b = generate(&params(0.1, 0.0)).unwrap();
        assert_eq!(save_bytes(&a), save_bytes(&b));
        let mut p = params(0.1, 0.0);
        p.seed = 2;
        assert_ne!(save_bytes(&a), save_bytes(&generate(&p).unwrap()));
    }

    fn save_bytes(m: &HoneycombMap) -> String {
        crate::honeycomb::save_map(m)
    }

    #[test]
    fn jitter_bounded_by_three_sigma() {
        let sigma = 0.1;
        let m0 = generate(&params(0.0, 0.0)).unwrap();
        let m1 = generate(&params(sigma, 0.0)).unwrap();
        let shift = Point2::new(3.0 * sigma, 3.0 * sigma);
        for (a, b) in m0.nodes().iter().zip(m1.nodes()) {
            assert!((a.pos + shift).distance(b.pos) <= 3.0 * sigma + 1e-12);
            assert!(m1.contains_point(b.pos));
        }
    }

    #[test]
    fn block_size_matches_outline() {
        let p = GeneratorParams {
            columns: 33,
            rows: 19,
            cell_edge: 10.0,
            jitter_sigma: 0.0,
            seed: 0,
            ribbon_axis: 0.0,
        };
        let m = generate(&p).unwrap();
        let bb = m.outline_bbox();
        let (w, h) = p.block_size();
        assert!((bb.width() - w).abs() < 1e-9 && (bb.height() - h).abs() < 1e-9);
        assert!((w - 500.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_params() {
        let mut p = params(0.0, 0.0);
        p.cell_edge = -1.0;
        assert!(matches!(generate(&p), Err(MapError::InvalidParams(_))));
        let mut p = params(0.0, 0.0);
        p.columns = 0;
        assert!(generate(&p).is_err());
        let mut p = params(0.0, 0.0);
        p.jitter_sigma = -0.1;
        assert!(generate(&p).is_err());
    }
}
