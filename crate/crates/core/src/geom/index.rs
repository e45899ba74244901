use super::{Bbox, Point2};

/// Uniform-grid broad phase over item bounding boxes.
///
/// Every item is stored in each bucket its bounding box overlaps. Queries
/// return the deduplicated candidate ids in ascending order; callers apply
/// the exact predicate.
#[derive(Debug, Clone)]
pub struct SpatialIndex {
    cell_size: f64,
    origin: Point2,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<usize>>,
    len: usize,
}

impl SpatialIndex {
    /// Build an index over `(id, bbox)` pairs.
    pub fn build<I>(cell_size: f64, items: I) -> Self
    where
        I: IntoIterator<Item = (usize, Bbox)>,
    {
        assert!(cell_size > 0.0 && cell_size.is_finite(), "cell size must be positive");
        let items: Vec<(usize, Bbox)> = items.into_iter().collect();
        let mut extent = Bbox::empty();
        for (_, b) in &items {
            extent.include(b.min);
            extent.include(b.max);
        }
        if items.is_empty() {
            return Self {
                cell_size,
                origin: Point2::new(0.0, 0.0),
                cols: 0,
                rows: 0,
                buckets: Vec::new(),
                len: 0,
            };
        }
        let cols = ((extent.width() / cell_size).floor() as usize) + 1;
        let rows = ((extent.height() / cell_size).floor() as usize) + 1;
        let mut ix = Self {
            cell_size,
            origin: extent.min,
            cols,
            rows,
            buckets: vec![Vec::new(); cols * rows],
            len: items.len(),
        };
        for (id, b) in items {
            let (c0, r0, c1, r1) = ix.cell_range(&b).expect("item inside extent");
            for r in r0..=r1 {
                for c in c0..=c1 {
                    ix.buckets[r * cols + c].push(id);
                }
            }
        }
        ix
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn cell_range(&self, b: &Bbox) -> Option<(usize, usize, usize, usize)> {
        if self.cols == 0 || b.is_empty() {
            return None;
        }
        let clamp = |v: f64, n: usize| -> usize {
            if v < 0.0 {
                0
            } else {
                (v as usize).min(n - 1)
            }
        };
        let lo_x = (b.min.x - self.origin.x) / self.cell_size;
        let hi_x = (b.max.x - self.origin.x) / self.cell_size;
        let lo_y = (b.min.y - self.origin.y) / self.cell_size;
        let hi_y = (b.max.y - self.origin.y) / self.cell_size;
        if hi_x < 0.0 || hi_y < 0.0 || lo_x > self.cols as f64 || lo_y > self.rows as f64 {
            return None;
        }
        Some((
            clamp(lo_x, self.cols),
            clamp(lo_y, self.rows),
            clamp(hi_x, self.cols),
            clamp(hi_y, self.rows),
        ))
    }

    /// Candidate ids whose bucket overlaps `probe`.
    pub fn query(&self, probe: &Bbox) -> Vec<usize> {
        let mut out = Vec::new();
        self.query_into(probe, &mut out);
        out
    }

    /// Like [`query`](Self::query) but reuses `out`.
    pub fn query_into(&self, probe: &Bbox, out: &mut Vec<usize>) {
        out.clear();
        let Some((c0, r0, c1, r1)) = self.cell_range(probe) else {
            return;
        };
        for r in r0..=r1 {
            for c in c0..=c1 {
                out.extend_from_slice(&self.buckets[r * self.cols + c]);
            }
        }
        out.sort_unstable();
        out.dedup();
    }
}
