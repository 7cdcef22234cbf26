//! Uniform bucket grid over a point set, shared by the emptiness scans.

use crate::geom::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Visit {
    Point(usize),
    Covered(f64),
}

#[derive(Debug, Clone)]
pub struct PointGrid {
    points: Vec<Point>,
    lo: Point,
    inv_cell: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    starts: Vec<u32>,
    order: Vec<u32>,
}

impl PointGrid {
    /// Buckets sized for roughly `per_cell` points each over the box `[lo, hi]`.
    pub fn new(points: &[Point], lo: Point, hi: Point, per_cell: f64) -> Self {
        let w = (hi.x - lo.x).max(f64::MIN_POSITIVE);
        let h = (hi.y - lo.y).max(f64::MIN_POSITIVE);
        let n = points.len().max(1) as f64;
        let cell = ((w * h * per_cell / n).sqrt()).max(w.max(h) / 4096.0);
        let nx = ((w / cell).ceil() as usize).max(1);
        let ny = ((h / cell).ceil() as usize).max(1);
        let inv_cell = 1.0 / cell;
        let key = |p: &Point| -> usize {
            let i = (((p.x - lo.x) * inv_cell).floor().max(0.0) as usize).min(nx - 1);
            let j = (((p.y - lo.y) * inv_cell).floor().max(0.0) as usize).min(ny - 1);
            j * nx + i
        };
        let mut counts = vec![0u32; nx * ny + 1];
        for p in points {
            counts[key(p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut fill = counts.clone();
        let mut order = vec![0u32; points.len()];
        for (idx, p) in points.iter().enumerate() {
            let k = key(p);
            order[fill[k] as usize] = idx as u32;
            fill[k] += 1;
        }
        PointGrid {
            points: points.to_vec(),
            lo,
            inv_cell,
            cell,
            nx,
            ny,
            starts: counts,
            order,
        }
    }

    /// Grid over the bounding box of the points themselves.
    pub fn from_points(points: &[Point], per_cell: f64) -> Self {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if points.is_empty() {
            lo = Point::default();
            hi = Point::new(1.0, 1.0);
        }
        Self::new(points, lo, hi, per_cell)
    }

    #[inline]
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    #[inline]
    fn col(&self, x: f64) -> isize {
        ((x - self.lo.x) * self.inv_cell).floor() as isize
    }

    #[inline]
    fn row(&self, y: f64) -> isize {
        ((y - self.lo.y) * self.inv_cell).floor() as isize
    }

    #[inline]
    fn bucket(&self, i: usize, j: usize) -> &[u32] {
        let k = j * self.nx + i;
        &self.order[self.starts[k] as usize..self.starts[k + 1] as usize]
    }

    /// Visits point indices in buckets overlapping `[lo, hi]` until `f` returns `true`.
    /// Returns whether `f` stopped the scan.
    pub fn any_in_box(&self, lo: Point, hi: Point, mut f: impl FnMut(usize) -> bool) -> bool {
        // Clamping yields a superset of buckets; callers filter exactly.
        let xmax = self.nx as isize - 1;
        let ymax = self.ny as isize - 1;
        let i0 = self.col(lo.x).clamp(0, xmax);
        let i1 = self.col(hi.x).clamp(0, xmax);
        let j0 = self.row(lo.y).clamp(0, ymax);
        let j1 = self.row(hi.y).clamp(0, ymax);
        for j in j0..=j1 {
            for i in i0..=i1 {
                for &idx in self.bucket(i as usize, j as usize) {
                    if f(idx as usize) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Visits buckets in square rings around `c`. After each ring `f` gets
    /// `Visit::Covered(r)` with the Euclidean radius `r` already fully
    /// scanned; returning `true` stops the search.
    pub fn ring_search(&self, c: Point, mut f: impl FnMut(Visit) -> bool) {
        let ci = self.col(c.x).clamp(0, self.nx as isize - 1);
        let cj = self.row(c.y).clamp(0, self.ny as isize - 1);
        let max_ring = self.nx.max(self.ny) as isize;
        // Distance from c to the boundary of its bucket's ring-0 square.
        let cx0 = self.lo.x + ci as f64 * self.cell;
        let cy0 = self.lo.y + cj as f64 * self.cell;
        let inset = (c.x - cx0)
            .min(cx0 + self.cell - c.x)
            .min(c.y - cy0)
            .min(cy0 + self.cell - c.y);
        for r in 0..=max_ring {
            for j in (cj - r)..=(cj + r) {
                if j < 0 || j >= self.ny as isize {
                    continue;
                }
                let edge_row = j == cj - r || j == cj + r;
                let mut i = ci - r;
                while i <= ci + r {
                    if i >= 0 && i < self.nx as isize {
                        for &idx in self.bucket(i as usize, j as usize) {
                            f(Visit::Point(idx as usize));
                        }
                    }
                    if edge_row || r == 0 {
                        i += 1;
                    } else {
                        i += 2 * r;
                    }
                }
            }
            let covered = inset + r as f64 * self.cell;
            if f(Visit::Covered(covered)) {
                return;
            }
        }
    }
}
