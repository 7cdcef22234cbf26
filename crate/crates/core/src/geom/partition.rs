//! Equal-area partitions of a convex body in which most regions are
//! homothets of a given cell shape.
//!
//! Construction: lay a grid of scaled cell homothets over the body, keep the
//! ones fully inside, then cut what is left with vertical lines into pieces
//! of the same area.

use super::{Containment, ConvexBody, GeomError, HalfPlane, OrientedRect, Point};

#[derive(Debug, Clone, PartialEq)]
pub enum RegionKind {
    /// A convex cell (a homothet of the requested shape).
    Cell(ConvexBody),
    /// `outer` minus the interiors of `holes`.
    Remainder {
        outer: ConvexBody,
        holes: Vec<ConvexBody>,
    },
}

/// One piece of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub kind: RegionKind,
    pub is_homothet: bool,
    area: f64,
    bbox: (Point, Point),
}

impl Region {
    pub fn cell(body: ConvexBody, is_homothet: bool) -> Self {
        let area = body.area();
        let bbox = body.bbox();
        Region {
            kind: RegionKind::Cell(body),
            is_homothet,
            area,
            bbox,
        }
    }

    pub fn remainder(outer: ConvexBody, holes: Vec<ConvexBody>) -> Self {
        let mut area = outer.area();
        for h in &holes {
            if let Some(c) = outer.clip_all(&h.half_planes()) {
                area -= c.area();
            }
        }
        let bbox = outer.bbox();
        Region {
            kind: RegionKind::Remainder { outer, holes },
            is_homothet: false,
            area,
            bbox,
        }
    }

    #[inline]
    pub fn area(&self) -> f64 {
        self.area
    }

    #[inline]
    pub fn bbox(&self) -> (Point, Point) {
        self.bbox
    }

    pub fn contains(&self, p: Point, mode: Containment) -> bool {
        let (lo, hi) = self.bbox;
        if p.x < lo.x || p.x > hi.x || p.y < lo.y || p.y > hi.y {
            return false;
        }
        match &self.kind {
            RegionKind::Cell(b) => b.contains_point(p, mode),
            RegionKind::Remainder { outer, holes } => {
                let hole_mode = match mode {
                    Containment::Open => Containment::Closed,
                    Containment::Closed => Containment::Open,
                };
                outer.contains_point(p, mode) && !holes.iter().any(|h| h.contains_point(p, hole_mode))
            }
        }
    }
}

fn left_of(x: f64) -> HalfPlane {
    HalfPlane {
        normal: Point::new(1.0, 0.0),
        offset: x,
    }
}

fn right_of(x: f64) -> HalfPlane {
    HalfPlane {
        normal: Point::new(-1.0, 0.0),
        offset: -x,
    }
}

fn area_left(b: &ConvexBody, x: f64) -> f64 {
    let (lo, hi) = b.bbox();
    if x <= lo.x {
        0.0
    } else if x >= hi.x {
        b.area()
    } else {
        b.clip(&left_of(x)).map_or(0.0, |c| c.area())
    }
}

/// Cells sorted for fast "area of cells left of x" queries.
struct CellIndex<'a> {
    cells: &'a [ConvexBody],
    by_min: Vec<(f64, usize)>,
    by_max: Vec<f64>,
    prefix_by_max: Vec<f64>,
    max_width: f64,
}

impl<'a> CellIndex<'a> {
    fn new(cells: &'a [ConvexBody]) -> Self {
        let mut by_min: Vec<(f64, usize)> =
            cells.iter().enumerate().map(|(i, c)| (c.bbox().0.x, i)).collect();
        by_min.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut maxes: Vec<(f64, f64)> = cells.iter().map(|c| (c.bbox().1.x, c.area())).collect();
        maxes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut prefix = Vec::with_capacity(maxes.len() + 1);
        prefix.push(0.0);
        for (_, a) in &maxes {
            prefix.push(prefix.last().unwrap() + a);
        }
        let max_width = cells
            .iter()
            .map(|c| {
                let (lo, hi) = c.bbox();
                hi.x - lo.x
            })
            .fold(0.0, f64::max);
        CellIndex {
            cells,
            by_min,
            by_max: maxes.into_iter().map(|m| m.0).collect(),
            prefix_by_max: prefix,
            max_width,
        }
    }

    /// Indices of cells whose x-extent overlaps the open interval `(a, b)`.
    fn overlapping(&self, a: f64, b: f64) -> impl Iterator<Item = usize> + '_ {
        let start = self.by_min.partition_point(|e| e.0 < a - self.max_width);
        let end = self.by_min.partition_point(|e| e.0 < b);
        self.by_min[start..end]
            .iter()
            .map(|e| e.1)
            .filter(move |&i| self.cells[i].bbox().1.x > a)
    }

    fn area_left(&self, x: f64) -> f64 {
        let full = self.by_max.partition_point(|&m| m <= x);
        let mut a = self.prefix_by_max[full];
        for i in self.overlapping(x, x) {
            a += area_left(&self.cells[i], x);
        }
        a
    }
}

/// Partitions `body` into the given convex cells plus vertical slices of the
/// remainder, every region having area `region_area`. `homothet_flags[i]`
/// marks which cells count as homothets.
pub fn partition_with_cells(
    body: &ConvexBody,
    cells: Vec<ConvexBody>,
    homothet_flags: Vec<bool>,
    region_area: f64,
) -> Result<Vec<Region>, GeomError> {
    assert_eq!(cells.len(), homothet_flags.len());
    let total = body.area();
    let cell_area: f64 = cells.iter().map(|c| c.area()).sum();
    let rest = total - cell_area;
    let pieces = (rest / region_area).round();
    if pieces < 0.0 || (rest - pieces * region_area).abs() > 1e-9 * total.max(1.0) {
        return Err(GeomError::InvalidPartition("remainder is not a whole number of regions"));
    }
    let pieces = pieces as usize;
    let index = CellIndex::new(&cells);
    let (lo, hi) = body.bbox();
    let rest_left = |x: f64| area_left(body, x) - index.area_left(x);

    let mut cuts = vec![lo.x];
    for k in 1..pieces {
        let target = k as f64 * region_area;
        let (mut a, mut b) = (*cuts.last().unwrap(), hi.x);
        for _ in 0..100 {
            let mid = 0.5 * (a + b);
            if rest_left(mid) < target {
                a = mid;
            } else {
                b = mid;
            }
            if b - a <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
                break;
            }
        }
        cuts.push(0.5 * (a + b));
    }
    cuts.push(hi.x);

    let mut regions: Vec<Region> = Vec::with_capacity(cells.len() + pieces);
    for w in cuts.windows(2).take(pieces) {
        let (a, b) = (w[0], w[1]);
        let outer = body
            .clip_all(&[right_of(a), left_of(b)])
            .ok_or(GeomError::InvalidPartition("empty slice"))?;
        let holes: Vec<ConvexBody> = index.overlapping(a, b).map(|i| cells[i].clone()).collect();
        regions.push(Region::remainder(outer, holes));
    }
    let mut out: Vec<Region> = cells
        .into_iter()
        .zip(homothet_flags)
        .map(|(c, f)| Region::cell(c, f))
        .collect();
    out.extend(regions);
    Ok(out)
}

/// Grid of `a × b` boxes (in the frame rotated by `theta`) fully inside
/// `body`, with the grid anchored at the body's centroid plus `shift`.
pub(crate) fn grid_cells_inside(
    body: &ConvexBody,
    a: f64,
    b: f64,
    theta: f64,
    shift: Point,
) -> Vec<OrientedRect> {
    let frame: Vec<Point> = body.vertices().iter().map(|p| p.rotate(-theta)).collect();
    let Some(frame) = ConvexBody::from_ccw_cleaned(frame) else {
        return Vec::new();
    };
    let planes = frame.half_planes();
    let (lo, hi) = frame.bbox();
    let anchor = body.centroid().rotate(-theta) + shift;
    let i0 = ((lo.x - anchor.x) / a).floor() as i64;
    let i1 = ((hi.x - anchor.x) / a).ceil() as i64;
    let j0 = ((lo.y - anchor.y) / b).floor() as i64;
    let j1 = ((hi.y - anchor.y) / b).ceil() as i64;
    let mut out = Vec::new();
    for j in j0..j1 {
        let y = anchor.y + j as f64 * b;
        for i in i0..i1 {
            let x = anchor.x + i as f64 * a;
            let corners = [
                Point::new(x, y),
                Point::new(x + a, y),
                Point::new(x + a, y + b),
                Point::new(x, y + b),
            ];
            if corners
                .iter()
                .all(|&c| planes.iter().all(|h| h.value(c) <= 1e-15))
            {
                let c = Point::new(x + 0.5 * a, y + 0.5 * b).rotate(theta);
                if let Ok(r) = OrientedRect::new(c, a, b, theta) {
                    if super::body_contains_rect(body, &r) {
                        out.push(r);
                    }
                }
            }
        }
    }
    out
}

/// Densest of a few grid anchorings.
pub(crate) fn best_grid(body: &ConvexBody, a: f64, b: f64, theta: f64) -> Vec<OrientedRect> {
    const SUB: usize = 4;
    let mut best: Vec<OrientedRect> = Vec::new();
    for sj in 0..SUB {
        for si in 0..SUB {
            let shift = Point::new(a * si as f64 / SUB as f64, b * sj as f64 / SUB as f64);
            let g = grid_cells_inside(body, a, b, theta, shift);
            if g.len() > best.len() {
                best = g;
            }
        }
    }
    best
}

fn homothet_cells(body: &ConvexBody, m: usize, cell_shape: &OrientedRect) -> Vec<OrientedRect> {
    let s = (body.area() / (m as f64 * cell_shape.area())).sqrt();
    best_grid(
        body,
        s * cell_shape.width(),
        s * cell_shape.height(),
        cell_shape.inclination(),
    )
}

#[inline]
fn needed(m: usize) -> usize {
    (2 * m).div_ceil(3)
}

/// Smallest `m <= max_m` for which the grid construction yields at least
/// `⌈2m/3⌉` interior homothets.
pub fn partition_threshold(body: &ConvexBody, cell_shape: &OrientedRect, max_m: usize) -> Option<usize> {
    (1..=max_m).find(|&m| homothet_cells(body, m, cell_shape).len() >= needed(m))
}

/// Partition into `m` equal-area regions, at least `⌈2m/3⌉` of them homothets of `cell_shape`.
pub fn equal_area_partition(
    body: &ConvexBody,
    m: usize,
    cell_shape: &OrientedRect,
) -> Result<Vec<Region>, GeomError> {
    if m == 0 {
        return Err(GeomError::TooFewCells { m, m0: None });
    }
    let mut cells = homothet_cells(body, m, cell_shape);
    if cells.len() < needed(m) {
        return Err(GeomError::TooFewCells {
            m,
            m0: partition_threshold(body, cell_shape, 16 * m.max(16)),
        });
    }
    // Grid cells never outnumber m since each has area a(K)/m.
    cells.truncate(m);
    let bodies: Vec<ConvexBody> = cells.iter().map(|r| r.to_body()).collect();
    let flags = vec![true; bodies.len()];
    partition_with_cells(body, bodies, flags, body.area() / m as f64)
}

/// `k` vertical slices of equal area.
pub fn strip_partition(body: &ConvexBody, k: usize) -> Result<Vec<Region>, GeomError> {
    if k == 0 {
        return Err(GeomError::InvalidPartition("zero strips"));
    }
    partition_with_cells(body, Vec::new(), Vec::new(), body.area() / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total_area(rs: &[Region]) -> f64 {
        rs.iter().map(|r| r.area()).sum()
    }

    #[test]
    fn four_squares() {
        let sq = ConvexBody::unit_square();
        let cell = OrientedRect::new(Point::new(0.0, 0.0), 1.0, 1.0, 0.0).unwrap();
        let rs = equal_area_partition(&sq, 4, &cell).unwrap();
        assert_eq!(rs.len(), 4);
        assert!(rs.iter().all(|r| r.is_homothet));
        for r in &rs {
            assert!((r.area() - 0.25).abs() < 1e-9);
        }
    }

    #[test]
    fn hundred_two_by_one_cells() {
        let sq = ConvexBody::unit_square();
        let cell = OrientedRect::new(Point::new(0.0, 0.0), 1.0, 2.0, 0.0).unwrap();
        let rs = equal_area_partition(&sq, 100, &cell).unwrap();
        assert_eq!(rs.len(), 100);
        let homs = rs.iter().filter(|r| r.is_homothet).count();
        // 14 x 7 grid of 0.0707 x 0.1414 cells fits.
        assert_eq!(homs, 98);
        for r in &rs {
            assert!((r.area() - 0.01).abs() < 1e-9, "{}", r.area());
        }
        assert!((total_area(&rs) - 1.0).abs() < 100.0 * 1e-9);
    }

    #[test]
    fn disk_partition() {
        let disk = ConvexBody::disk(128);
        let cell = OrientedRect::new(Point::new(0.0, 0.0), 1.0, 1.0, 0.3).unwrap();
        let m = 300;
        let rs = equal_area_partition(&disk, m, &cell).unwrap();
        assert_eq!(rs.len(), m);
        assert!(rs.iter().filter(|r| r.is_homothet).count() >= 200);
        for r in &rs {
            assert!((r.area() - 1.0 / m as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn too_few_cells() {
        let sq = ConvexBody::unit_square();
        let cell = OrientedRect::new(Point::new(0.0, 0.0), 1.0, 3.0, 0.2).unwrap();
        match equal_area_partition(&sq, 2, &cell) {
            Err(GeomError::TooFewCells { m: 2, m0 }) => {
                let m0 = m0.unwrap();
                assert!(m0 > 2);
                assert!(equal_area_partition(&sq, m0, &cell).is_ok());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn strips_of_a_triangle() {
        let t = ConvexBody::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        let rs = strip_partition(&t, 7).unwrap();
        assert_eq!(rs.len(), 7);
        for r in &rs {
            assert!((r.area() - 1.0 / 7.0).abs() < 1e-9);
        }
    }

    #[test]
    fn remainder_membership() {
        let sq = ConvexBody::unit_square();
        let hole = ConvexBody::axis_rect(Point::new(0.25, 0.25), Point::new(0.75, 0.75));
        let r = Region::remainder(sq, vec![hole]);
        assert!((r.area() - 0.75).abs() < 1e-15);
        assert!(!r.contains(Point::new(0.5, 0.5), Containment::Closed));
        assert!(r.contains(Point::new(0.25, 0.5), Containment::Closed));
        assert!(!r.contains(Point::new(0.25, 0.5), Containment::Open));
        assert!(r.contains(Point::new(0.1, 0.5), Containment::Open));
    }
}
