//! Largest empty axis-parallel rectangle among points in an axis-parallel box.

use super::NetError;
use crate::geom::{OrientedRect, Point};

/// Point limit of the enumeration oracle.
pub const ORACLE_MAX_POINTS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct AxisBox {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl AxisBox {
    #[inline]
    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }
    #[inline]
    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
    #[inline]
    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
}

/// Callbacks of the stair sweep.
pub(crate) trait BoxVisitor {
    /// Called before each step with the current band height and the distance
    /// to the far wall; `true` abandons the current sweep.
    fn prune(&mut self, band: f64, reach: f64) -> bool;
    /// Called for each empty box; `true` stops the whole enumeration.
    fn visit(&mut self, b: &AxisBox) -> bool;
}

/// Visits a superset of the maximal empty boxes in `[lo, hi]`.
///
/// `by_x` must be sorted by `x`, `ys` holds the sorted `y` coordinates.
/// Every maximal box has a left side on a point or on the left wall and a
/// right side on a point or on the right wall; sweeping right from every
/// point, left from every point, and taking the full-width gaps covers all
/// four combinations. Returns `true` if the visitor stopped early.
pub(crate) fn maximal_empty_boxes<V: BoxVisitor>(lo: Point, hi: Point, by_x: &[Point], ys: &[f64], v: &mut V) -> bool {
    for (k, &p) in by_x.iter().enumerate() {
        let (mut bot, mut top) = (lo.y, hi.y);
        let mut closed = false;
        let mut pruned = false;
        for &q in &by_x[k + 1..] {
            if q.x <= p.x {
                continue;
            }
            if v.prune(top - bot, hi.x - p.x) {
                pruned = true;
                break;
            }
            if q.y > bot && q.y < top {
                if v.visit(&AxisBox { x0: p.x, x1: q.x, y0: bot, y1: top }) {
                    return true;
                }
                if q.y > p.y {
                    top = q.y;
                } else if q.y < p.y {
                    bot = q.y;
                } else {
                    closed = true;
                    break;
                }
            }
        }
        if !closed && !pruned && !v.prune(top - bot, hi.x - p.x) && v.visit(&AxisBox { x0: p.x, x1: hi.x, y0: bot, y1: top }) {
            return true;
        }
    }
    for (k, &p) in by_x.iter().enumerate().rev() {
        let (mut bot, mut top) = (lo.y, hi.y);
        let mut closed = false;
        let mut pruned = false;
        for &q in by_x[..k].iter().rev() {
            if q.x >= p.x {
                continue;
            }
            if v.prune(top - bot, p.x - lo.x) {
                pruned = true;
                break;
            }
            if q.y > bot && q.y < top {
                if v.visit(&AxisBox { x0: q.x, x1: p.x, y0: bot, y1: top }) {
                    return true;
                }
                if q.y > p.y {
                    top = q.y;
                } else if q.y < p.y {
                    bot = q.y;
                } else {
                    closed = true;
                    break;
                }
            }
        }
        if !closed && !pruned && !v.prune(top - bot, p.x - lo.x) && v.visit(&AxisBox { x0: lo.x, x1: p.x, y0: bot, y1: top }) {
            return true;
        }
    }
    let mut prev = lo.y;
    for &y in ys.iter().chain(std::iter::once(&hi.y)) {
        if y > prev && v.visit(&AxisBox { x0: lo.x, x1: hi.x, y0: prev, y1: y }) {
            return true;
        }
        prev = prev.max(y);
    }
    false
}

struct Largest {
    best: Option<AxisBox>,
    best_area: f64,
}

impl BoxVisitor for Largest {
    fn prune(&mut self, band: f64, reach: f64) -> bool {
        band * reach <= self.best_area
    }
    fn visit(&mut self, b: &AxisBox) -> bool {
        let a = b.area();
        if a > self.best_area {
            self.best_area = a;
            self.best = Some(*b);
        }
        false
    }
}

fn check_container(container: &OrientedRect, points: &[Point]) -> Result<(Point, Point), NetError> {
    if !container.is_axis_parallel() {
        return Err(NetError::NotAxisParallel);
    }
    let (lo, hi) = container.axis_bounds();
    if let Some(k) = points
        .iter()
        .position(|p| !(p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y))
    {
        return Err(NetError::PointOutsideContainer(k));
    }
    Ok((lo, hi))
}

pub(crate) fn largest_empty_box(lo: Point, hi: Point, points: &[Point]) -> AxisBox {
    let mut by_x = points.to_vec();
    by_x.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let mut ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    ys.sort_by(f64::total_cmp);
    let mut v = Largest {
        best: None,
        best_area: 0.0,
    };
    // Seed with the widest full-width gap so pruning bites from the start.
    let mut prev = lo.y;
    for &y in ys.iter().chain(std::iter::once(&hi.y)) {
        v.visit(&AxisBox { x0: lo.x, x1: hi.x, y0: prev, y1: y.max(prev) });
        prev = prev.max(y);
    }
    maximal_empty_boxes(lo, hi, &by_x, &ys, &mut v);
    v.best.unwrap_or(AxisBox { x0: lo.x, x1: hi.x, y0: lo.y, y1: hi.y })
}

/// The box as a rectangle whose reconstructed corners stay inside the box.
pub(crate) fn box_rect(b: &AxisBox) -> Result<OrientedRect, NetError> {
    let mut r = OrientedRect::axis(Point::new(b.x0, b.y0), Point::new(b.x1, b.y1))?;
    let inside = |r: &OrientedRect| {
        r.corners()
            .iter()
            .all(|c| c.x >= b.x0 && c.x <= b.x1 && c.y >= b.y0 && c.y <= b.y1)
    };
    let (mut s, mut step) = (1.0, 1e-15);
    while !inside(&r) {
        s *= 1.0 - step;
        step *= 2.0;
        r = OrientedRect::axis(Point::new(b.x0, b.y0), Point::new(b.x1, b.y1))?.scaled(s);
    }
    Ok(r)
}

/// Largest axis-parallel rectangle in `container` whose open interior holds no point.
pub fn max_empty_axis_rect(container: &OrientedRect, points: &[Point]) -> Result<(OrientedRect, f64), NetError> {
    let (lo, hi) = check_container(container, points)?;
    let b = largest_empty_box(lo, hi, points);
    Ok((box_rect(&b)?, b.area()))
}

/// Exhaustive reference: for every pair of left/right sides drawn from point
/// and container coordinates, the tallest empty band between them.
pub fn max_empty_axis_rect_oracle(container: &OrientedRect, points: &[Point]) -> Result<f64, NetError> {
    if points.len() > ORACLE_MAX_POINTS {
        return Err(NetError::TooManyPoints(points.len()));
    }
    let (lo, hi) = check_container(container, points)?;
    let mut xs: Vec<f64> = points.iter().map(|p| p.x).chain([lo.x, hi.x]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut best = 0.0f64;
    for (a, &xl) in xs.iter().enumerate() {
        for &xr in &xs[a + 1..] {
            let mut ys: Vec<f64> = points
                .iter()
                .filter(|p| p.x > xl && p.x < xr)
                .map(|p| p.y)
                .chain([lo.y, hi.y])
                .collect();
            ys.sort_by(f64::total_cmp);
            let gap = ys.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            best = best.max((xr - xl) * gap);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> OrientedRect {
        OrientedRect::axis(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap()
    }

    #[test]
    fn spec_cases() {
        let (r, a) = max_empty_axis_rect(&unit(), &[]).unwrap();
        assert_eq!((a, r), (1.0, unit()));
        let (_, a) = max_empty_axis_rect(&unit(), &[Point::new(0.5, 0.5)]).unwrap();
        assert_eq!(a, 0.5);
        let two = [Point::new(0.25, 0.5), Point::new(0.75, 0.5)];
        assert_eq!(max_empty_axis_rect(&unit(), &two).unwrap().1, 0.5);
        assert_eq!(max_empty_axis_rect_oracle(&unit(), &two).unwrap(), 0.5);
        assert_eq!(max_empty_axis_rect_oracle(&unit(), &[Point::new(0.0, 0.0)]).unwrap(), 1.0);
        assert_eq!(max_empty_axis_rect(&unit(), &[Point::new(0.0, 0.0)]).unwrap().1, 1.0);
    }

    #[test]
    fn rejects_bad_input() {
        let tilted = OrientedRect::new(Point::new(0.0, 0.0), 1.0, 2.0, 0.3).unwrap();
        assert_eq!(max_empty_axis_rect(&tilted, &[]), Err(NetError::NotAxisParallel));
        assert_eq!(
            max_empty_axis_rect(&unit(), &[Point::new(2.0, 0.5)]),
            Err(NetError::PointOutsideContainer(0))
        );
        let many = vec![Point::new(0.5, 0.5); 61];
        assert_eq!(max_empty_axis_rect_oracle(&unit(), &many), Err(NetError::TooManyPoints(61)));
    }

    #[test]
    fn grid_points_and_ties() {
        let pts: Vec<Point> = (1..4)
            .flat_map(|i| (1..4).map(move |j| Point::new(i as f64 / 4.0, j as f64 / 4.0)))
            .collect();
        let a = max_empty_axis_rect(&unit(), &pts).unwrap().1;
        assert_eq!(a, max_empty_axis_rect_oracle(&unit(), &pts).unwrap());
        assert_eq!(a, 0.25);
    }
}
