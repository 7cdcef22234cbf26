use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ConvexChain, HolesError};
use crate::geom::{orient, Point};
use crate::index::{PointGrid, Visit};

/// Largest sample size handled by the exact dynamic program.
pub const POLYMAX_EXACT_MAX_POINTS: usize = 400;
/// Neighbours of each anchor kept in lower-bound mode.
pub const POLYMAX_WINDOW: usize = 32;
/// Point limit of the subset-enumeration oracle.
pub const POLYMAX_ORACLE_MAX_POINTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyMax {
    pub chain: ConvexChain,
    pub area: f64,
    /// `false` in lower-bound mode.
    pub exact: bool,
    /// All points collinear.
    pub degenerate: bool,
}

fn dedup(points: &[Point]) -> Vec<Point> {
    let mut v = points.to_vec();
    v.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    v.dedup();
    v
}

#[inline]
fn above(p: Point, q: Point) -> bool {
    q.y > p.y || (q.y == p.y && q.x > p.x)
}

/// Best polygon with lowest vertex `p` and other vertices among `cand`.
///
/// `cand` holds every point above `p` that could lie inside such a
/// polygon; it is sorted here by angle around `p`, ties by distance.
fn best_for_anchor(p: Point, mut cand: Vec<Point>) -> (f64, Vec<Point>) {
    let m = cand.len();
    if m < 2 {
        return (0.0, Vec::new());
    }
    cand.sort_by(|&a, &b| {
        let o = orient(p, a, b);
        if o > 0.0 {
            std::cmp::Ordering::Less
        } else if o < 0.0 {
            std::cmp::Ordering::Greater
        } else {
            (a - p).dot(a - p).total_cmp(&(b - p).dot(b - p))
        }
    });
    // Same direction from p as the previous point: that point lies on the segment p–cand[i].
    let blocked: Vec<bool> = (0..m).map(|i| i > 0 && orient(p, cand[i - 1], cand[i]) == 0.0).collect();
    let same_ray = |i: usize, j: usize| orient(p, cand[i], cand[j]) == 0.0;
    // Triangle (p, i, j) has no sample point in its open interior.
    let tri_empty = |i: usize, j: usize| -> bool {
        let (a, b) = (cand[i], cand[j]);
        (i + 1..j).all(|k| {
            let q = cand[k];
            !(orient(p, a, q) > 0.0 && orient(a, b, q) > 0.0 && orient(b, p, q) > 0.0)
        })
    };
    const NONE: u32 = u32::MAX;
    let mut f = vec![f64::NEG_INFINITY; m * m];
    let mut pred = vec![NONE; m * m];
    let mut best = (0.0, NONE, NONE);
    for i in 0..m {
        // Incoming chains ending with edge h -> i, usable only if p–i is a clean diagonal.
        let incoming: Vec<(usize, f64)> = if blocked[i] {
            Vec::new()
        } else {
            (0..i).filter(|&h| f[h * m + i] > f64::NEG_INFINITY).map(|h| (h, f[h * m + i])).collect()
        };
        for j in i + 1..m {
            if same_ray(i, j) || !tri_empty(i, j) {
                continue;
            }
            let tri = 0.5 * orient(p, cand[i], cand[j]);
            let mut val = tri;
            let mut from = NONE;
            for &(h, fh) in &incoming {
                if orient(cand[h], cand[i], cand[j]) > 0.0 && fh + tri > val {
                    val = fh + tri;
                    from = h as u32;
                }
            }
            f[i * m + j] = val;
            pred[i * m + j] = from;
            if val > best.0 {
                best = (val, i as u32, j as u32);
            }
        }
    }
    if best.1 == NONE {
        return (0.0, Vec::new());
    }
    let (mut i, mut j) = (best.1 as usize, best.2 as usize);
    let mut rev = vec![cand[j]];
    loop {
        rev.push(cand[i]);
        let h = pred[i * m + j];
        if h == NONE {
            break;
        }
        j = i;
        i = h as usize;
    }
    rev.push(p);
    rev.reverse();
    (best.0, rev)
}

fn collinear(points: &[Point]) -> bool {
    points.len() < 3 || {
        let (a, b) = (points[0], points[points.len() - 1]);
        points.iter().all(|&q| orient(a, b, q) == 0.0)
    }
}

/// Largest convex polygon with vertices in the sample and no sample point in
/// its open interior.
///
/// Exact up to [`POLYMAX_EXACT_MAX_POINTS`] points: for every lowest vertex a
/// dynamic program over fan triangles in angular order. Above that, each
/// anchor only sees its [`POLYMAX_WINDOW`] nearest points above it; every
/// triangle among them is still checked against all points that could lie
/// inside it, so the result is a valid empty polygon and a lower bound.
pub fn polymax(points: &[Point]) -> Result<PolyMax, HolesError> {
    if points.len() < 3 {
        return Err(HolesError::TooFewPoints(points.len()));
    }
    let pts = dedup(points);
    if collinear(&pts) {
        let chain = if pts.len() >= 2 {
            vec![pts[0], pts[pts.len() - 1]]
        } else {
            pts.clone()
        };
        return Ok(PolyMax {
            chain: ConvexChain::new(chain, true),
            area: 0.0,
            exact: true,
            degenerate: true,
        });
    }
    let exact = pts.len() <= POLYMAX_EXACT_MAX_POINTS;
    let grid = (!exact).then(|| PointGrid::from_points(&pts, 2.0));
    let results: Vec<(f64, Vec<Point>)> = pts
        .par_iter()
        .map(|&p| {
            let d2 = |q: &Point| (*q - p).dot(*q - p);
            let mut cand: Vec<Point> = match &grid {
                None => pts.iter().copied().filter(|&q| above(p, q)).collect(),
                Some(g) => {
                    let mut near = Vec::new();
                    g.ring_search(p, |v| match v {
                        Visit::Point(k) => {
                            let q = g.points()[k];
                            if above(p, q) {
                                near.push(q);
                            }
                            false
                        }
                        Visit::Covered(r) => near.iter().filter(|q| d2(q) <= r * r).count() >= POLYMAX_WINDOW,
                    });
                    near
                }
            };
            if !exact && cand.len() > POLYMAX_WINDOW {
                cand.select_nth_unstable_by(POLYMAX_WINDOW - 1, |x, y| d2(x).total_cmp(&d2(y)));
                let r2 = d2(&cand[POLYMAX_WINDOW - 1]);
                // Keep ties with the farthest kept point; every point inside a
                // triangle of kept points is at most this far from the anchor.
                cand.retain(|q| d2(q) <= r2);
            }
            best_for_anchor(p, cand)
        })
        .collect();
    let (area, verts) = results
        .into_iter()
        .fold((0.0, Vec::new()), |acc, r| if r.0 > acc.0 { r } else { acc });
    Ok(PolyMax {
        chain: ConvexChain::new(verts, true),
        area,
        exact,
        degenerate: false,
    })
}

/// Enumerates every subset in convex position with an empty open hull.
pub fn polymax_oracle(points: &[Point]) -> Result<f64, HolesError> {
    if points.len() > POLYMAX_ORACLE_MAX_POINTS {
        return Err(HolesError::TooManyPoints(points.len()));
    }
    let pts = dedup(points);
    let n = pts.len();
    let mut best = 0.0f64;
    for mask in 1u32..(1 << n) {
        if mask.count_ones() < 3 {
            continue;
        }
        let sub: Vec<Point> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| pts[i]).collect();
        let Some(hull) = strict_hull(&sub) else {
            continue;
        };
        if hull.len() != sub.len() {
            continue;
        }
        let inside = pts.iter().any(|&q| {
            (0..hull.len()).all(|k| orient(hull[k], hull[(k + 1) % hull.len()], q) > 0.0)
        });
        if !inside {
            best = best.max(super::polygon_area(&hull));
        }
    }
    Ok(best)
}

/// Strictly convex hull (collinear boundary points dropped), `None` when degenerate.
pub(crate) fn strict_hull(points: &[Point]) -> Option<Vec<Point>> {
    let mut v = points.to_vec();
    v.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    v.dedup();
    if v.len() < 3 {
        return None;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &v {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in v.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    (lower.len() >= 3).then_some(lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corners() -> Vec<Point> {
        vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]
    }

    #[test]
    fn square_corners() {
        let r = polymax(&corners()).unwrap();
        assert_eq!(r.area, 1.0);
        assert_eq!(r.chain.vertices.len(), 4);
        assert_eq!(polymax_oracle(&corners()).unwrap(), 1.0);
    }

    #[test]
    fn centroid_on_a_diagonal() {
        let mut pts = corners();
        pts.push(Point::new(0.5, 0.5));
        assert_eq!(polymax(&pts).unwrap().area, 0.5);
        assert_eq!(polymax_oracle(&pts).unwrap(), 0.5);
    }

    #[test]
    fn triangle_and_degenerate() {
        let tri = [Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(0.0, 1.0)];
        let r = polymax(&tri).unwrap();
        assert_eq!(r.area, 1.0);
        let line = [Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 2.0)];
        let r = polymax(&line).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.area, 0.0);
        assert_eq!(r.chain.vertices.len(), 2);
        assert_eq!(polymax_oracle(&line).unwrap(), 0.0);
        assert!(matches!(polymax(&tri[..2]), Err(HolesError::TooFewPoints(2))));
        assert!(matches!(
            polymax_oracle(&vec![Point::new(0.0, 0.0); 13]),
            Err(HolesError::TooManyPoints(13))
        ));
    }

    #[test]
    fn collinear_points_on_an_edge_are_allowed() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 1.0),
        ];
        assert_eq!(polymax(&pts).unwrap().area, 0.5);
        assert_eq!(polymax_oracle(&pts).unwrap(), 0.5);
    }
}
