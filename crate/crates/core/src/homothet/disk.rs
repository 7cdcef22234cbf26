use serde::{Deserialize, Serialize};

use super::HomothetError;
use crate::geom::{GeomError, OrientedRect, Point};

/// Point limit of the disk oracle.
pub const DISK_ORACLE_MAX_POINTS: usize = 500;

/// Largest empty disk inside an axis-parallel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskHole {
    pub center: Point,
    pub radius: f64,
}

impl DiskHole {
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }
}

/// Walls as `(outward unit normal, offset)`; distance to the wall is
/// `offset - normal · c`.
fn walls(lo: Point, hi: Point) -> [(Point, f64); 4] {
    [
        (Point::new(-1.0, 0.0), -lo.x),
        (Point::new(1.0, 0.0), hi.x),
        (Point::new(0.0, -1.0), -lo.y),
        (Point::new(0.0, 1.0), hi.y),
    ]
}

/// Real roots of `a t² + 2 b t + c = 0`.
fn roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a.abs() < 1e-14 {
        if b.abs() < 1e-300 {
            return Vec::new();
        }
        return vec![-c / (2.0 * b)];
    }
    let disc = b * b - a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    vec![(-b + s) / a, (-b - s) / a]
}

fn circumcenter(a: Point, b: Point, c: Point) -> Option<Point> {
    let (ab, ac) = (b - a, c - a);
    let d = 2.0 * ab.cross(ac);
    if d == 0.0 {
        return None;
    }
    let (l1, l2) = (ab.dot(ab), ac.dot(ac));
    Some(a + Point::new(ac.y * l1 - ab.y * l2, ab.x * l2 - ac.x * l1) * (1.0 / d))
}

/// Exact largest empty disk with its centre in `container`, by enumerating
/// every centre equidistant from three sites, a site being a point or a wall.
pub fn largest_empty_disk_oracle(container: &OrientedRect, points: &[Point]) -> Result<DiskHole, HomothetError> {
    if points.len() > DISK_ORACLE_MAX_POINTS {
        return Err(HomothetError::TooManyPoints(points.len()));
    }
    if !container.is_axis_parallel() {
        return Err(GeomError::InvalidRect("container must be axis-parallel").into());
    }
    let (lo, hi) = container.axis_bounds();
    let ws = walls(lo, hi);
    let mut best = DiskHole {
        center: container.center(),
        radius: f64::NEG_INFINITY,
    };
    let mut consider = |c: Point| {
        if !(c.is_finite() && c.x >= lo.x && c.x <= hi.x && c.y >= lo.y && c.y <= hi.y) {
            return;
        }
        let mut r = ws.iter().map(|&(nu, b)| b - nu.dot(c)).fold(f64::INFINITY, f64::min);
        for p in points {
            if r <= best.radius {
                return;
            }
            r = r.min(p.dist(c));
        }
        if r > best.radius {
            best = DiskHole { center: c, radius: r };
        }
    };

    // Three walls.
    for a in 0..4 {
        for b in a + 1..4 {
            for c in b + 1..4 {
                let rows = [ws[a], ws[b], ws[c]];
                // nu · x + r = off, solved by Cramer's rule.
                let m = rows.map(|(nu, off)| [nu.x, nu.y, 1.0, off]);
                let det3 = |k: [[f64; 3]; 3]| {
                    k[0][0] * (k[1][1] * k[2][2] - k[1][2] * k[2][1]) - k[0][1] * (k[1][0] * k[2][2] - k[1][2] * k[2][0])
                        + k[0][2] * (k[1][0] * k[2][1] - k[1][1] * k[2][0])
                };
                let col = |skip: usize| m.map(|r| [0, 1, 2].map(|i| if i == skip { r[3] } else { r[i] }));
                let d = det3(m.map(|r| [r[0], r[1], r[2]]));
                if d.abs() > 1e-12 {
                    consider(Point::new(det3(col(0)) / d, det3(col(1)) / d));
                }
            }
        }
    }
    // Two walls and a point.
    for a in 0..4 {
        for b in a + 1..4 {
            let ((n1, b1), (n2, b2)) = (ws[a], ws[b]);
            let dn = n1 - n2;
            let len2 = dn.dot(dn);
            let c0 = dn * ((b1 - b2) / len2);
            let d = dn.perp() * (1.0 / len2.sqrt());
            let r0 = b1 - n1.dot(c0);
            let g = n1.dot(d);
            for &p in points {
                let u = c0 - p;
                for t in roots(1.0 - g * g, u.dot(d) + r0 * g, u.dot(u) - r0 * r0) {
                    consider(c0 + d * t);
                }
            }
        }
    }
    // One wall and two points.
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            if p == q {
                continue;
            }
            let m = (p + q) * 0.5;
            let d = (q - p).perp() * (1.0 / (q - p).norm());
            let u = m - p;
            for &(nu, b) in &ws {
                let e = b - nu.dot(m);
                let g = nu.dot(d);
                for t in roots(1.0 - g * g, e * g, u.dot(u) - e * e) {
                    consider(m + d * t);
                }
            }
        }
    }
    // Three points.
    for (i, &a) in points.iter().enumerate() {
        for (j, &b) in points.iter().enumerate().skip(i + 1) {
            for &c in &points[j + 1..] {
                if let Some(cc) = circumcenter(a, b, c) {
                    consider(cc);
                }
            }
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

    fn grid_search(points: &[Point], k: usize) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..=k {
            for j in 0..=k {
                let c = Point::new(i as f64 / k as f64, j as f64 / k as f64);
                let mut r = c.x.min(c.y).min(1.0 - c.x).min(1.0 - c.y);
                for p in points {
                    r = r.min(p.dist(c));
                }
                best = best.max(r);
            }
        }
        best
    }

    #[test]
    fn no_points() {
        let d = largest_empty_disk_oracle(&unit(), &[]).unwrap();
        assert!((d.radius - 0.5).abs() < 1e-15);
        assert_eq!(d.center, Point::new(0.5, 0.5));
    }

    #[test]
    fn centre_point_hugs_a_corner() {
        let pts = [Point::new(0.5, 0.5)];
        let d = largest_empty_disk_oracle(&unit(), &pts).unwrap();
        // Tangent to two walls and through the centre.
        let r = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
        assert!((d.radius - r).abs() < 1e-12, "{}", d.radius);
        assert!(d.radius >= grid_search(&pts, 400) - 1e-12);
    }

    #[test]
    fn two_points_against_grid() {
        let pts = [Point::new(1.0 / 3.0, 0.5), Point::new(2.0 / 3.0, 0.5)];
        let d = largest_empty_disk_oracle(&unit(), &pts).unwrap();
        let g = grid_search(&pts, 1000);
        assert!(d.radius >= g - 1e-12);
        assert!(d.radius - g < 1e-3);
    }

    #[test]
    fn rejects_too_many() {
        let pts = vec![Point::new(0.5, 0.5); 501];
        assert_eq!(
            largest_empty_disk_oracle(&unit(), &pts).unwrap_err(),
            HomothetError::TooManyPoints(501)
        );
    }
}
