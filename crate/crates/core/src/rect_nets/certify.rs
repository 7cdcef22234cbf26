use serde::{Deserialize, Serialize};

use super::maxrect::{largest_empty_box, maximal_empty_boxes, AxisBox, BoxVisitor};
use super::net::{feasible_centers, x_interval};
use super::quantize::{shrink_to_area, witness_for};
use super::{LevelDims, NetError, NetRect, RectNet};
use crate::geom::{body_contains_rect, lassak_rectangles, ConvexBody, OrientedRect, Point};
use crate::index::PointGrid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    /// Point visits allowed for the rotation scan before giving up.
    pub work_budget: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            work_budget: 2_000_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RectCertificate {
    /// Every net member holds a point: no empty rectangle of area `upper`.
    Certified { upper: f64 },
    /// An empty net member.
    NotCertified { witness: NetRect },
    /// The scan ran out of budget after `scanned` of `total` rotations.
    Undetermined { scanned: u64, total: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetMaxEmptyRect {
    pub lower: f64,
    pub lower_rect: Option<OrientedRect>,
    pub certificate: RectCertificate,
}

impl NetMaxEmptyRect {
    /// Certified upper bound, or `+∞`.
    pub fn upper(&self) -> f64 {
        match self.certificate {
            RectCertificate::Certified { upper } => upper,
            _ => f64::INFINITY,
        }
    }
}

fn is_empty_open(grid: &PointGrid, r: &OrientedRect) -> bool {
    let cs = r.corners();
    let lo = Point::new(
        cs.iter().map(|c| c.x).fold(f64::INFINITY, f64::min),
        cs.iter().map(|c| c.y).fold(f64::INFINITY, f64::min),
    );
    let hi = Point::new(
        cs.iter().map(|c| c.x).fold(f64::NEG_INFINITY, f64::max),
        cs.iter().map(|c| c.y).fold(f64::NEG_INFINITY, f64::max),
    );
    !grid.any_in_box(lo, hi, |i| r.contains_point_open(grid.points()[i]))
}

/// Exact largest empty axis box inside the inscribed rectangle of the body,
/// mapped back and checked against the full sample.
fn inscribed_lower(body: &ConvexBody, grid: &PointGrid) -> Option<OrientedRect> {
    let s = lassak_rectangles(body).ok()?.inscribed;
    let (phi, c) = (s.inclination(), s.center());
    let (hw, hh) = (0.5 * s.width(), 0.5 * s.height());
    let local: Vec<Point> = grid
        .points()
        .iter()
        .filter(|&&p| s.contains_point_closed(p))
        .map(|&p| {
            let q = (p - c).rotate(-phi);
            Point::new(q.x.clamp(-hw, hw), q.y.clamp(-hh, hh))
        })
        .collect();
    let b = largest_empty_box(Point::new(-hw, -hh), Point::new(hw, hh), &local);
    let centre = c + Point::new(0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)).rotate(phi);
    let mut r = OrientedRect::new(centre, b.width(), b.height(), phi).ok()?;
    for _ in 0..64 {
        if body_contains_rect(body, &r) && is_empty_open(grid, &r) {
            return Some(r);
        }
        r = r.scaled(1.0 - 1e-9);
    }
    None
}

struct Scan<'a> {
    net: &'a RectNet,
    grid: &'a PointGrid,
    t: u64,
    frame: &'a ConvexBody,
    dims: &'a [LevelDims],
    feasible: Vec<Option<Option<Vec<Point>>>>,
    hmin: f64,
    wmin: f64,
    area_lo: f64,
    work: u64,
    found: Option<NetRect>,
}

impl Scan<'_> {
    fn feasible(&mut self, k: usize) -> Option<&Vec<Point>> {
        if self.feasible[k].is_none() {
            let d = self.dims[k];
            self.feasible[k] = Some(feasible_centers(self.frame, d.w, d.h, None));
        }
        self.feasible[k].as_ref().unwrap().as_ref()
    }

    /// Looks for a net member of rotation `t` inside the empty box `e`.
    fn member_in(&mut self, e: &AxisBox) -> Option<NetRect> {
        let p = *self.net.params();
        for k in 0..self.dims.len() {
            let d = self.dims[k];
            if d.w > e.width() || d.h > e.height() {
                continue;
            }
            let (cx0, cx1) = (e.x0 + 0.5 * d.w, e.x1 - 0.5 * d.w);
            let (cy0, cy1) = (e.y0 + 0.5 * d.h, e.y1 - 0.5 * d.h);
            let Some(f) = self.feasible(k).cloned() else {
                continue;
            };
            let boxed = vec![
                Point::new(cx0, cy0),
                Point::new(cx1, cy0),
                Point::new(cx1, cy1),
                Point::new(cx0, cy1),
            ];
            let Some(poly) = clip_convex(&f, &boxed) else {
                continue;
            };
            let ymin = poly.iter().map(|q| q.y).fold(f64::INFINITY, f64::min);
            let ymax = poly.iter().map(|q| q.y).fold(f64::NEG_INFINITY, f64::max);
            let mut tries = 0;
            for j in (ymin / d.dy).ceil() as i64..=(ymax / d.dy).floor() as i64 {
                let Some((xl, xr)) = x_interval(&poly, j as f64 * d.dy) else {
                    continue;
                };
                for i in (xl / d.dx).ceil() as i64..=(xr / d.dx).floor() as i64 {
                    let Ok(r) = NetRect::new(&p, d.m, self.t, i, j) else {
                        continue;
                    };
                    if self.net.contains(&r) && is_empty_open(self.grid, &r.rect) {
                        return Some(r);
                    }
                    tries += 1;
                    if tries > 8 {
                        break;
                    }
                }
            }
        }
        None
    }
}

/// Intersection of two convex polygons given as vertex lists.
fn clip_convex(a: &[Point], b: &[Point]) -> Option<Vec<Point>> {
    let mut poly = a.to_vec();
    let n = b.len();
    for k in 0..n {
        let (p, q) = (b[k], b[(k + 1) % n]);
        let d = q - p;
        let normal = Point::new(d.y, -d.x);
        let h = crate::geom::HalfPlane {
            normal,
            offset: normal.dot(p),
        };
        poly = crate::geom::clip_polygon(&poly, &h)?;
    }
    Some(poly)
}

impl BoxVisitor for Scan<'_> {
    fn prune(&mut self, band: f64, reach: f64) -> bool {
        self.work += 1;
        band < self.hmin || reach < self.wmin
    }

    fn visit(&mut self, e: &AxisBox) -> bool {
        if e.width() < self.wmin || e.height() < self.hmin || e.area() < self.area_lo {
            return false;
        }
        if let Some(r) = self.member_in(e) {
            self.found = Some(r);
            return true;
        }
        false
    }
}

fn coprime_stride(total: u64) -> u64 {
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut s = ((total as f64) * 0.618_033_988_749_895) as u64;
    s = s.max(1);
    while gcd(s, total) != 1 {
        s += 1;
    }
    s
}

/// Largest empty rectangle found, together with the net certificate.
///
/// The lower bound is the exact largest empty axis-parallel rectangle
/// inside the inscribed rectangle of the body, or the area of an empty net
/// member. If that rectangle already reaches `(2+4ε) log n / n` it is pushed
/// through quantization and the witness search, which yields an empty net
/// member directly. Otherwise every rotation `t` is scanned: the maximal
/// empty boxes of the rotated sample are enumerated and each one large
/// enough to hold a member of some level is searched for a grid position
/// inside the body.
pub fn net_max_empty_rect(net: &RectNet, points: &[Point], opts: CertifyOptions) -> Result<NetMaxEmptyRect, NetError> {
    let p = *net.params();
    let grid = PointGrid::from_points(points, 2.0);
    let lower_rect = inscribed_lower(net.body(), &grid);
    let mut lower = lower_rect.map_or(0.0, |r| r.area());
    let refuted = |w: NetRect, lower: f64| NetMaxEmptyRect {
        lower: lower.max(p.area_lo),
        lower_rect,
        certificate: RectCertificate::NotCertified { witness: w },
    };
    if let Some(e) = lower_rect.filter(|r| r.area() >= p.area_hi) {
        let r = shrink_to_area(&e, p.area_hi);
        if let Ok(w) = witness_for(&r, net) {
            if is_empty_open(&grid, &w.rect) {
                return Ok(refuted(w, lower));
            }
        }
    }

    let dims: Vec<LevelDims> = p.levels().map(|m| p.level(m)).collect();
    if dims.is_empty() {
        return Ok(NetMaxEmptyRect {
            lower,
            lower_rect,
            certificate: RectCertificate::Certified { upper: p.area_hi },
        });
    }
    let hmin = dims.iter().map(|d| d.h).fold(f64::INFINITY, f64::min);
    let wmin = dims.iter().map(|d| d.w).fold(f64::INFINITY, f64::min);
    let total = p.theta_count();
    let stride = coprime_stride(total);
    let n = points.len() as u64;
    let sort_cost = n * (64 - n.leading_zeros() as u64) + n;
    let mut work = 0u64;
    let mut by_x = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for k in 0..total {
        if work + sort_cost > opts.work_budget {
            return Ok(NetMaxEmptyRect {
                lower,
                lower_rect,
                certificate: RectCertificate::Undetermined { scanned: k, total },
            });
        }
        let t = ((k as u128 * stride as u128) % total as u128) as u64;
        let Some(frame) = net.frame(t) else {
            continue;
        };
        let (s, c) = p.angle(t).sin_cos();
        by_x.clear();
        by_x.extend(points.iter().map(|q| Point::new(c * q.x + s * q.y, -s * q.x + c * q.y)));
        by_x.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        ys.clear();
        ys.extend(by_x.iter().map(|q| q.y));
        ys.sort_by(f64::total_cmp);
        let (lo, hi) = frame.bbox();
        let mut scan = Scan {
            net,
            grid: &grid,
            t,
            frame: &frame,
            dims: &dims,
            feasible: vec![None; dims.len()],
            hmin,
            wmin,
            area_lo: p.area_lo,
            work: 0,
            found: None,
        };
        maximal_empty_boxes(lo, hi, &by_x, &ys, &mut scan);
        work += sort_cost + scan.work;
        if let Some(w) = scan.found {
            lower = lower.max(p.area_lo);
            return Ok(refuted(w, lower));
        }
    }
    Ok(NetMaxEmptyRect {
        lower,
        lower_rect,
        certificate: RectCertificate::Certified { upper: p.area_hi },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rect_nets::make_net_params;

    #[test]
    fn empty_sample_is_not_certified() {
        let sq = ConvexBody::unit_square();
        let p = make_net_params(1000, 0.1, &sq).unwrap();
        let net = RectNet::new(sq, p);
        let out = net_max_empty_rect(&net, &[], CertifyOptions::default()).unwrap();
        assert!((out.lower - 1.0).abs() < 1e-12);
        assert!(matches!(out.certificate, RectCertificate::NotCertified { .. }));
        assert_eq!(out.upper(), f64::INFINITY);
    }

    #[test]
    fn corner_cluster_is_not_certified() {
        let sq = ConvexBody::unit_square();
        let p = make_net_params(400, 0.1, &sq).unwrap();
        let net = RectNet::new(sq, p);
        let pts: Vec<Point> = (0..400)
            .map(|k| Point::new(0.01 + 0.08 * (k % 20) as f64 / 20.0, 0.01 + 0.08 * (k / 20) as f64 / 20.0))
            .collect();
        let out = net_max_empty_rect(&net, &pts, CertifyOptions::default()).unwrap();
        let RectCertificate::NotCertified { witness } = out.certificate else {
            panic!("expected an empty net member");
        };
        assert!(pts.iter().all(|&q| !witness.rect.contains_point_open(q)));
        assert!(out.lower > 0.5);
    }

    #[test]
    fn stride_is_coprime() {
        for total in [1u64, 2, 10, 97, 1000, 51_567] {
            let s = coprime_stride(total);
            let mut seen = std::collections::HashSet::new();
            for k in 0..total.min(2000) {
                seen.insert((k * s) % total);
            }
            assert_eq!(seen.len() as u64, total.min(2000));
        }
    }
}
