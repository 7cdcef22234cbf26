use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{build_homothet_net, HomothetPlacement, Shape};
use crate::geom::{Containment, ConvexBody, HalfPlane, Point};
use crate::index::{PointGrid, Visit};
use crate::sampling::PointSample;

/// Stopping rules of the centre search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Stop when no box can beat the best scale by this relative margin.
    pub rel_tol: f64,
    /// Maximum number of centre evaluations.
    pub max_evals: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            rel_tol: 1e-6,
            max_evals: 5_000_000,
        }
    }
}

/// Largest empty homothet found, with the evidence for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxHomothet {
    pub best: HomothetPlacement,
    pub area: f64,
    /// No unexplored centre can beat `area` by more than the tolerance.
    pub converged: bool,
    pub evals: u64,
    pub certificate: HomothetCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HomothetCertificate {
    /// Every member of `S_H` holds a point, so no empty homothet has area `upper`.
    Certified { upper: f64 },
    /// Some members are empty, or the net could not be built.
    NotCertified { empty_members: u64, reason: String },
}

impl HomothetCertificate {
    pub fn upper(&self) -> Option<f64> {
        match self {
            HomothetCertificate::Certified { upper } => Some(*upper),
            HomothetCertificate::NotCertified { .. } => None,
        }
    }
}

/// `L` with its centre of mass at the origin, as gauge data.
struct Gauge {
    shape: ConvexBody,
    planes: Vec<HalfPlane>,
    circumradius: f64,
    lipschitz: f64,
}

impl Gauge {
    fn new(l: &ConvexBody) -> Self {
        let shape = l.translate(-l.centroid());
        let planes = shape.unit_half_planes();
        let circumradius = shape.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max);
        let lipschitz = planes.iter().map(|h| 1.0 / h.offset).fold(0.0, f64::max);
        Gauge {
            shape,
            planes,
            circumradius,
            lipschitz,
        }
    }

    /// Smallest `λ` with `x ∈ λ L`.
    #[inline]
    fn eval(&self, x: Point) -> f64 {
        self.planes
            .iter()
            .map(|h| h.normal.dot(x) / h.offset)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

struct Problem<'a> {
    gauge: Gauge,
    /// Container planes with the matching support of `L`.
    walls: Vec<(HalfPlane, f64)>,
    wall_lipschitz: f64,
    grid: Option<PointGrid>,
    body: &'a ConvexBody,
}

impl<'a> Problem<'a> {
    fn new(body: &'a ConvexBody, l: &ConvexBody, points: &[Point]) -> Self {
        let gauge = Gauge::new(l);
        let walls: Vec<(HalfPlane, f64)> = body
            .unit_half_planes()
            .into_iter()
            .map(|h| {
                let s = gauge.shape.support(h.normal);
                (h, s)
            })
            .collect();
        let wall_lipschitz = walls.iter().map(|&(_, s)| 1.0 / s).fold(0.0, f64::max);
        let (lo, hi) = body.bbox();
        let grid = (!points.is_empty()).then(|| PointGrid::new(points, lo, hi, 2.0));
        Problem {
            gauge,
            walls,
            wall_lipschitz,
            grid,
            body,
        }
    }

    /// Largest `λ` such that `λ L + c` lies in the body with no point inside.
    fn eval(&self, c: Point) -> f64 {
        let mut best = self
            .walls
            .iter()
            .map(|(h, s)| -h.value(c) / s)
            .fold(f64::INFINITY, f64::min);
        if best <= 0.0 {
            return best;
        }
        if let Some(grid) = &self.grid {
            let pts = grid.points();
            let r = self.gauge.circumradius;
            grid.ring_search(c, |v| match v {
                Visit::Point(i) => {
                    best = best.min(self.gauge.eval(pts[i] - c));
                    false
                }
                Visit::Covered(d) => d >= best * r,
            });
        }
        best
    }

    /// Local linear program in `(c, λ)`: every nearby point stays behind the
    /// face of `λ L + c` it is currently behind, every wall holds, and the
    /// centre moves by at most a small box. Feasible solutions are valid
    /// placements for the points considered; far points are re-checked.
    fn polish(&self, c0: Point, lambda0: f64) -> (f64, Point) {
        if lambda0 <= 0.0 {
            return (lambda0, c0);
        }
        let hmin = self.gauge.planes.iter().map(|h| h.offset).fold(f64::INFINITY, f64::min);
        let delta = 0.05 * lambda0 * hmin;
        let lam_cap = 1.1 * lambda0;
        let mut rows: Vec<[f64; 4]> = Vec::new();
        for (h, s) in &self.walls {
            rows.push([h.normal.x, h.normal.y, *s, h.offset]);
        }
        rows.push([1.0, 0.0, 0.0, c0.x + delta]);
        rows.push([-1.0, 0.0, 0.0, -(c0.x - delta)]);
        rows.push([0.0, 1.0, 0.0, c0.y + delta]);
        rows.push([0.0, -1.0, 0.0, -(c0.y - delta)]);
        rows.push([0.0, 0.0, 1.0, lam_cap]);
        if let Some(grid) = &self.grid {
            let reach = lam_cap * self.gauge.circumradius + 2.0 * delta;
            let pts = grid.points();
            let corner = Point::new(reach, reach);
            grid.any_in_box(c0 - corner, c0 + corner, |i| {
                let p = pts[i];
                if p.dist(c0) <= reach {
                    let x = p - c0;
                    let face = self
                        .gauge
                        .planes
                        .iter()
                        .max_by(|a, b| (a.normal.dot(x) / a.offset).total_cmp(&(b.normal.dot(x) / b.offset)))
                        .expect("shape has edges");
                    rows.push([face.normal.x, face.normal.y, face.offset, face.normal.dot(p)]);
                }
                false
            });
        }
        let det3 = |a: [f64; 3], b: [f64; 3], c: [f64; 3]| {
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
        };
        let mut best = (lambda0, c0);
        let m = rows.len();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let (r1, r2, r3) = (rows[i], rows[j], rows[k]);
                    let d = det3([r1[0], r1[1], r1[2]], [r2[0], r2[1], r2[2]], [r3[0], r3[1], r3[2]]);
                    if d.abs() < 1e-14 {
                        continue;
                    }
                    let lam = det3([r1[0], r1[1], r1[3]], [r2[0], r2[1], r2[3]], [r3[0], r3[1], r3[3]]) / d;
                    if lam <= best.0 {
                        continue;
                    }
                    let x = det3([r1[3], r1[1], r1[2]], [r2[3], r2[1], r2[2]], [r3[3], r3[1], r3[2]]) / d;
                    let y = det3([r1[0], r1[3], r1[2]], [r2[0], r2[3], r2[2]], [r3[0], r3[3], r3[2]]) / d;
                    let tol = 1e-12 * (1.0 + x.abs() + y.abs() + lam.abs());
                    if rows.iter().all(|r| r[0] * x + r[1] * y + r[2] * lam <= r[3] + tol) {
                        best = (lam, Point::new(x, y));
                    }
                }
            }
        }
        let (mut lam, c) = best;
        if lam <= lambda0 {
            return (lambda0, c0);
        }
        for _ in 0..64 {
            if self.verify(lam, c) {
                return (lam, c);
            }
            lam *= 1.0 - 1e-12;
        }
        (lambda0, c0)
    }

    fn lipschitz(&self) -> f64 {
        self.gauge.lipschitz.max(self.wall_lipschitz)
    }

    /// Exact re-check of a placement: closed containment, open emptiness.
    fn verify(&self, lambda: f64, c: Point) -> bool {
        let placed = self.gauge.shape.homothet(lambda, c);
        if !self.body.contains_body(&placed) {
            return false;
        }
        let Some(grid) = &self.grid else {
            return true;
        };
        let (lo, hi) = placed.bbox();
        let pts = grid.points();
        !grid.any_in_box(lo, hi, |i| placed.contains_point(pts[i], Containment::Open))
    }
}

#[derive(PartialEq)]
struct Node {
    upper: f64,
    center: Point,
    half: f64,
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper)
    }
}

/// Largest homothet of `shape` in `body` whose open interior avoids `points`,
/// by best-first subdivision of the centre domain. The objective at a centre
/// is Lipschitz, which bounds every box from its midpoint.
pub fn max_empty_homothet(
    body: &ConvexBody,
    shape: &Shape,
    points: &[Point],
    opts: SearchOptions,
) -> (HomothetPlacement, f64, bool, u64) {
    let pb = Problem::new(body, &shape.body, points);
    let lip = pb.lipschitz() * std::f64::consts::SQRT_2;
    let (lo, hi) = body.bbox();
    let side = (hi.x - lo.x).max(hi.y - lo.y);
    let cells = ((points.len() as f64).sqrt().ceil() as usize).clamp(4, 512);
    let half = 0.5 * side / cells as f64;
    let mut heap = BinaryHeap::new();
    let mut best = (0.0f64, body.centroid());
    let mut evals = 0u64;
    let push = |c: Point, half: f64, heap: &mut BinaryHeap<Node>, best: &mut (f64, Point), evals: &mut u64| {
        let v = pb.eval(c);
        *evals += 1;
        if v > best.0 {
            *best = (v, c);
        }
        let upper = v + lip * half;
        if upper > 0.0 {
            heap.push(Node { upper, center: c, half });
        }
    };
    for j in 0..cells {
        for i in 0..cells {
            let c = Point::new(lo.x + (2 * i + 1) as f64 * half, lo.y + (2 * j + 1) as f64 * half);
            push(c, half, &mut heap, &mut best, &mut evals);
        }
    }
    let mut converged = false;
    while let Some(node) = heap.pop() {
        if node.upper <= best.0 * (1.0 + opts.rel_tol) {
            converged = true;
            break;
        }
        if evals >= opts.max_evals {
            break;
        }
        let h = 0.5 * node.half;
        for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
            push(node.center + Point::new(dx * h, dy * h), h, &mut heap, &mut best, &mut evals);
        }
    }
    if heap.is_empty() {
        converged = true;
    }
    let (mut lambda, mut c) = best;
    for _ in 0..3 {
        let (l2, c2) = pb.polish(c, lambda);
        if l2 <= lambda {
            break;
        }
        (lambda, c) = (l2, c2);
    }
    if lambda > 0.0 {
        let mut tries = 0;
        while !pb.verify(lambda, c) && tries < 64 {
            lambda *= 1.0 - 1e-12;
            tries += 1;
        }
    }
    let lambda = lambda.max(f64::MIN_POSITIVE);
    let centroid = shape.body.centroid();
    let placement = HomothetPlacement {
        scale: lambda,
        offset: c - centroid * lambda,
        shape_id: shape.id.clone(),
    };
    let area = placement.area(&shape.body);
    (placement, area, converged, evals)
}

/// Largest empty homothet of `shape` in the unit-area `body`, plus the
/// `S_H` certificate for the area `(1+3ε) log n / n`.
pub fn largest_empty_homothet(body: &ConvexBody, shape: &Shape, sample: &PointSample, epsilon: f64) -> MaxHomothet {
    let (best, area, converged, evals) = max_empty_homothet(body, shape, &sample.points, SearchOptions::default());
    let certificate = match build_homothet_net(body, shape, sample.points.len() as u64, epsilon) {
        Ok(net) => {
            let cov = net.coverage(&sample.points);
            if cov.empty == 0 {
                HomothetCertificate::Certified { upper: net.area_l }
            } else {
                HomothetCertificate::NotCertified {
                    empty_members: cov.empty,
                    reason: format!("{} of {} members are empty", cov.empty, cov.members),
                }
            }
        }
        Err(e) => HomothetCertificate::NotCertified {
            empty_members: 0,
            reason: e.to_string(),
        },
    };
    MaxHomothet {
        best,
        area,
        converged,
        evals,
        certificate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sample_gives_inscribed_shape() {
        let sq = ConvexBody::unit_square();
        let (p, a, conv, _) = max_empty_homothet(&sq, &Shape::square(), &[], SearchOptions::default());
        assert!(conv);
        assert!((a - 1.0).abs() < 1e-8, "{a}");
        assert!(p.body(&Shape::square().body).area() <= 1.0);
        let disk = Shape::disk();
        let (_, a, _, _) = max_empty_homothet(&sq, &disk, &[], SearchOptions::default());
        // The 64-gon has vertices on the x axis, so its circumradius is 1/2.
        let k = 64.0;
        let expect = 0.5 * k * 0.25 * (std::f64::consts::TAU / k).sin();
        assert!((a - expect).abs() < 1e-7 * expect, "{a} vs {expect}");
    }

    #[test]
    fn centre_point_square() {
        let sq = ConvexBody::unit_square();
        let pts = [Point::new(0.5, 0.5)];
        // Optimal centres form a segment, so the search stops on its budget.
        let (p, a, _, _) = max_empty_homothet(&sq, &Shape::square(), &pts, SearchOptions::default());
        assert!(a <= 0.25 && a > 0.25 * (1.0 - 1e-9), "{a}");
        let placed = p.body(&Shape::square().body);
        assert!(!placed.contains_point(pts[0], Containment::Open));
    }

    #[test]
    fn gauge_matches_scaling() {
        let g = Gauge::new(&ConvexBody::unit_square());
        assert!((g.eval(Point::new(0.25, 0.0)) - 0.5).abs() < 1e-15);
        assert!((g.eval(Point::new(-0.5, 0.5)) - 1.0).abs() < 1e-15);
    }
}
