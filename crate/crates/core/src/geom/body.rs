use serde::{Deserialize, Serialize};

use super::{orient, AffineMap, GeomError, Point};

/// Whether the boundary counts as inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Open,
    Closed,
}

/// The closed half-plane `normal · p <= offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub normal: Point,
    pub offset: f64,
}

impl HalfPlane {
    #[inline]
    pub fn value(&self, p: Point) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

#[derive(Deserialize)]
struct BodyRepr {
    vertices: Vec<Point>,
}

/// A strictly convex polygon with counter-clockwise vertices.
///
/// Used both for the container `K` and for hole shapes `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodyRepr")]
pub struct ConvexBody {
    vertices: Vec<Point>,
}

impl TryFrom<BodyRepr> for ConvexBody {
    type Error = GeomError;
    fn try_from(r: BodyRepr) -> Result<Self, Self::Error> {
        ConvexBody::new(r.vertices)
    }
}

impl ConvexBody {
    /// Validates finiteness, distinctness and strict counter-clockwise convexity.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices(n));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite(i));
        }
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i] == vertices[j] {
                    return Err(GeomError::RepeatedVertex(i, j));
                }
            }
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if orient(a, b, c) <= 0.0 {
                return Err(GeomError::NotStrictlyConvex((i + 1) % n));
            }
        }
        // Consecutive left turns can still wind around more than once.
        let mut turning = 0.0;
        for i in 0..n {
            let e0 = vertices[(i + 1) % n] - vertices[i];
            let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            turning += e0.cross(e1).atan2(e0.dot(e1));
        }
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GeomError::NotStrictlyConvex(0));
        }
        Ok(Self { vertices })
    }

    /// Builds a body from a counter-clockwise vertex chain produced by floating
    /// point constructions, dropping duplicate and non-strictly-convex vertices.
    /// Returns `None` when fewer than three vertices survive.
    pub fn from_ccw_cleaned(mut vs: Vec<Point>) -> Option<Self> {
        let scale = vs
            .iter()
            .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
            .max(f64::MIN_POSITIVE);
        let eps = scale * 1e-14;
        loop {
            let n = vs.len();
            if n < 3 {
                return None;
            }
            let mut drop = None;
            for i in 0..n {
                let prev = vs[(i + n - 1) % n];
                let cur = vs[i];
                let next = vs[(i + 1) % n];
                if cur.dist(next) <= eps || orient(prev, cur, next) <= 0.0 {
                    drop = Some(i);
                    break;
                }
            }
            match drop {
                Some(i) => {
                    vs.remove(i);
                }
                None => break,
            }
        }
        ConvexBody::new(vs).ok()
    }

    /// Convex hull (Andrew's monotone chain) of the given points.
    pub fn hull(points: &[Point]) -> Result<Self, GeomError> {
        let mut pts: Vec<Point> = points.to_vec();
        if let Some(i) = pts.iter().position(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite(i));
        }
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup();
        if pts.len() < 3 {
            return Err(GeomError::TooFewVertices(pts.len()));
        }
        let mut lower: Vec<Point> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        ConvexBody::new(lower)
    }

    pub fn unit_square() -> Self {
        Self::axis_rect(Point::new(0.0, 0.0), Point::new(1.0, 1.0))
    }

    /// Axis-parallel rectangle `[lo.x, hi.x] × [lo.y, hi.y]`.
    pub fn axis_rect(lo: Point, hi: Point) -> Self {
        assert!(lo.x < hi.x && lo.y < hi.y, "degenerate rectangle");
        Self {
            vertices: vec![lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)],
        }
    }

    /// Regular `k`-gon with the given circumradius, first vertex at angle `phase`.
    pub fn regular_polygon(k: usize, circumradius: f64, center: Point, phase: f64) -> Self {
        assert!(k >= 3);
        let vs = (0..k)
            .map(|i| {
                let a = phase + std::f64::consts::TAU * i as f64 / k as f64;
                center + Point::from_angle(a) * circumradius
            })
            .collect();
        Self::new(vs).expect("regular polygon is convex")
    }

    /// Polygonal disk approximation: regular `k`-gon of unit area centred at the origin.
    pub fn disk(k: usize) -> Self {
        let area_unit = 0.5 * k as f64 * (std::f64::consts::TAU / k as f64).sin();
        Self::regular_polygon(k, 1.0 / area_unit.sqrt(), Point::default(), 0.0)
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        let o = self.vertices[0];
        let mut s = 0.0;
        for (a, b) in self.edges() {
            s += (a - o).cross(b - o);
        }
        0.5 * s
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn centroid(&self) -> Point {
        let o = self.vertices[0];
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a2 = 0.0;
        for (a, b) in self.edges() {
            let (a, b) = (a - o, b - o);
            let c = a.cross(b);
            a2 += c;
            cx += (a.x + b.x) * c;
            cy += (a.y + b.y) * c;
        }
        o + Point::new(cx / (3.0 * a2), cy / (3.0 * a2))
    }

    /// Largest vertex-to-vertex distance.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(v[i].dist(v[j]));
            }
        }
        best
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    /// `max_{v in body} dir · v`.
    pub fn support(&self, dir: Point) -> f64 {
        self.vertices
            .iter()
            .map(|v| dir.dot(*v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Exact half-plane test against every edge.
    pub fn contains_point(&self, p: Point, mode: Containment) -> bool {
        match mode {
            Containment::Open => self.edges().all(|(a, b)| orient(a, b, p) > 0.0),
            Containment::Closed => self.edges().all(|(a, b)| orient(a, b, p) >= 0.0),
        }
    }

    /// Closed containment of a convex polygon given by its vertices.
    pub fn contains_polygon(&self, vertices: &[Point]) -> bool {
        vertices
            .iter()
            .all(|&p| self.contains_point(p, Containment::Closed))
    }

    pub fn contains_body(&self, other: &ConvexBody) -> bool {
        self.contains_polygon(&other.vertices)
    }

    /// Edge half-planes with outward (unnormalised) normals.
    pub fn half_planes(&self) -> Vec<HalfPlane> {
        self.edges()
            .map(|(a, b)| {
                let d = b - a;
                let normal = Point::new(d.y, -d.x);
                HalfPlane {
                    normal,
                    offset: normal.dot(a),
                }
            })
            .collect()
    }

    /// Edge half-planes with unit outward normals.
    pub fn unit_half_planes(&self) -> Vec<HalfPlane> {
        self.half_planes()
            .into_iter()
            .map(|h| {
                let l = h.normal.norm();
                HalfPlane {
                    normal: h.normal * (1.0 / l),
                    offset: h.offset / l,
                }
            })
            .collect()
    }

    /// Intersection with a half-plane; `None` when nothing with interior remains.
    pub fn clip(&self, h: &HalfPlane) -> Option<ConvexBody> {
        clip_polygon(&self.vertices, h).and_then(ConvexBody::from_ccw_cleaned)
    }

    /// Intersection with several half-planes.
    pub fn clip_all(&self, hs: &[HalfPlane]) -> Option<ConvexBody> {
        let mut vs = self.vertices.clone();
        for h in hs {
            vs = clip_polygon(&vs, h)?;
        }
        ConvexBody::from_ccw_cleaned(vs)
    }

    /// Image under an affine map with positive determinant.
    pub fn transform(&self, m: &AffineMap) -> Option<ConvexBody> {
        if m.det() <= 0.0 {
            return None;
        }
        ConvexBody::from_ccw_cleaned(self.vertices.iter().map(|&p| m.apply(p)).collect())
    }

    pub fn translate(&self, v: Point) -> ConvexBody {
        ConvexBody {
            vertices: self.vertices.iter().map(|&p| p + v).collect(),
        }
    }

    /// `s · body + offset`.
    pub fn homothet(&self, s: f64, offset: Point) -> ConvexBody {
        assert!(s > 0.0);
        ConvexBody {
            vertices: self.vertices.iter().map(|&p| p * s + offset).collect(),
        }
    }
}

/// Sutherland–Hodgman step of a convex chain against `h`. Returns `None` when
/// fewer than three vertices remain.
pub(crate) fn clip_polygon(vs: &[Point], h: &HalfPlane) -> Option<Vec<Point>> {
    let n = vs.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let a = vs[i];
        let b = vs[(i + 1) % n];
        let fa = h.value(a);
        let fb = h.value(b);
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            let t = fa / (fa - fb);
            out.push(a + (b - a) * t);
        }
    }
    if out.len() < 3 {
        None
    } else {
        Some(out)
    }
}

/// Uniform rescaling about the origin to unit area.
pub fn normalize_to_unit_area(body: &ConvexBody) -> (ConvexBody, AffineMap) {
    let a = body.area();
    if (a - 1.0).abs() <= 1e-15 {
        return (body.clone(), AffineMap::IDENTITY);
    }
    let s = 1.0 / a.sqrt();
    (body.homothet(s, Point::default()), AffineMap::scaling(s))
}
