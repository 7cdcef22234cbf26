use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{orient, ConvexBody, GeomError, Point};

#[derive(Serialize, Deserialize)]
struct RectRepr {
    center: Point,
    w: f64,
    h: f64,
    theta: f64,
}

/// Rectangle given by centre, short side `width`, long side `height`, and the
/// inclination of its minor axis in `[0, π)`.
///
/// The minor axis runs through the midpoints of the long sides, so it is
/// parallel to the short side: `u = (cos θ, sin θ)` spans the width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RectRepr", into = "RectRepr")]
pub struct OrientedRect {
    center: Point,
    width: f64,
    height: f64,
    inclination: f64,
}

impl TryFrom<RectRepr> for OrientedRect {
    type Error = GeomError;
    fn try_from(r: RectRepr) -> Result<Self, GeomError> {
        OrientedRect::new(r.center, r.w, r.h, r.theta)
    }
}

impl From<OrientedRect> for RectRepr {
    fn from(r: OrientedRect) -> Self {
        RectRepr {
            center: r.center,
            w: r.width,
            h: r.height,
            theta: r.inclination,
        }
    }
}

/// Reduce an angle into `[0, π)`.
pub fn normalize_inclination(theta: f64) -> f64 {
    let t = theta.rem_euclid(PI);
    if t >= PI {
        0.0
    } else {
        t
    }
}

impl OrientedRect {
    /// `side_u` is measured along direction `theta`, `side_v` perpendicular to
    /// it. Sides are swapped (and the angle turned a quarter) so that the
    /// stored width is the short side.
    pub fn new(center: Point, side_u: f64, side_v: f64, theta: f64) -> Result<Self, GeomError> {
        if !(center.is_finite() && side_u.is_finite() && side_v.is_finite() && theta.is_finite()) {
            return Err(GeomError::InvalidRect("non-finite field"));
        }
        if side_u <= 0.0 || side_v <= 0.0 {
            return Err(GeomError::InvalidRect("side lengths must be positive"));
        }
        let (width, height, theta) = if side_u <= side_v {
            (side_u, side_v, theta)
        } else {
            (side_v, side_u, theta + PI / 2.0)
        };
        Ok(Self {
            center,
            width,
            height,
            inclination: normalize_inclination(theta),
        })
    }

    /// Axis-parallel rectangle `[lo.x, hi.x] × [lo.y, hi.y]`.
    pub fn axis(lo: Point, hi: Point) -> Result<Self, GeomError> {
        Self::new(
            Point::new(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)),
            hi.x - lo.x,
            hi.y - lo.y,
            0.0,
        )
    }

    #[inline]
    pub fn center(&self) -> Point {
        self.center
    }
    #[inline]
    pub fn width(&self) -> f64 {
        self.width
    }
    #[inline]
    pub fn height(&self) -> f64 {
        self.height
    }
    #[inline]
    pub fn inclination(&self) -> f64 {
        self.inclination
    }
    #[inline]
    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Unit vectors along the short side and the long side.
    #[inline]
    pub fn axes(&self) -> (Point, Point) {
        let u = Point::from_angle(self.inclination);
        (u, u.perp())
    }

    /// Counter-clockwise corners.
    pub fn corners(&self) -> [Point; 4] {
        let (u, v) = self.axes();
        let du = u * (0.5 * self.width);
        let dv = v * (0.5 * self.height);
        let c = self.center;
        [c - du - dv, c + du - dv, c + du + dv, c - du + dv]
    }

    /// Is the rectangle axis-parallel (inclination 0 or π/2)?
    pub fn is_axis_parallel(&self) -> bool {
        self.inclination == 0.0 || self.inclination == PI / 2.0
    }

    /// Axis-parallel bounds, for axis-parallel rectangles.
    pub fn axis_bounds(&self) -> (Point, Point) {
        let (hx, hy) = if self.inclination == 0.0 {
            (0.5 * self.width, 0.5 * self.height)
        } else {
            (0.5 * self.height, 0.5 * self.width)
        };
        (
            Point::new(self.center.x - hx, self.center.y - hy),
            Point::new(self.center.x + hx, self.center.y + hy),
        )
    }

    pub fn to_body(&self) -> ConvexBody {
        ConvexBody::from_ccw_cleaned(self.corners().to_vec()).expect("rectangle is convex")
    }

    /// Exact closed containment of a point.
    pub fn contains_point_closed(&self, p: Point) -> bool {
        let c = self.corners();
        (0..4).all(|i| orient(c[i], c[(i + 1) % 4], p) >= 0.0)
    }

    /// Exact open containment of a point.
    pub fn contains_point_open(&self, p: Point) -> bool {
        let c = self.corners();
        (0..4).all(|i| orient(c[i], c[(i + 1) % 4], p) > 0.0)
    }

    /// Same rectangle scaled about its centre.
    pub fn scaled(&self, s: f64) -> OrientedRect {
        OrientedRect {
            width: self.width * s,
            height: self.height * s,
            ..*self
        }
    }
}

/// Closed containment of `inner` in `outer` (corner test; sufficient for convex outer).
pub fn rect_contains_rect(outer: &OrientedRect, inner: &OrientedRect) -> bool {
    inner.corners().iter().all(|&p| outer.contains_point_closed(p))
}

/// Closed containment of `r` in a convex body.
pub fn body_contains_rect(body: &ConvexBody, r: &OrientedRect) -> bool {
    body.contains_polygon(&r.corners())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_reconstruction() {
        let r = OrientedRect::new(Point::new(0.3, -0.2), 0.7, 0.2, 1.1).unwrap();
        assert_eq!(r.width(), 0.2);
        let c = r.corners();
        let w = c[0].dist(c[1]);
        let h = c[1].dist(c[2]);
        assert!((w - r.width()).abs() < 1e-9);
        assert!((h - r.height()).abs() < 1e-9);
        assert!((0.0..PI).contains(&r.inclination()));
        let shoelace = ConvexBody::new(c.to_vec()).unwrap().area();
        assert!((shoelace - r.area()).abs() <= 1e-12 * r.area());
    }

    #[test]
    fn containment_examples() {
        let sq = ConvexBody::unit_square();
        let r = OrientedRect::new(Point::new(0.5, 0.5), 0.2, 0.4, 0.0).unwrap();
        assert!(body_contains_rect(&sq, &r));
        let long = OrientedRect::new(Point::new(0.5, 0.5), 0.01, 1.5, PI / 4.0).unwrap();
        assert!(!body_contains_rect(&sq, &long));
        assert!(rect_contains_rect(&r, &r));
        assert!(!rect_contains_rect(&r, &long));
    }

    #[test]
    fn json_literal() {
        let r: OrientedRect =
            serde_json::from_str(r#"{"center":[0.5,0.5],"w":0.2,"h":0.4,"theta":0.0}"#).unwrap();
        assert_eq!(r.height(), 0.4);
        let back: OrientedRect = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<OrientedRect>(
            r#"{"center":[0.5,0.5],"w":-1,"h":0.4,"theta":0.0}"#
        )
        .is_err());
    }

    #[test]
    fn inclination_is_normalised() {
        let r = OrientedRect::new(Point::default(), 1.0, 2.0, -0.25).unwrap();
        assert!((r.inclination() - (PI - 0.25)).abs() < 1e-15);
        let s = OrientedRect::new(Point::default(), 2.0, 1.0, 0.0).unwrap();
        assert_eq!(s.width(), 1.0);
        assert!((s.inclination() - PI / 2.0).abs() < 1e-15);
    }
}
