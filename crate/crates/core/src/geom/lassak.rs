//! Inscribed / circumscribed rectangle pairs with homothety ratio at most 2.
//!
//! For a direction `φ` the circumscribed candidate is the bounding box of the
//! body in the frame rotated by `φ`; the inscribed candidate is the largest
//! translate-and-scale of that box fitting inside the body. The latter is a
//! small linear program in `(x, y, μ)`, solved here by bisection on `μ` with a
//! half-plane feasibility test. Edge directions are tried first (they contain
//! the minimal-area bounding box), then a uniform sweep with local refinement.

use super::body::clip_polygon;
use super::{ConvexBody, GeomError, HalfPlane, OrientedRect, Point};

/// Largest admissible homothety ratio.
pub const MAX_RATIO: f64 = 2.0 + 1e-6;
const SWEEP_DIRECTIONS: usize = 720;
const AREA_SLACK: f64 = 1e-9;

/// Inscribed rectangle `S`, circumscribed homothet `R`, and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LassakPair {
    pub inscribed: OrientedRect,
    pub circumscribed: OrientedRect,
    pub ratio: f64,
    pub direction: f64,
}

impl LassakPair {
    /// All three sandwich inequalities, with a tiny relative slack for rounding.
    pub fn satisfies_bounds(&self, body_area: f64) -> bool {
        self.ratio <= MAX_RATIO
            && 0.5 * self.circumscribed.area() <= body_area * (1.0 + AREA_SLACK)
            && body_area <= 2.0 * self.inscribed.area() * (1.0 + AREA_SLACK)
    }
}

/// Candidate pair for the frame whose x-axis points along `direction`.
pub fn pair_for_direction(body: &ConvexBody, direction: f64) -> Option<LassakPair> {
    let rot: Vec<Point> = body
        .vertices()
        .iter()
        .map(|p| p.rotate(-direction))
        .collect();
    let frame = ConvexBody::from_ccw_cleaned(rot)?;
    let (lo, hi) = frame.bbox();
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let planes = frame.half_planes();

    // Feasible lower-left corners of a μ-scaled box.
    let corner_region = |mu: f64| -> Option<Vec<Point>> {
        let mut poly = vec![lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)];
        for hp in &planes {
            let shift = mu * (hp.normal.x.max(0.0) * w + hp.normal.y.max(0.0) * h);
            let c = HalfPlane {
                normal: hp.normal,
                offset: hp.offset - shift,
            };
            poly = clip_polygon(&poly, &c)?;
        }
        Some(poly)
    };

    let (mut mu_lo, mut mu_hi) = (0.0f64, 1.0f64);
    let mut region = None;
    for _ in 0..64 {
        let mid = 0.5 * (mu_lo + mu_hi);
        match corner_region(mid) {
            Some(r) => {
                mu_lo = mid;
                region = Some(r);
            }
            None => mu_hi = mid,
        }
        if mu_hi - mu_lo <= 1e-13 {
            break;
        }
    }
    let region = region?;
    let n = region.len() as f64;
    let corner = region.iter().fold(Point::default(), |a, &p| a + p) * (1.0 / n);

    let mut mu = mu_lo;
    let mut shrink = 1e-12;
    let inscribed = loop {
        let c = corner + Point::new(0.5 * mu * w, 0.5 * mu * h);
        let r = OrientedRect::new(c.rotate(direction), mu * w, mu * h, direction).ok()?;
        if super::body_contains_rect(body, &r) {
            break r;
        }
        mu *= 1.0 - shrink;
        shrink *= 2.0;
        if mu < 0.5 * mu_lo {
            return None;
        }
    };

    let center = Point::new(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)).rotate(direction);
    let mut grow = 1.0;
    let circumscribed = loop {
        let r = OrientedRect::new(center, w * grow, h * grow, direction).ok()?;
        if body.vertices().iter().all(|&p| r.contains_point_closed(p)) {
            break r;
        }
        grow *= 1.0 + 1e-13;
        if grow > 1.0 + 1e-9 {
            return None;
        }
    };
    Some(LassakPair {
        inscribed,
        circumscribed,
        ratio: circumscribed.area().sqrt() / inscribed.area().sqrt(),
        direction,
    })
}

/// Returns the first direction whose pair satisfies the ratio-2 sandwich.
pub fn lassak_rectangles(body: &ConvexBody) -> Result<LassakPair, GeomError> {
    let area = body.area();
    let mut best: Option<LassakPair> = None;
    let consider = |dir: f64, best: &mut Option<LassakPair>| -> Option<LassakPair> {
        let p = pair_for_direction(body, dir)?;
        if p.satisfies_bounds(area) {
            return Some(p);
        }
        if best.is_none_or(|b| p.ratio < b.ratio) {
            *best = Some(p);
        }
        None
    };

    for (a, b) in body.edges() {
        let d = b - a;
        if let Some(p) = consider(d.y.atan2(d.x), &mut best) {
            return Ok(p);
        }
    }
    let step = std::f64::consts::PI / SWEEP_DIRECTIONS as f64;
    for k in 0..SWEEP_DIRECTIONS {
        if let Some(p) = consider(k as f64 * step, &mut best) {
            return Ok(p);
        }
    }
    // Local refinement around the best ratio seen so far.
    if let Some(b) = best {
        let mut span = step;
        let mut centre = b.direction;
        for _ in 0..20 {
            for k in -8..=8 {
                let dir = centre + span * k as f64 / 8.0;
                if let Some(p) = consider(dir, &mut best) {
                    return Ok(p);
                }
            }
            centre = best.map_or(centre, |b| b.direction);
            span *= 0.25;
        }
    }
    Err(GeomError::NoConvergence("lassak direction search"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_is_its_own_pair() {
        let sq = ConvexBody::unit_square();
        let p = lassak_rectangles(&sq).unwrap();
        assert!((p.ratio - 1.0).abs() < 1e-9);
        assert!((p.inscribed.area() - 1.0).abs() < 1e-9);
        assert!((p.circumscribed.area() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn axis_rectangle_2x1() {
        let r = ConvexBody::axis_rect(Point::new(0.0, 0.0), Point::new(2.0, 1.0));
        let p = lassak_rectangles(&r).unwrap();
        assert!((p.ratio - 1.0).abs() < 1e-9);
        assert!((p.inscribed.area() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn right_triangle() {
        let t = ConvexBody::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        let p = lassak_rectangles(&t).unwrap();
        assert!((p.inscribed.area() - 0.25).abs() < 1e-9);
        assert!((p.circumscribed.area() - 1.0).abs() < 1e-9);
        assert!(p.ratio <= MAX_RATIO);
    }
}
