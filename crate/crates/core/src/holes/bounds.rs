use serde::{Deserialize, Serialize};

use super::polymax::polymax;
use crate::geom::{ConvexBody, Point};
use crate::homothet::{max_empty_homothet, SearchOptions, Shape};
use crate::rect_nets::{make_net_params, net_max_empty_rect, CertifyOptions, RectCertificate, RectNet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsOptions {
    pub shapes: Vec<Shape>,
    pub search: SearchOptions,
    pub certify: CertifyOptions,
    /// Include the largest empty polygon on sample vertices.
    pub polymax: bool,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        BoundsOptions {
            shapes: vec![Shape::square(), Shape::disk(), Shape::rect(2.0)],
            search: SearchOptions::default(),
            certify: CertifyOptions::default(),
            polymax: true,
        }
    }
}

/// Bracket on the area of the largest empty convex set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleBounds {
    pub lower: f64,
    /// Shape id, `polymax`, or `none`.
    pub lower_source: String,
    /// `(shape id, area)` for every shape searched.
    pub homothets: Vec<(String, f64)>,
    pub polymax: Option<f64>,
    /// Twice the certified rectangle bound, or `+∞`.
    pub upper: f64,
    pub certified: bool,
    /// Why the upper bound is missing, when it is.
    pub note: Option<String>,
}

/// Lower bound from empty homothets and empty polygons on sample vertices;
/// upper bound from the rectangle net, since every convex set holds a
/// rectangle of half its area.
pub fn convex_hole_bounds(body: &ConvexBody, points: &[Point], epsilon: f64, opts: &BoundsOptions) -> HoleBounds {
    let mut lower = 0.0;
    let mut lower_source = String::from("none");
    let mut homothets = Vec::with_capacity(opts.shapes.len());
    for shape in &opts.shapes {
        let (_, area, _, _) = max_empty_homothet(body, shape, points, opts.search);
        homothets.push((shape.id.clone(), area));
        if area > lower {
            lower = area;
            lower_source = shape.id.clone();
        }
    }
    let poly = if opts.polymax && points.len() >= 3 {
        polymax(points).ok().map(|r| r.area)
    } else {
        None
    };
    if let Some(a) = poly {
        if a > lower {
            lower = a;
            lower_source = String::from("polymax");
        }
    }
    let (mut upper, mut note) = match make_net_params(points.len() as u64, epsilon, body) {
        Ok(params) => {
            let net = RectNet::new(body.clone(), params);
            match net_max_empty_rect(&net, points, opts.certify) {
                Ok(r) => match r.certificate {
                    RectCertificate::Certified { upper } => (2.0 * upper, None),
                    RectCertificate::NotCertified { witness } => (
                        f64::INFINITY,
                        Some(format!(
                            "empty net member at level {} rotation {}",
                            witness.m, witness.t
                        )),
                    ),
                    RectCertificate::Undetermined { scanned, total } => (
                        f64::INFINITY,
                        Some(format!("scan stopped after {scanned} of {total} rotations")),
                    ),
                },
                Err(e) => (f64::INFINITY, Some(e.to_string())),
            }
        }
        Err(e) => (f64::INFINITY, Some(e.to_string())),
    };
    if lower > upper {
        note = Some(format!("certified upper {upper} below lower {lower}"));
        upper = f64::INFINITY;
    }
    HoleBounds {
        lower,
        lower_source,
        homothets,
        polymax: poly,
        certified: upper.is_finite(),
        upper,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sample_is_uncertified() {
        let sq = ConvexBody::unit_square();
        let b = convex_hole_bounds(&sq, &[], 0.1, &BoundsOptions::default());
        assert!(!b.certified);
        assert_eq!(b.upper, f64::INFINITY);
        assert!((b.lower - 1.0).abs() < 1e-8);
        assert_eq!(b.lower_source, "square");
        assert_eq!(b.polymax, None);
    }

    #[test]
    fn polymax_can_win() {
        let sq = ConvexBody::unit_square();
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        let opts = BoundsOptions {
            shapes: vec![Shape::disk()],
            ..BoundsOptions::default()
        };
        let b = convex_hole_bounds(&sq, &pts, 0.1, &opts);
        assert_eq!(b.lower, 1.0);
        assert_eq!(b.lower_source, "polymax");
        assert!(!b.certified);
    }
}
