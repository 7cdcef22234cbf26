//! Empty convex polygons with vertices in the sample, the strip construction
//! of an empty quadrilateral, and bounds on the largest empty convex set.

mod bounds;
mod polymax;
mod strip;

pub use bounds::{convex_hole_bounds, BoundsOptions, HoleBounds};
pub use polymax::{
    polymax, polymax_oracle, PolyMax, POLYMAX_EXACT_MAX_POINTS, POLYMAX_ORACLE_MAX_POINTS, POLYMAX_WINDOW,
};
pub use strip::{strip_quadrilateral, strip_count, StripDecomposition, StripDiagnostics, StripEvent, StripQuad};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{orient, Point};

/// Sample points in counter-clockwise convex position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexChain {
    pub vertices: Vec<Point>,
    /// The open hull was checked against the whole sample.
    pub empty_verified: bool,
}

impl ConvexChain {
    pub fn new(vertices: Vec<Point>, empty_verified: bool) -> Self {
        ConvexChain {
            vertices,
            empty_verified,
        }
    }

    pub fn area(&self) -> f64 {
        if self.vertices.len() < 3 {
            0.0
        } else {
            polygon_area(&self.vertices)
        }
    }

    /// Strictly convex, counter-clockwise, at least three vertices.
    pub fn is_convex(&self) -> bool {
        let v = &self.vertices;
        let k = v.len();
        k >= 3 && (0..k).all(|i| orient(v[i], v[(i + 1) % k], v[(i + 2) % k]) > 0.0)
    }

    /// Some point of `points` lies in the open interior.
    pub fn open_interior_hits(&self, points: &[Point]) -> usize {
        let v = &self.vertices;
        let k = v.len();
        if k < 3 {
            return 0;
        }
        points
            .iter()
            .filter(|&&q| (0..k).all(|i| orient(v[i], v[(i + 1) % k], q) > 0.0))
            .count()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HolesError {
    #[error("{0} points, need at least 3")]
    TooFewPoints(usize),
    #[error("{0} points exceed the oracle limit")]
    TooManyPoints(usize),
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("delta must lie in (0, 1/2), got {0}")]
    InvalidDelta(f64),
    #[error("n = {0} is too small for the strip construction")]
    SampleTooSmall(usize),
}

/// Area of a counter-clockwise convex polygon, summed as a fan from its
/// lowest vertex in angular order.
pub(crate) fn polygon_area(v: &[Point]) -> f64 {
    let k = v.len();
    let s = (0..k)
        .min_by(|&a, &b| v[a].y.total_cmp(&v[b].y).then(v[a].x.total_cmp(&v[b].x)))
        .unwrap_or(0);
    let mut area = 0.0;
    for i in 1..k.saturating_sub(1) {
        area += 0.5 * orient(v[s], v[(s + i) % k], v[(s + i + 1) % k]);
    }
    area
}
