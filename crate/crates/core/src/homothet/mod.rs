//! Largest empty homothets of a shape `L`: the lattice net `S_H` that
//! certifies an upper bound, a branch-and-bound search for the lower bound,
//! and the equal-area partition whose empty cells give the matching lower
//! bound in probability.

mod disk;
mod lower;
mod net;
mod search;

pub use disk::{largest_empty_disk_oracle, DiskHole, DISK_ORACLE_MAX_POINTS};
pub use lower::{lower_bound_partition, LowerBoundPartition};
pub use net::{build_homothet_net, verify_translate_cover, CoverReport, HomothetNet, NetCoverage, NetRow};
pub use search::{largest_empty_homothet, max_empty_homothet, HomothetCertificate, MaxHomothet, SearchOptions};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{ConvexBody, GeomError, Point};
use crate::occupancy::OccupancyError;
use crate::sampling::body_id;

/// A named shape `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shape {
    pub id: String,
    pub body: ConvexBody,
}

impl Shape {
    pub fn new(id: impl Into<String>, body: ConvexBody) -> Self {
        Shape { id: id.into(), body }
    }

    /// Shape named after the hash of its vertices.
    pub fn from_body(body: ConvexBody) -> Self {
        Shape {
            id: body_id(&body),
            body,
        }
    }

    pub fn square() -> Self {
        Shape::new("square", ConvexBody::unit_square())
    }

    /// Regular 64-gon standing in for the disk.
    pub fn disk() -> Self {
        Shape::new("disk64", ConvexBody::disk(64))
    }

    /// Axis rectangle with side ratio `aspect : 1`.
    pub fn rect(aspect: f64) -> Self {
        Shape::new(
            format!("rect{aspect}x1"),
            ConvexBody::axis_rect(Point::default(), Point::new(aspect, 1.0)),
        )
    }
}

/// `scale · L + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomothetPlacement {
    pub scale: f64,
    pub offset: Point,
    pub shape_id: String,
}

impl HomothetPlacement {
    pub fn body(&self, shape: &ConvexBody) -> ConvexBody {
        shape.homothet(self.scale, self.offset)
    }

    pub fn area(&self, shape: &ConvexBody) -> f64 {
        self.scale * self.scale * shape.area()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomothetError {
    #[error("epsilon must lie in (0, 0.1], got {0}")]
    InvalidEpsilon(f64),
    #[error("n = {0} is below the supported minimum 16")]
    TooFewPoints(u64),
    #[error("body area is {0}, expected 1")]
    NotUnitArea(f64),
    #[error("target area {0} does not fit in the body")]
    TargetTooLarge(f64),
    #[error("offset distance {omega} is below the lower bound {bound}")]
    ShapeTooEccentric { omega: f64, bound: f64 },
    #[error("net has {count} members, above the packing bound {bound}")]
    NetTooLarge { count: u64, bound: f64 },
    #[error("{failures} of {trials} translates contain no net member")]
    CoverageViolation { failures: usize, trials: usize },
    #[error("{0} points exceed the oracle limit")]
    TooManyPoints(usize),
    #[error(transparent)]
    Occupancy(#[from] OccupancyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// `log n / n`.
#[inline]
pub(crate) fn log_ratio(n: u64) -> f64 {
    (n as f64).ln() / n as f64
}
