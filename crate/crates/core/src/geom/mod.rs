//! Planar convex geometry: bodies, oriented rectangles, inner offsets,
//! inscribed/circumscribed rectangle pairs and equal-area partitions.

mod affine;
mod body;
mod lassak;
mod offset;
mod partition;
mod point;
mod rect;

pub use affine::AffineMap;
pub use body::{normalize_to_unit_area, Containment, ConvexBody, HalfPlane};
pub(crate) use body::clip_polygon;
pub(crate) use partition::best_grid;
pub use lassak::{lassak_rectangles, pair_for_direction, LassakPair, MAX_RATIO};
pub use offset::{inner_offset, solve_inner_offset};
pub use partition::{
    equal_area_partition, partition_threshold, partition_with_cells, strip_partition, Region,
    RegionKind,
};
pub use point::{orient, Point};
pub use rect::{body_contains_rect, normalize_inclination, rect_contains_rect, OrientedRect};

use thiserror::Error;

/// Default geometric tolerance for non-predicate comparisons.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("a convex body needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} is not finite")]
    NonFinite(usize),
    #[error("vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("vertex chain is not strictly convex counter-clockwise at vertex {0}")]
    NotStrictlyConvex(usize),
    #[error("invalid rectangle: {0}")]
    InvalidRect(&'static str),
    #[error("target area {target} outside (0, {area})")]
    InvalidTarget { target: f64, area: f64 },
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("{m} cells are too few for the grid construction (threshold {m0:?})")]
    TooFewCells { m: usize, m0: Option<usize> },
    #[error("invalid partition: {0}")]
    InvalidPartition(&'static str),
}
