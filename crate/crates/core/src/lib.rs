//! Large empty convex holes in uniformly random planar point sets.

pub mod geom;
pub mod harness;
pub mod holes;
pub mod homothet;
pub mod index;
pub mod occupancy;
pub mod rect_nets;
pub mod sampling;

pub use geom::{Containment, ConvexBody, OrientedRect, Point};
pub use sampling::{PointSample, SeedSpec};
