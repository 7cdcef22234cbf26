//! Rectangle nets: a finite family of rectangles of area `(2+ε) log n / n`
//! such that every rectangle of area `(2+4ε) log n / n` inside the body
//! contains a member. If every member holds a sample point, no empty
//! rectangle of the larger area exists.

mod certify;
mod maxrect;
mod net;
mod params;
mod quantize;

pub use certify::{net_max_empty_rect, CertifyOptions, NetMaxEmptyRect, RectCertificate};
pub use maxrect::{max_empty_axis_rect, max_empty_axis_rect_oracle, ORACLE_MAX_POINTS};
pub use net::{
    build_rect_net, read_jsonl, verify_net_records, write_jsonl, LevelRow, MaterializedNet, NetRecord, NetRect,
    RectNet, VerifyReport,
};
pub use params::{make_net_params, LevelDims, NetParams, EPSILON_CAP, MIN_N};
pub use quantize::{net_contains_witness, quantize_rectangle, Quantized};

pub(crate) use net::x_interval;

use thiserror::Error;

use crate::geom::GeomError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetError {
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("epsilon {0} exceeds the supported maximum 0.1")]
    EpsilonTooLarge(f64),
    #[error("n = {0} is below the supported minimum 16")]
    TooFewPoints(u64),
    #[error("body area is {0}, expected 1")]
    NotUnitArea(f64),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("no net rectangle found inside the query rectangle")]
    WitnessNotFound,
    #[error("net has {count} rectangles, above the explicit bound {bound}")]
    NetTooLarge { count: u64, bound: f64 },
    #[error("net materialization stopped at the limit of {limit} rectangles")]
    MaterializationLimit { limit: u64 },
    #[error("container must be axis-parallel")]
    NotAxisParallel,
    #[error("point {0} lies outside the container")]
    PointOutsideContainer(usize),
    #[error("{0} points exceed the oracle limit")]
    TooManyPoints(usize),
    #[error("malformed net record: {0}")]
    Malformed(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}
