//! Seeded Monte Carlo experiments over sample sizes, CSV reports and
//! scaling fits of hole statistics normalised by `log n / n`.

mod report;
mod run;

pub use report::{fit_scaling, read_csv, write_csv, ScalingFit, StatRow, StatSummary, StatTrend};
pub use run::{run_experiment, trial_seed};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{normalize_to_unit_area, ConvexBody, GeomError, Point};
use crate::homothet::Shape;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodySpec {
    UnitSquare,
    /// Regular `k`-gon of area 1 centred at the origin.
    RegularPolygon { k: usize },
    /// Convex polygon, rescaled to area 1.
    Polygon { vertices: Vec<Point> },
}

impl BodySpec {
    pub fn build(&self) -> Result<ConvexBody, HarnessError> {
        match self {
            BodySpec::UnitSquare => Ok(ConvexBody::unit_square()),
            BodySpec::RegularPolygon { k } if *k >= 3 => Ok(ConvexBody::disk(*k)),
            BodySpec::RegularPolygon { k } => Err(HarnessError::InvalidConfig(format!("regular polygon with {k} sides"))),
            BodySpec::Polygon { vertices } => Ok(normalize_to_unit_area(&ConvexBody::new(vertices.clone())?).0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeSpec {
    Square,
    /// Regular 64-gon.
    Disk,
    Rect { aspect: f64 },
    Polygon { vertices: Vec<Point> },
}

impl ShapeSpec {
    pub fn build(&self) -> Result<Shape, HarnessError> {
        match self {
            ShapeSpec::Square => Ok(Shape::square()),
            ShapeSpec::Disk => Ok(Shape::disk()),
            ShapeSpec::Rect { aspect } if aspect.is_finite() && *aspect > 0.0 => Ok(Shape::rect(*aspect)),
            ShapeSpec::Rect { aspect } => Err(HarnessError::InvalidConfig(format!("rectangle aspect {aspect}"))),
            ShapeSpec::Polygon { vertices } => Ok(Shape::from_body(ConvexBody::new(vertices.clone())?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Statistic {
    #[serde(rename = "max_l")]
    MaxL,
    #[serde(rename = "maxrect")]
    MaxRect,
    #[serde(rename = "polymax")]
    PolyMax,
    #[serde(rename = "stripquad")]
    StripQuad,
    #[serde(rename = "occupancy")]
    Occupancy,
    #[serde(rename = "bounds")]
    Bounds,
}

impl Statistic {
    pub fn code(self) -> u64 {
        self as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub body: BodySpec,
    #[serde(default = "default_shapes")]
    pub shapes: Vec<ShapeSpec>,
    pub n_values: Vec<u64>,
    pub epsilon: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub trials_per_n: u64,
    pub master_seed: u64,
    pub which: BTreeSet<Statistic>,
    /// Worker threads; `None` uses every core.
    #[serde(default)]
    pub threads: Option<usize>,
    /// Point visits allowed per rectangle-net certification.
    #[serde(default = "default_budget")]
    pub certify_budget: u64,
}

fn default_shapes() -> Vec<ShapeSpec> {
    vec![ShapeSpec::Square]
}

fn default_delta() -> f64 {
    0.2
}

fn default_budget() -> u64 {
    200_000_000
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |s: String| Err(HarnessError::InvalidConfig(s));
        if self.n_values.is_empty() {
            return bad("n_values is empty".into());
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return bad("n_values must be strictly increasing".into());
        }
        if self.n_values[0] < 3 {
            return bad(format!("n = {} is below 3", self.n_values[0]));
        }
        if self.trials_per_n == 0 {
            return bad("trials_per_n must be at least 1".into());
        }
        if self.which.is_empty() {
            return bad("which is empty".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("epsilon {} outside (0, 1)", self.epsilon));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return bad(format!("delta {} outside (0, 1/2)", self.delta));
        }
        if self.which.contains(&Statistic::MaxL) && self.shapes.is_empty() {
            return bad("max_l needs at least one shape".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Exact, or bounded above by the matching `<statistic>.upper` row.
    Certified,
    LowerOnly,
    Failed,
}

/// One statistic of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatValue {
    pub statistic: String,
    pub value: f64,
    /// `value · n / log n`.
    pub normalized: f64,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub n: u64,
    pub trial: u64,
    /// Stream index of the trial's sample under the master seed.
    pub seed: u64,
    pub stats: Vec<StatValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub trials: Vec<TrialReport>,
    /// Per statistic and `n`, in first-seen statistic order.
    pub summaries: Vec<StatSummary>,
    pub trends: Vec<StatTrend>,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("{statistic} has data at {found} sample sizes, need 3")]
    InsufficientData { statistic: String, found: usize },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// `value · n / log n`.
pub fn normalize(value: f64, n: u64) -> f64 {
    let nf = n as f64;
    value * nf / nf.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_json_uses_field_names() {
        let json = r#"{
            "body": "unit_square",
            "shapes": ["square", "disk", {"rect": {"aspect": 2.0}}],
            "n_values": [64, 128, 256],
            "epsilon": 0.1,
            "delta": 0.2,
            "trials_per_n": 2,
            "master_seed": 7,
            "which": ["max_l", "occupancy", "maxrect"]
        }"#;
        let c: ExperimentConfig = serde_json::from_str(json).unwrap();
        c.validate().unwrap();
        assert_eq!(c.which.len(), 3);
        assert_eq!(c.threads, None);
        assert_eq!(c.shapes[2].build().unwrap().id, "rect2x1");
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig {
            body: BodySpec::RegularPolygon { k: 6 },
            shapes: vec![],
            n_values: vec![100, 100],
            epsilon: 0.1,
            delta: 0.2,
            trials_per_n: 1,
            master_seed: 0,
            which: [Statistic::Occupancy].into(),
            threads: None,
            certify_budget: 1,
        };
        assert!(c.validate().is_err());
        c.n_values = vec![100, 200];
        c.validate().unwrap();
        c.which.insert(Statistic::MaxL);
        assert!(c.validate().is_err());
        assert!((c.body.build().unwrap().area() - 1.0).abs() < 1e-12);
        assert!(BodySpec::RegularPolygon { k: 2 }.build().is_err());
    }
}
