use rayon::prelude::*;

use super::report::{summarize, trends};
use super::{normalize, Certificate, ExperimentConfig, HarnessError, ScalingReport, StatValue, Statistic, TrialReport};
use crate::geom::{strip_partition, ConvexBody};
use crate::holes::{convex_hole_bounds, polymax, strip_quadrilateral, BoundsOptions};
use crate::homothet::{largest_empty_homothet, Shape};
use crate::occupancy::{region_count, simulate_partition_occupancy};
use crate::rect_nets::{make_net_params, net_max_empty_rect, CertifyOptions, RectCertificate, RectNet};
use crate::sampling::{sample_uniform, stream_of, PointSample, SeedSpec};

/// Stream index of trial `trial` at sample size `n`.
pub fn trial_seed(n: u64, trial: u64) -> u64 {
    stream_of(&[n, trial])
}

struct Ctx {
    body: ConvexBody,
    shapes: Vec<Shape>,
    unit_square: bool,
    cfg: ExperimentConfig,
}

struct Rows {
    n: u64,
    out: Vec<StatValue>,
}

impl Rows {
    fn push(&mut self, statistic: &str, value: f64, certificate: Certificate) {
        self.out.push(StatValue {
            statistic: statistic.to_string(),
            value,
            normalized: normalize(value, self.n),
            certificate,
        });
    }

    fn certified(&mut self, statistic: &str, value: f64, upper: f64) {
        self.push(statistic, value, Certificate::Certified);
        self.push(&format!("{statistic}.upper"), upper, Certificate::Certified);
    }

    fn failed(&mut self, statistic: &str) {
        self.push(statistic, 0.0, Certificate::Failed);
    }
}

fn run_trial(ctx: &Ctx, n: u64, trial: u64) -> TrialReport {
    let seed = trial_seed(n, trial);
    let sample = sample_uniform(&ctx.body, n as usize, SeedSpec::new(ctx.cfg.master_seed, seed));
    let mut rows = Rows { n, out: Vec::new() };
    for &stat in &ctx.cfg.which {
        run_statistic(ctx, stat, &sample, &mut rows);
    }
    TrialReport {
        n,
        trial,
        seed,
        stats: rows.out,
    }
}

fn run_statistic(ctx: &Ctx, stat: Statistic, sample: &PointSample, rows: &mut Rows) {
    let eps = ctx.cfg.epsilon;
    let pts = &sample.points;
    let certify = CertifyOptions {
        work_budget: ctx.cfg.certify_budget,
    };
    match stat {
        Statistic::MaxL => {
            for shape in &ctx.shapes {
                let name = format!("max_l/{}", shape.id);
                let r = largest_empty_homothet(&ctx.body, shape, sample, eps);
                match r.certificate.upper() {
                    Some(u) => rows.certified(&name, r.area, u),
                    None => rows.push(&name, r.area, Certificate::LowerOnly),
                }
            }
        }
        Statistic::MaxRect => {
            let res = make_net_params(pts.len() as u64, eps, &ctx.body)
                .and_then(|p| net_max_empty_rect(&RectNet::new(ctx.body.clone(), p), pts, certify));
            match res {
                Ok(r) => match r.certificate {
                    RectCertificate::Certified { upper } => rows.certified("maxrect", r.lower, upper),
                    _ => rows.push("maxrect", r.lower, Certificate::LowerOnly),
                },
                Err(_) => rows.failed("maxrect"),
            }
        }
        Statistic::PolyMax => match polymax(pts) {
            Ok(r) if r.exact => rows.certified("polymax", r.area, r.area),
            Ok(r) => rows.push("polymax", r.area, Certificate::LowerOnly),
            Err(_) => rows.failed("polymax"),
        },
        Statistic::StripQuad => {
            let found = if ctx.unit_square {
                strip_quadrilateral(pts, eps, ctx.cfg.delta).ok().filter(|r| r.quad.is_some())
            } else {
                None
            };
            match found {
                Some(r) => rows.push("stripquad", r.area, Certificate::LowerOnly),
                None => rows.failed("stripquad"),
            }
        }
        Statistic::Occupancy => {
            let k = region_count(pts.len() as u64, eps) as usize;
            let out = strip_partition(&ctx.body, k)
                .map_err(|e| e.to_string())
                .and_then(|regions| simulate_partition_occupancy(&ctx.body, &regions, sample).map_err(|e| e.to_string()));
            match out {
                Ok(o) => rows.certified("occupancy", o.empty_count as f64, o.empty_count as f64),
                Err(_) => rows.failed("occupancy"),
            }
        }
        Statistic::Bounds => {
            let opts = BoundsOptions {
                certify,
                ..BoundsOptions::default()
            };
            let b = convex_hole_bounds(&ctx.body, pts, eps, &opts);
            if b.certified {
                rows.certified("convex_hole", b.lower, b.upper);
            } else {
                rows.push("convex_hole", b.lower, Certificate::LowerOnly);
            }
        }
    }
}

/// Runs every `(n, trial)` of the config. Trials run in parallel on
/// `config.threads` workers and are reduced in `(n, trial)` order, so the
/// report depends only on the config.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ScalingReport, HarnessError> {
    config.validate()?;
    let body = config.body.build()?;
    let shapes = config.shapes.iter().map(|s| s.build()).collect::<Result<Vec<_>, _>>()?;
    let ctx = Ctx {
        unit_square: body.vertices() == ConvexBody::unit_square().vertices(),
        body,
        shapes,
        cfg: config.clone(),
    };
    let tasks: Vec<(u64, u64)> = config
        .n_values
        .iter()
        .flat_map(|&n| (0..config.trials_per_n).map(move |t| (n, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
    let trials: Vec<TrialReport> = pool.install(|| tasks.par_iter().map(|&(n, t)| run_trial(&ctx, n, t)).collect());
    Ok(ScalingReport::from_trials(trials))
}

impl ScalingReport {
    pub fn from_trials(trials: Vec<TrialReport>) -> Self {
        let summaries = summarize(&trials);
        let trends = trends(&summaries);
        ScalingReport {
            trials,
            summaries,
            trends,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{BodySpec, ShapeSpec};
    use super::*;

    fn small(which: &[Statistic], threads: usize) -> ExperimentConfig {
        ExperimentConfig {
            body: BodySpec::UnitSquare,
            shapes: vec![ShapeSpec::Square],
            n_values: vec![64, 128],
            epsilon: 0.1,
            delta: 0.2,
            trials_per_n: 3,
            master_seed: 42,
            which: which.iter().copied().collect(),
            threads: Some(threads),
            certify_budget: 10_000_000,
        }
    }

    #[test]
    fn rows_follow_the_certificate_rules() {
        let r = run_experiment(&small(&[Statistic::MaxL, Statistic::PolyMax, Statistic::Occupancy], 2)).unwrap();
        assert_eq!(r.trials.len(), 6);
        for t in &r.trials {
            assert_eq!(t.seed, trial_seed(t.n, t.trial));
            for (i, s) in t.stats.iter().enumerate() {
                assert!(s.value <= 0.0 || s.normalized > 0.0);
                if s.certificate == Certificate::Certified && !s.statistic.ends_with(".upper") {
                    let up = &t.stats[i + 1];
                    assert_eq!(up.statistic, format!("{}.upper", s.statistic));
                    assert!(s.value <= up.value);
                }
            }
            assert!(t.stats.iter().any(|s| s.statistic == "max_l/square"));
            let poly = t.stats.iter().find(|s| s.statistic == "polymax").unwrap();
            assert_eq!(poly.certificate, Certificate::Certified);
        }
    }

    #[test]
    fn thread_count_does_not_change_the_report() {
        let which = [Statistic::MaxL, Statistic::StripQuad, Statistic::Occupancy];
        let a = run_experiment(&small(&which, 1)).unwrap();
        let b = run_experiment(&small(&which, 4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn strip_quad_needs_the_unit_square() {
        let mut c = small(&[Statistic::StripQuad], 1);
        c.body = BodySpec::RegularPolygon { k: 8 };
        let r = run_experiment(&c).unwrap();
        assert!(r.trials.iter().all(|t| t.stats[0].certificate == Certificate::Failed));
    }
}
