use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use holes_core::geom::{normalize_to_unit_area, ConvexBody, Point};
use holes_core::harness::{fit_scaling, read_csv, run_experiment, write_csv, ExperimentConfig};
use holes_core::holes::{convex_hole_bounds, polymax, strip_quadrilateral, BoundsOptions};
use holes_core::homothet::{largest_empty_homothet, HomothetCertificate, Shape};
use holes_core::occupancy::{region_count, strip_occupancy_row, write_occupancy_csv};
use holes_core::rect_nets::{
    build_rect_net, make_net_params, net_max_empty_rect, read_jsonl, verify_net_records, write_jsonl, CertifyOptions,
    NetRect, RectCertificate, RectNet,
};
use holes_core::sampling::{sample_uniform, PointSample};
use holes_core::SeedSpec;

#[derive(Parser)]
#[command(name = "holes", version, about = "Large empty convex holes in random point sets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stream index under the master seed.
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Output file, stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SampleSource {
    /// Number of points to draw.
    #[arg(long, default_value_t = 4096)]
    n: usize,
    /// Read the sample from a CSV file instead of drawing it.
    #[arg(long)]
    input: Option<PathBuf>,
    /// `square`, `hexagon`, or a JSON file with a vertex list.
    #[arg(long, default_value = "square")]
    body: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw a uniform sample.
    Sample {
        #[command(flatten)]
        src: SampleSource,
        #[command(flatten)]
        common: Common,
    },
    /// Empty strips of a strip partition over repeated samples.
    Occupancy {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        /// Strip count; defaults to `round(n / ((1-eps) log n))`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Largest empty rectangle found through the rectangle net, with its certificate.
    Maxrect {
        #[command(flatten)]
        src: SampleSource,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Point visits allowed for certification.
        #[arg(long, default_value_t = 2_000_000_000)]
        budget: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Build or check rectangle nets.
    Net {
        #[command(subcommand)]
        cmd: NetCmd,
    },
    /// Largest empty homothet of a shape with its net certificate.
    Maxhole {
        #[command(flatten)]
        src: SampleSource,
        /// `square`, `disk`, or a JSON file with a vertex list.
        #[arg(long, default_value = "square")]
        shape: String,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Largest empty convex polygon with vertices in the sample.
    Polymax {
        #[command(flatten)]
        src: SampleSource,
        #[command(flatten)]
        common: Common,
    },
    /// Empty quadrilateral from the strip construction in the unit square.
    Stripquad {
        #[command(flatten)]
        src: SampleSource,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Lower and upper bounds on the largest empty convex set.
    Holebounds {
        #[command(flatten)]
        src: SampleSource,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 200_000_000)]
        budget: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Run or fit scaling experiments.
    Experiment {
        #[command(subcommand)]
        cmd: ExperimentCmd,
    },
}

#[derive(Subcommand)]
enum NetCmd {
    /// Write net members as JSON lines.
    Build {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Only this rotation index.
        #[arg(long)]
        rotation: Option<u64>,
        /// Refuse to write more members than this.
        #[arg(long, default_value_t = 10_000_000)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check JSON-lines members against the net definition.
    Verify {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// JSON-lines file to check.
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    Run {
        /// JSON experiment config.
        config: PathBuf,
        /// Override the config's thread count.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    Fit {
        /// CSV report from `experiment run`.
        report: PathBuf,
        /// Statistic to fit; every statistic when absent.
        #[arg(long)]
        statistic: Option<String>,
    },
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn emit_json<T: Serialize>(value: &T, path: &Option<PathBuf>) -> Result<()> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn read_vertices(path: &Path) -> Result<ConvexBody> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let vs: Vec<Point> = serde_json::from_reader(BufReader::new(f))?;
    Ok(ConvexBody::new(vs)?)
}

fn body_of(spec: &str) -> Result<ConvexBody> {
    Ok(match spec {
        "square" => ConvexBody::unit_square(),
        "hexagon" => ConvexBody::disk(6),
        file => normalize_to_unit_area(&read_vertices(Path::new(file))?).0,
    })
}

fn shape_of(spec: &str) -> Result<Shape> {
    Ok(match spec {
        "square" => Shape::square(),
        "disk" => Shape::disk(),
        file => Shape::from_body(read_vertices(Path::new(file))?),
    })
}

fn load(src: &SampleSource, common: &Common) -> Result<(ConvexBody, PointSample)> {
    let body = body_of(&src.body)?;
    let sample = match &src.input {
        Some(p) => {
            let f = File::open(p).with_context(|| format!("opening {}", p.display()))?;
            PointSample::read_csv(BufReader::new(f))?
        }
        None => sample_uniform(&body, src.n, SeedSpec::new(common.seed, common.stream)),
    };
    Ok((body, sample))
}

#[derive(Serialize)]
struct MaxrectReport {
    n: usize,
    epsilon: f64,
    lower: f64,
    upper: f64,
    certified: bool,
    status: String,
}

#[derive(Serialize)]
struct MaxholeReport {
    n: usize,
    epsilon: f64,
    lower: f64,
    upper: Option<f64>,
    placement: holes_core::homothet::HomothetPlacement,
    certified: bool,
    converged: bool,
    note: Option<String>,
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Sample { src, common } => {
            let (_, s) = load(&src, &common)?;
            match common.format {
                Format::Csv => {
                    let mut w = output(&common.out)?;
                    s.write_csv(&mut w)?;
                    w.flush()?;
                }
                Format::Json => emit_json(&s, &common.out)?,
            }
        }
        Cmd::Occupancy {
            n,
            eps,
            k,
            trials,
            common,
        } => {
            let k = k.unwrap_or_else(|| region_count(n as u64, eps) as usize);
            let (row, counts) = strip_occupancy_row(&ConvexBody::unit_square(), k, n, trials, common.seed)?;
            match common.format {
                Format::Csv => {
                    let mut w = output(&common.out)?;
                    write_occupancy_csv(&[row], &mut w)?;
                    w.flush()?;
                }
                Format::Json => emit_json(&serde_json::json!({ "summary": row, "empty_counts": counts }), &common.out)?,
            }
        }
        Cmd::Maxrect {
            src,
            eps,
            budget,
            common,
        } => {
            let (body, s) = load(&src, &common)?;
            let params = make_net_params(s.points.len() as u64, eps, &body)?;
            let net = RectNet::new(body, params);
            let r = net_max_empty_rect(&net, &s.points, CertifyOptions { work_budget: budget })?;
            let status = match r.certificate {
                RectCertificate::Certified { .. } => "certified".to_string(),
                RectCertificate::NotCertified { witness } => {
                    format!("empty net member at level {} rotation {}", witness.m, witness.t)
                }
                RectCertificate::Undetermined { scanned, total } => {
                    format!("budget exhausted after {scanned} of {total} rotations")
                }
            };
            emit_json(
                &MaxrectReport {
                    n: s.points.len(),
                    epsilon: eps,
                    lower: r.lower,
                    upper: r.upper(),
                    certified: r.upper().is_finite(),
                    status,
                },
                &common.out,
            )?;
        }
        Cmd::Net { cmd } => match cmd {
            NetCmd::Build {
                n,
                eps,
                rotation,
                limit,
                out,
            } => {
                let body = ConvexBody::unit_square();
                let net = RectNet::new(body.clone(), make_net_params(n, eps, &body)?);
                let rects = match rotation {
                    None => build_rect_net(&net, limit)?.rects,
                    Some(t) => {
                        if t >= net.params().theta_count() {
                            bail!("rotation {t} out of range 0..{}", net.params().theta_count());
                        }
                        let mut v = Vec::new();
                        for m in net.params().levels() {
                            for row in net.level_rows(t, m) {
                                for i in row.i_lo..=row.i_hi {
                                    if v.len() as u64 >= limit {
                                        bail!("more than {limit} members");
                                    }
                                    v.push(NetRect::new(net.params(), m, t, i, row.j)?);
                                }
                            }
                        }
                        v
                    }
                };
                let mut w = output(&out)?;
                write_jsonl(&rects, &mut w)?;
            }
            NetCmd::Verify { n, eps, input } => {
                let body = ConvexBody::unit_square();
                let net = RectNet::new(body.clone(), make_net_params(n, eps, &body)?);
                let f = File::open(&input).with_context(|| format!("opening {}", input.display()))?;
                let rep = verify_net_records(&net, &read_jsonl(BufReader::new(f))?);
                emit_json(&rep, &None)?;
                if !rep.ok() {
                    bail!("{} of {} records failed", rep.failures.len(), rep.checked);
                }
            }
        },
        Cmd::Maxhole {
            src,
            shape,
            eps,
            common,
        } => {
            let (body, s) = load(&src, &common)?;
            let shape = shape_of(&shape)?;
            let r = largest_empty_homothet(&body, &shape, &s, eps);
            let note = match &r.certificate {
                HomothetCertificate::NotCertified { reason, .. } => Some(reason.clone()),
                HomothetCertificate::Certified { .. } => None,
            };
            emit_json(
                &MaxholeReport {
                    n: s.points.len(),
                    epsilon: eps,
                    lower: r.area,
                    upper: r.certificate.upper(),
                    placement: r.best,
                    certified: r.certificate.upper().is_some(),
                    converged: r.converged,
                    note,
                },
                &common.out,
            )?;
        }
        Cmd::Polymax { src, common } => {
            let (_, s) = load(&src, &common)?;
            emit_json(&polymax(&s.points)?, &common.out)?;
        }
        Cmd::Stripquad {
            src,
            eps,
            delta,
            common,
        } => {
            if src.body != "square" {
                bail!("the strip construction needs the unit square");
            }
            let (_, s) = load(&src, &common)?;
            emit_json(&strip_quadrilateral(&s.points, eps, delta)?, &common.out)?;
        }
        Cmd::Holebounds {
            src,
            eps,
            budget,
            common,
        } => {
            let (body, s) = load(&src, &common)?;
            let mut opts = BoundsOptions::default();
            opts.certify.work_budget = budget;
            emit_json(&convex_hole_bounds(&body, &s.points, eps, &opts), &common.out)?;
        }
        Cmd::Experiment { cmd } => match cmd {
            ExperimentCmd::Run {
                config,
                threads,
                trials,
                seed,
                out,
                format,
            } => {
                let f = File::open(&config).with_context(|| format!("opening {}", config.display()))?;
                let mut cfg: ExperimentConfig = serde_json::from_reader(BufReader::new(f))?;
                cfg.threads = threads.or(cfg.threads);
                cfg.trials_per_n = trials.unwrap_or(cfg.trials_per_n);
                cfg.master_seed = seed.unwrap_or(cfg.master_seed);
                let report = run_experiment(&cfg)?;
                match format {
                    Format::Csv => {
                        let mut w = output(&out)?;
                        write_csv(&report, &mut w)?;
                    }
                    Format::Json => emit_json(&report, &out)?,
                }
            }
            ExperimentCmd::Fit { report, statistic } => {
                let f = File::open(&report).with_context(|| format!("opening {}", report.display()))?;
                let rep = read_csv(BufReader::new(f))?;
                let names: Vec<String> = match statistic {
                    Some(s) => vec![s],
                    None => rep.trends.iter().map(|t| t.statistic.clone()).collect(),
                };
                let mut fits = Vec::new();
                for name in names {
                    match fit_scaling(&rep, &name) {
                        Ok(fit) => fits.push(serde_json::to_value(fit)?),
                        Err(e) => fits.push(serde_json::json!({ "statistic": name, "error": e.to_string() })),
                    }
                }
                emit_json(&serde_json::json!({ "fits": fits, "trends": rep.trends, "summaries": rep.summaries }), &None)?;
            }
        },
    }
    Ok(())
}
