use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Certificate, HarnessError, ScalingReport, StatValue, TrialReport};

/// One CSV line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    pub statistic: String,
    pub n: u64,
    pub trial: u64,
    pub seed: u64,
    pub value: f64,
    pub normalized: f64,
    pub certificate: Certificate,
}

/// Normalised values of one statistic at one `n`; failed trials are counted
/// but left out of the moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub statistic: String,
    pub n: u64,
    pub trials: u64,
    pub failed: u64,
    pub certified: u64,
    pub mean: f64,
    pub median: f64,
    pub stddev: f64,
}

impl StatSummary {
    pub fn failure_rate(&self) -> f64 {
        self.failed as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatTrend {
    pub statistic: String,
    pub n_values: Vec<u64>,
    pub medians: Vec<f64>,
    pub non_increasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub statistic: String,
    /// Median normalised value at the largest `n`.
    pub c_hat: f64,
    /// Least-squares slope of the median normalised value against `1 / log n`.
    pub drift: f64,
    /// The fitted drift moves the median by more than half of `c_hat` over the range.
    pub flagged: bool,
}

pub(crate) fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

pub(crate) fn summarize(trials: &[TrialReport]) -> Vec<StatSummary> {
    let mut names: Vec<&str> = Vec::new();
    let mut ns: Vec<u64> = Vec::new();
    for t in trials {
        if !ns.contains(&t.n) {
            ns.push(t.n);
        }
        for s in &t.stats {
            if !names.contains(&s.statistic.as_str()) {
                names.push(&s.statistic);
            }
        }
    }
    ns.sort_unstable();
    let mut out = Vec::new();
    for name in names {
        for &n in &ns {
            let rows: Vec<&StatValue> = trials
                .iter()
                .filter(|t| t.n == n)
                .flat_map(|t| t.stats.iter().filter(|s| s.statistic == name))
                .collect();
            if rows.is_empty() {
                continue;
            }
            let mut ok: Vec<f64> = rows
                .iter()
                .filter(|s| s.certificate != Certificate::Failed)
                .map(|s| s.normalized)
                .collect();
            let k = ok.len() as f64;
            let mean = if ok.is_empty() { 0.0 } else { ok.iter().sum::<f64>() / k };
            let stddev = if ok.len() > 1 {
                (ok.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
            } else {
                0.0
            };
            out.push(StatSummary {
                statistic: name.to_string(),
                n,
                trials: rows.len() as u64,
                failed: rows.len() as u64 - ok.len() as u64,
                certified: rows.iter().filter(|s| s.certificate == Certificate::Certified).count() as u64,
                mean,
                median: median(&mut ok),
                stddev,
            });
        }
    }
    out
}

pub(crate) fn trends(summaries: &[StatSummary]) -> Vec<StatTrend> {
    let mut out: Vec<StatTrend> = Vec::new();
    for s in summaries {
        match out.last_mut() {
            Some(t) if t.statistic == s.statistic => {
                t.n_values.push(s.n);
                t.medians.push(s.median);
            }
            _ => out.push(StatTrend {
                statistic: s.statistic.clone(),
                n_values: vec![s.n],
                medians: vec![s.median],
                non_increasing: true,
            }),
        }
    }
    for t in &mut out {
        t.non_increasing = t.medians.windows(2).all(|w| w[1] <= w[0]);
    }
    out
}

impl ScalingReport {
    pub fn rows(&self) -> impl Iterator<Item = StatRow> + '_ {
        self.trials.iter().flat_map(|t| {
            t.stats.iter().map(move |s| StatRow {
                statistic: s.statistic.clone(),
                n: t.n,
                trial: t.trial,
                seed: t.seed,
                value: s.value,
                normalized: s.normalized,
                certificate: s.certificate,
            })
        })
    }

    pub fn summary(&self, statistic: &str, n: u64) -> Option<&StatSummary> {
        self.summaries.iter().find(|s| s.statistic == statistic && s.n == n)
    }

    pub fn trend(&self, statistic: &str) -> Option<&StatTrend> {
        self.trends.iter().find(|t| t.statistic == statistic)
    }
}

/// Header plus one row per `(n, trial, statistic)`.
pub fn write_csv<W: Write>(report: &ScalingReport, w: W) -> Result<(), HarnessError> {
    let mut wr = csv::Writer::from_writer(w);
    for row in report.rows() {
        wr.serialize(row)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<ScalingReport, HarnessError> {
    let mut rd = csv::Reader::from_reader(r);
    let mut trials: Vec<TrialReport> = Vec::new();
    for row in rd.deserialize() {
        let row: StatRow = row?;
        let stat = StatValue {
            statistic: row.statistic,
            value: row.value,
            normalized: row.normalized,
            certificate: row.certificate,
        };
        match trials.last_mut() {
            Some(t) if t.n == row.n && t.trial == row.trial => t.stats.push(stat),
            _ => trials.push(TrialReport {
                n: row.n,
                trial: row.trial,
                seed: row.seed,
                stats: vec![stat],
            }),
        }
    }
    Ok(ScalingReport::from_trials(trials))
}

/// Constant `c` in `c · log n / n` and its drift across sample sizes.
pub fn fit_scaling(report: &ScalingReport, statistic: &str) -> Result<ScalingFit, HarnessError> {
    let pts: Vec<(f64, f64, u64)> = report
        .summaries
        .iter()
        .filter(|s| s.statistic == statistic && s.failed < s.trials)
        .map(|s| (1.0 / (s.n as f64).ln(), s.median, s.n))
        .collect();
    if pts.len() < 3 {
        return Err(HarnessError::InsufficientData {
            statistic: statistic.to_string(),
            found: pts.len(),
        });
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let drift = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let c_hat = pts.iter().max_by_key(|p| p.2).map(|p| p.1).unwrap_or(0.0);
    let (xlo, xhi) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let span = drift.abs() * (xhi - xlo);
    let flagged = span.is_nan() || c_hat.is_nan() || span > 0.5 * c_hat.abs();
    Ok(ScalingFit {
        statistic: statistic.to_string(),
        c_hat,
        drift,
        flagged,
    })
}
