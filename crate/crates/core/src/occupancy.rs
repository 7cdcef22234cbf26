//! Empty-bin moments for balls thrown into bins, and their empirical
//! counterpart: empty regions of an equal-area partition under a sample.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{strip_partition, Containment, ConvexBody, GeomError, Point, Region};
use crate::sampling::{sample_uniform, stream_of, PointSample, SeedSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OccupancyMoments {
    pub k: u64,
    pub n: u64,
    pub expected_empty: f64,
    pub variance_empty: f64,
}

/// `(1 - j/k)^n` evaluated as `exp(n log1p(-j/k))`.
fn survival(j: f64, k: f64, n: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    (n as f64 * (-j / k).ln_1p()).exp()
}

/// Mean and variance of the number of empty bins.
pub fn empty_bin_moments(k: u64, n: u64) -> OccupancyMoments {
    assert!(k >= 1, "at least one bin is required");
    let kf = k as f64;
    let s1 = survival(1.0, kf, n);
    let expected_empty = kf * s1;
    let variance_empty = match (k, n) {
        (_, 0) | (1, _) => 0.0,
        _ => kf * s1 + kf * (kf - 1.0) * survival(2.0, kf, n) - kf * kf * s1 * s1,
    };
    OccupancyMoments {
        k,
        n,
        expected_empty,
        variance_empty,
    }
}

/// Region count `round(n / ((1-ε) log n))`, at least 1.
pub fn region_count(n: u64, epsilon: f64) -> u64 {
    let nf = n as f64;
    ((nf / ((1.0 - epsilon) * nf.ln())).round() as u64).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevBound {
    /// `n^ε / (2(1-ε) log n)`.
    pub threshold: f64,
    /// `4(1-ε) log n / n^ε`.
    pub prob_bound: f64,
    /// Number of regions used for the exact chain.
    pub k: u64,
    pub expected_exact: f64,
    pub variance_exact: f64,
    /// `Var / (E - threshold)^2` with the exact moments; 1 when `E <= threshold`.
    pub prob_bound_exact: f64,
}

/// Probability bound for seeing fewer than `threshold` empty regions.
pub fn chebyshev_empty_regions_bound(n: u64, epsilon: f64) -> ChebyshevBound {
    assert!(n >= 3, "n must be at least 3");
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
    let nf = n as f64;
    let ln = nf.ln();
    let ne = nf.powf(epsilon);
    let threshold = ne / (2.0 * (1.0 - epsilon) * ln);
    let prob_bound = 4.0 * (1.0 - epsilon) * ln / ne;
    let k = region_count(n, epsilon);
    let m = empty_bin_moments(k, n);
    let gap = m.expected_empty - threshold;
    let prob_bound_exact = if gap > 0.0 {
        (m.variance_empty / (gap * gap)).min(1.0)
    } else {
        1.0
    };
    ChebyshevBound {
        threshold,
        prob_bound,
        k,
        expected_exact: m.expected_empty,
        variance_exact: m.variance_empty,
        prob_bound_exact,
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OccupancyError {
    #[error("regions do not partition the body: {0}")]
    NotAPartition(String),
    #[error("sample point {0} lies outside every region")]
    PointOutside(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Bucket grid over region bounding boxes; buckets list region indices in
/// increasing order so the first closed hit is the lowest index.
pub struct RegionLocator<'a> {
    regions: &'a [Region],
    lo: Point,
    inv: (f64, f64),
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl<'a> RegionLocator<'a> {
    pub fn new(regions: &'a [Region]) -> Self {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let (mut sw, mut sh) = (0.0, 0.0);
        for r in regions {
            let (a, b) = r.bbox();
            lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
            hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
            sw += b.x - a.x;
            sh += b.y - a.y;
        }
        let k = regions.len().max(1) as f64;
        let (w, h) = ((hi.x - lo.x).max(f64::MIN_POSITIVE), (hi.y - lo.y).max(f64::MIN_POSITIVE));
        let cap = 4 * regions.len().max(1) + 16;
        let mut nx = ((w / (sw / k).max(f64::MIN_POSITIVE)).ceil() as usize).clamp(1, cap);
        let mut ny = ((h / (sh / k).max(f64::MIN_POSITIVE)).ceil() as usize).clamp(1, cap);
        while nx * ny > cap {
            nx = nx.div_ceil(2);
            ny = ny.div_ceil(2);
        }
        let inv = (nx as f64 / w, ny as f64 / h);
        let mut buckets = vec![Vec::new(); nx * ny];
        for (idx, r) in regions.iter().enumerate() {
            let (a, b) = r.bbox();
            let i0 = (((a.x - lo.x) * inv.0).floor().max(0.0) as usize).min(nx - 1);
            let i1 = (((b.x - lo.x) * inv.0).floor().max(0.0) as usize).min(nx - 1);
            let j0 = (((a.y - lo.y) * inv.1).floor().max(0.0) as usize).min(ny - 1);
            let j1 = (((b.y - lo.y) * inv.1).floor().max(0.0) as usize).min(ny - 1);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * nx + i].push(idx as u32);
                }
            }
        }
        RegionLocator {
            regions,
            lo,
            inv,
            nx,
            ny,
            buckets,
        }
    }

    fn bucket_of(&self, p: Point) -> Option<&[u32]> {
        let fx = ((p.x - self.lo.x) * self.inv.0).floor();
        let fy = ((p.y - self.lo.y) * self.inv.1).floor();
        // Points exactly on the far edge belong to the last bucket.
        let i = if fx as isize == self.nx as isize { self.nx - 1 } else { fx as usize };
        let j = if fy as isize == self.ny as isize { self.ny - 1 } else { fy as usize };
        if fx < 0.0 || fy < 0.0 || i >= self.nx || j >= self.ny {
            return None;
        }
        Some(&self.buckets[j * self.nx + i])
    }

    /// Lowest-index region whose closed set contains `p`.
    pub fn locate(&self, p: Point) -> Option<usize> {
        self.bucket_of(p)?
            .iter()
            .map(|&i| i as usize)
            .find(|&i| self.regions[i].contains(p, Containment::Closed))
    }

    /// Indices of regions whose open interior contains `p`.
    pub fn open_hits(&self, p: Point) -> Vec<usize> {
        self.bucket_of(p).map_or_else(Vec::new, |b| {
            b.iter()
                .map(|&i| i as usize)
                .filter(|&i| self.regions[i].contains(p, Containment::Open))
                .collect()
        })
    }
}

/// Area-sum and overlap probes.
pub fn check_partition(body: &ConvexBody, regions: &[Region], locator: &RegionLocator) -> Result<(), OccupancyError> {
    let total: f64 = regions.iter().map(|r| r.area()).sum();
    let tol = 1e-9 * (regions.len() as f64 + 1.0) * body.area().max(1.0);
    if (total - body.area()).abs() > tol {
        return Err(OccupancyError::NotAPartition(format!(
            "region areas sum to {total}, body area is {}",
            body.area()
        )));
    }
    for (i, r) in regions.iter().enumerate() {
        let probe = match &r.kind {
            crate::geom::RegionKind::Cell(c) => c.centroid(),
            crate::geom::RegionKind::Remainder { .. } => continue,
        };
        let hits = locator.open_hits(probe);
        if hits != [i] {
            return Err(OccupancyError::NotAPartition(format!(
                "probe of region {i} lies in the interiors of {hits:?}"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyOutcome {
    pub empty_count: usize,
    pub empty_flags: Vec<bool>,
}

/// Counts regions that receive no sample point.
pub fn simulate_partition_occupancy(
    body: &ConvexBody,
    regions: &[Region],
    sample: &PointSample,
) -> Result<OccupancyOutcome, OccupancyError> {
    let locator = RegionLocator::new(regions);
    check_partition(body, regions, &locator)?;
    occupancy_with_locator(&locator, regions.len(), &sample.points)
}

fn occupancy_with_locator(
    locator: &RegionLocator,
    k: usize,
    points: &[Point],
) -> Result<OccupancyOutcome, OccupancyError> {
    let mut empty_flags = vec![true; k];
    for (idx, &p) in points.iter().enumerate() {
        let r = locator.locate(p).ok_or(OccupancyError::PointOutside(idx))?;
        empty_flags[r] = false;
    }
    Ok(OccupancyOutcome {
        empty_count: empty_flags.iter().filter(|&&e| e).count(),
        empty_flags,
    })
}

/// One summary line of a Monte Carlo occupancy run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyRow {
    pub k: u64,
    pub n: u64,
    pub expected: f64,
    pub variance: f64,
    pub empirical_mean: f64,
    pub empirical_var: f64,
    pub trials: u64,
}

/// Empty counts of `trials` samples over one fixed partition, in trial order.
pub fn occupancy_trials(
    body: &ConvexBody,
    regions: &[Region],
    n: usize,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<usize>, OccupancyError> {
    let locator = RegionLocator::new(regions);
    check_partition(body, regions, &locator)?;
    let k = regions.len();
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = SeedSpec::new(master_seed, stream_of(&[k as u64, n as u64, t as u64]));
            let s = sample_uniform(body, n, seed);
            occupancy_with_locator(&locator, k, &s.points).map(|o| o.empty_count)
        })
        .collect()
}

/// Strip partition of `body` into `k` regions, `trials` samples of size `n`.
pub fn strip_occupancy_row(
    body: &ConvexBody,
    k: usize,
    n: usize,
    trials: usize,
    master_seed: u64,
) -> Result<(OccupancyRow, Vec<usize>), OccupancyError> {
    let regions = strip_partition(body, k)?;
    let counts = occupancy_trials(body, &regions, n, trials, master_seed)?;
    let m = empty_bin_moments(k as u64, n as u64);
    let tf = counts.len() as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / tf;
    let var = if counts.len() > 1 {
        counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (tf - 1.0)
    } else {
        0.0
    };
    Ok((
        OccupancyRow {
            k: k as u64,
            n: n as u64,
            expected: m.expected_empty,
            variance: m.variance_empty,
            empirical_mean: mean,
            empirical_var: var,
            trials: trials as u64,
        },
        counts,
    ))
}

pub fn write_occupancy_csv<W: Write>(rows: &[OccupancyRow], w: W) -> Result<(), csv::Error> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::equal_area_partition;
    use crate::geom::OrientedRect;

    #[test]
    fn moments_small_cases() {
        let m = empty_bin_moments(1, 5);
        assert_eq!((m.expected_empty, m.variance_empty), (0.0, 0.0));
        assert!((empty_bin_moments(3, 1).expected_empty - 2.0).abs() < 1e-15);
        let m = empty_bin_moments(2, 2);
        assert!((m.expected_empty - 0.5).abs() < 1e-15);
        assert!((m.variance_empty - 0.25).abs() < 1e-15);
        let m = empty_bin_moments(7, 0);
        assert_eq!((m.expected_empty, m.variance_empty), (7.0, 0.0));
    }

    #[test]
    fn no_underflow_for_huge_n() {
        let m = empty_bin_moments(1000, 20_000);
        assert!(m.expected_empty > 0.0 && m.expected_empty < 1e-5);
    }

    #[test]
    fn chebyshev_values() {
        let b = chebyshev_empty_regions_bound(10_000, 0.5);
        assert!((b.threshold - 10.857362047581296).abs() < 1e-12);
        assert!((b.prob_bound - 0.18420680743952367).abs() < 1e-12);
        let c = chebyshev_empty_regions_bound(1_000_000, 0.9);
        assert!((c.prob_bound - 2.2000215271932495e-5).abs() < 1e-15);
        assert!(chebyshev_empty_regions_bound(1_000_000, 0.5).prob_bound < b.prob_bound);
        assert!(b.prob_bound_exact <= 1.0);
    }

    #[test]
    fn quadrants() {
        let sq = ConvexBody::unit_square();
        let cell = OrientedRect::axis(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let regions = equal_area_partition(&sq, 4, &cell).unwrap();
        let s = PointSample::from_points(vec![Point::new(0.25, 0.25)]);
        let o = simulate_partition_occupancy(&sq, &regions, &s).unwrap();
        assert_eq!(o.empty_count, 3);
        let o = simulate_partition_occupancy(&sq, &regions, &PointSample::from_points(vec![])).unwrap();
        assert_eq!(o.empty_count, 4);
    }

    #[test]
    fn boundary_tie_goes_to_lowest_index() {
        let sq = ConvexBody::unit_square();
        let cell = OrientedRect::axis(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let regions = equal_area_partition(&sq, 4, &cell).unwrap();
        let s = PointSample::from_points(vec![Point::new(0.5, 0.25)]);
        let o = simulate_partition_occupancy(&sq, &regions, &s).unwrap();
        assert_eq!(o.empty_flags, vec![false, true, true, true]);
    }

    #[test]
    fn overlapping_regions_rejected() {
        let sq = ConvexBody::unit_square();
        let half = ConvexBody::axis_rect(Point::new(0.0, 0.0), Point::new(0.5, 1.0));
        let regions = vec![
            Region::cell(half.clone(), false),
            Region::cell(half, false),
        ];
        let err = simulate_partition_occupancy(&sq, &regions, &PointSample::from_points(vec![]));
        assert!(matches!(err, Err(OccupancyError::NotAPartition(_))));
    }
}
