use serde::{Deserialize, Serialize};

use super::{HomothetError, Shape};
use crate::geom::{best_grid, lassak_rectangles, partition_with_cells, ConvexBody, GeomError, OrientedRect, Region};
use crate::occupancy::{region_count, simulate_partition_occupancy};
use crate::sampling::{sample_uniform, SeedSpec};

/// Equal-area partition with many `L`-homothets and its occupancy by a fresh sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundPartition {
    #[serde(skip)]
    pub regions: Vec<Region>,
    pub homothet_flags: Vec<bool>,
    pub empty_flags: Vec<bool>,
    /// Circumscribed rectangle `R` of `L`.
    pub cell_shape: OrientedRect,
    pub homothet_count: usize,
    pub empty_count: usize,
    pub empty_homothets: usize,
    pub empty_homothet_found: bool,
}

/// Partitions `body` into `round(n / ((1-ε) log n))` regions of equal area,
/// at least a third of them homothets of `L`, then throws `n` points.
///
/// A grid of `R`-homothets is laid over the body, `R` being the circumscribed
/// rectangle of `L`; each grid cell holds the matching `L`-homothet, scaled
/// to the region area. Everything outside those `L`-homothets is sliced into
/// the remaining regions.
pub fn lower_bound_partition(
    body: &ConvexBody,
    shape: &Shape,
    n: u64,
    epsilon: f64,
    seed: SeedSpec,
) -> Result<LowerBoundPartition, HomothetError> {
    let m = region_count(n, epsilon) as usize;
    let area = body.area();
    let l = &shape.body;
    let r = lassak_rectangles(l)?.circumscribed;
    let lambda = (area / (m as f64 * l.area())).sqrt();
    let grid = best_grid(body, lambda * r.width(), lambda * r.height(), r.inclination());
    let mut cells: Vec<ConvexBody> = grid
        .iter()
        .map(|g| l.homothet(lambda, g.center() - r.center() * lambda))
        .filter(|c| body.contains_body(c))
        .collect();
    cells.truncate(m);
    let need = m.div_ceil(3);
    if cells.len() < need {
        return Err(GeomError::TooFewCells { m, m0: None }.into());
    }
    let homothet_count = cells.len();
    let mut homothet_flags = vec![true; homothet_count];
    let regions = partition_with_cells(body, cells, homothet_flags.clone(), area / m as f64)?;
    homothet_flags.resize(regions.len(), false);
    let sample = sample_uniform(body, n as usize, seed);
    let occ = simulate_partition_occupancy(body, &regions, &sample)?;
    let empty_homothets = occ.empty_flags[..homothet_count].iter().filter(|&&e| e).count();
    Ok(LowerBoundPartition {
        regions,
        homothet_flags,
        empty_flags: occ.empty_flags,
        cell_shape: r,
        homothet_count,
        empty_count: occ.empty_count,
        empty_homothets,
        empty_homothet_found: empty_homothets > 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_partition_counts() {
        let sq = ConvexBody::unit_square();
        let out = lower_bound_partition(&sq, &Shape::square(), 2000, 0.5, SeedSpec::new(1, 1)).unwrap();
        let m = region_count(2000, 0.5) as usize;
        assert_eq!(out.regions.len(), m);
        assert!(3 * out.homothet_count >= m);
        let total: f64 = out.regions.iter().map(|r| r.area()).sum();
        assert!((total - 1.0).abs() < 1e-9);
        for r in &out.regions {
            assert!((r.area() - 1.0 / m as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_sample_leaves_all_regions_empty() {
        let sq = ConvexBody::unit_square();
        let out = lower_bound_partition(&sq, &Shape::square(), 0, 0.5, SeedSpec::new(1, 1));
        let out = out.unwrap();
        assert!(out.empty_flags.iter().all(|&e| e));
        assert!(out.empty_homothet_found);
    }
}
