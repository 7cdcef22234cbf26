use serde::{Deserialize, Serialize};

use super::polymax::strict_hull;
use super::{ConvexChain, HolesError};
use crate::geom::Point;

/// Vertical slabs of width `1/t` over the unit square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripDecomposition {
    pub t: usize,
    /// Strips (0-based) holding no sample point, in increasing order.
    pub empty_indices: Vec<usize>,
}

impl StripDecomposition {
    /// `[x0, x1]` of strip `i`.
    pub fn strip(&self, i: usize) -> (f64, f64) {
        (i as f64 / self.t as f64, (i + 1) as f64 / self.t as f64)
    }

    pub fn cell(&self, x: f64) -> usize {
        ((x * self.t as f64).floor().max(0.0) as usize).min(self.t - 1)
    }
}

/// Outcome for one chosen empty strip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripEvent {
    pub j: usize,
    pub strip: usize,
    /// The two points closest to the strip on the left, nearest first.
    pub left: Vec<Point>,
    /// The two points closest to the strip on the right, nearest first.
    pub right: Vec<Point>,
    /// One left and one right point above `1−δ`, the others below `δ`.
    pub event: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripDiagnostics {
    pub p: usize,
    pub q: usize,
    /// Two adjacent strips are both empty.
    pub consecutive_empty: bool,
    /// The point sets of different events are pairwise disjoint.
    pub disjoint: bool,
    pub events: Vec<StripEvent>,
    /// First `j` whose quadrilateral passed verification.
    pub success_j: Option<usize>,
    /// Event quadrilaterals that failed the emptiness or area check.
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripQuad {
    pub quad: Option<ConvexChain>,
    pub area: f64,
    /// `(1−2δ)(1−ε) log n / n`.
    pub area_floor: f64,
    pub decomposition: StripDecomposition,
    pub diagnostics: StripDiagnostics,
}

/// `t = ⌊n / ((1−ε) log n)⌋`, at least 1.
pub fn strip_count(n: usize, epsilon: f64) -> usize {
    let nf = n as f64;
    ((nf / ((1.0 - epsilon) * nf.ln())).floor() as usize).max(1)
}

/// Empty convex quadrilateral from an empty strip of the unit square and
/// the two nearest points on each side of it.
pub fn strip_quadrilateral(points: &[Point], epsilon: f64, delta: f64) -> Result<StripQuad, HolesError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(HolesError::InvalidEpsilon(epsilon));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(HolesError::InvalidDelta(delta));
    }
    let n = points.len();
    if n < 3 {
        return Err(HolesError::SampleTooSmall(n));
    }
    let nf = n as f64;
    let area_floor = (1.0 - 2.0 * delta) * (1.0 - epsilon) * nf.ln() / nf;
    let mut dec = StripDecomposition {
        t: strip_count(n, epsilon),
        empty_indices: Vec::new(),
    };
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let cells: Vec<usize> = sorted.iter().map(|p| dec.cell(p.x)).collect();
    let mut occupied = vec![false; dec.t];
    for &c in &cells {
        occupied[c] = true;
    }
    dec.empty_indices = (0..dec.t).filter(|&i| !occupied[i]).collect();
    let e = &dec.empty_indices;
    let p = e.len();
    let q = p.saturating_sub(2) / 4;
    let consecutive_empty = e.windows(2).any(|w| w[1] == w[0] + 1);

    let mut events = Vec::with_capacity(q);
    let mut used: Vec<usize> = Vec::new();
    let mut disjoint = true;
    let mut success: Option<(usize, ConvexChain, f64)> = None;
    let mut violations = 0;
    for j in 1..=q {
        let s = e[4 * j - 1];
        let cut = cells.partition_point(|&c| c < s);
        let left: Vec<usize> = (cut.saturating_sub(2)..cut).rev().collect();
        let right: Vec<usize> = (cut..(cut + 2).min(n)).collect();
        for &k in left.iter().chain(&right) {
            if used.contains(&k) {
                disjoint = false;
            }
            used.push(k);
        }
        let split = |ix: &[usize]| -> Option<(Point, Point)> {
            if ix.len() < 2 {
                return None;
            }
            let (a, b) = (sorted[ix[0]], sorted[ix[1]]);
            if a.y > 1.0 - delta && b.y < delta {
                Some((a, b))
            } else if b.y > 1.0 - delta && a.y < delta {
                Some((b, a))
            } else {
                None
            }
        };
        let (l, r) = (split(&left), split(&right));
        let event = l.is_some() && r.is_some();
        events.push(StripEvent {
            j,
            strip: s,
            left: left.iter().map(|&k| sorted[k]).collect(),
            right: right.iter().map(|&k| sorted[k]).collect(),
            event,
        });
        let (Some((l_hi, l_lo)), Some((r_hi, r_lo))) = (l, r) else {
            continue;
        };
        let Some(hull) = strict_hull(&[l_lo, r_lo, r_hi, l_hi]) else {
            violations += 1;
            continue;
        };
        let chain = ConvexChain::new(hull, true);
        let area = chain.area();
        if chain.open_interior_hits(points) > 0 || area < area_floor {
            violations += 1;
            continue;
        }
        if success.is_none() {
            success = Some((j, chain, area));
        }
    }
    let (success_j, quad, area) = match success {
        Some((j, c, a)) => (Some(j), Some(c), a),
        None => (None, None, 0.0),
    };
    Ok(StripQuad {
        quad,
        area,
        area_floor,
        decomposition: dec,
        diagnostics: StripDiagnostics {
            p,
            q,
            consecutive_empty,
            disjoint,
            events,
            success_j,
            violations,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_count_uses_floor() {
        let n = 100_000usize;
        let t = strip_count(n, 0.5);
        assert_eq!(t, 17371);
        assert!(1.0 / t as f64 >= 0.5 * (n as f64).ln() / n as f64);
    }

    #[test]
    fn hand_built_sample() {
        // n = 14 and epsilon = 0.5 give t = 10; strips 0, 6 and 8 hold points.
        let mut pts: Vec<Point> = (1..=5).map(|i| Point::new(0.01 * i as f64, 0.5)).collect();
        pts.extend([Point::new(0.08, 0.97), Point::new(0.09, 0.02)]);
        pts.extend([Point::new(0.61, 0.03), Point::new(0.62, 0.98), Point::new(0.65, 0.5), Point::new(0.66, 0.5)]);
        pts.extend([Point::new(0.85, 0.5), Point::new(0.86, 0.5), Point::new(0.87, 0.5)]);
        let r = strip_quadrilateral(&pts, 0.5, 0.1).unwrap();
        assert_eq!(r.decomposition.t, 10);
        assert_eq!(r.decomposition.empty_indices, vec![1, 2, 3, 4, 5, 7, 9]);
        let d = &r.diagnostics;
        assert_eq!((d.p, d.q), (7, 1));
        assert!(d.consecutive_empty && d.disjoint);
        assert_eq!(d.events[0].strip, 4);
        assert_eq!(d.success_j, Some(1));
        assert_eq!(d.violations, 0);
        let quad = r.quad.unwrap();
        assert!(quad.is_convex());
        assert_eq!(quad.open_interior_hits(&pts), 0);
        assert!(quad.vertices.contains(&Point::new(0.09, 0.02)));
        assert!(quad.vertices.contains(&Point::new(0.62, 0.98)));
        assert!(r.area >= 0.8 * 0.1 && r.area >= r.area_floor);
    }

    #[test]
    fn full_strips_give_no_quad() {
        let n = 1000;
        let t = strip_count(n, 0.5);
        let pts: Vec<Point> = (0..n)
            .map(|i| Point::new(((i % t) as f64 + 0.5) / t as f64, (i as f64 + 0.5) / n as f64))
            .collect();
        let r = strip_quadrilateral(&pts, 0.5, 0.2).unwrap();
        assert_eq!(r.diagnostics.p, 0);
        assert_eq!(r.diagnostics.q, 0);
        assert!(r.quad.is_none());
    }

    #[test]
    fn rejects_bad_parameters() {
        let pts = [Point::new(0.1, 0.1); 5];
        assert!(matches!(strip_quadrilateral(&pts, 1.0, 0.2), Err(HolesError::InvalidEpsilon(_))));
        assert!(matches!(strip_quadrilateral(&pts, 0.5, 0.5), Err(HolesError::InvalidDelta(_))));
        assert!(matches!(strip_quadrilateral(&pts[..2], 0.5, 0.2), Err(HolesError::SampleTooSmall(2))));
    }
}
