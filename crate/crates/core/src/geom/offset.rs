//! Inner parallel bodies: points at distance at least `ω` from the boundary.

use super::{ConvexBody, GeomError, HalfPlane};

/// Intersection of all edge half-planes moved inward by `omega`.
/// `None` when the result has no interior.
pub fn inner_offset(body: &ConvexBody, omega: f64) -> Option<ConvexBody> {
    assert!(omega >= 0.0, "offset distance must be non-negative");
    if omega == 0.0 {
        return Some(body.clone());
    }
    let hs: Vec<HalfPlane> = body
        .unit_half_planes()
        .into_iter()
        .map(|h| HalfPlane {
            normal: h.normal,
            offset: h.offset - omega,
        })
        .collect();
    let out = body.clip_all(&hs)?;
    if out.area() <= 0.0 {
        None
    } else {
        Some(out)
    }
}

fn offset_area(body: &ConvexBody, omega: f64) -> f64 {
    inner_offset(body, omega).map_or(0.0, |b| b.area())
}

/// Finds `ω` with `area(inner_offset(body, ω)) = target_area` by bisection.
pub fn solve_inner_offset(
    body: &ConvexBody,
    target_area: f64,
) -> Result<(f64, ConvexBody), GeomError> {
    let total = body.area();
    if !(target_area > 0.0 && target_area < total) {
        return Err(GeomError::InvalidTarget {
            target: target_area,
            area: total,
        });
    }
    let tol = 1e-13 * total;
    // The inradius is below half the minimal width, hence below the diameter.
    let mut lo = 0.0;
    let mut hi = body.diameter();
    let mut best: Option<(f64, ConvexBody)> = None;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        match inner_offset(body, mid) {
            Some(b) => {
                let a = b.area();
                if (a - target_area).abs() <= tol {
                    return Ok((mid, b));
                }
                if a > target_area {
                    lo = mid;
                } else {
                    hi = mid;
                }
                best = Some((mid, b));
            }
            None => hi = mid,
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    match best {
        Some((w, b)) if (offset_area(body, w) - target_area).abs() <= tol * 10.0 => Ok((w, b)),
        _ => Err(GeomError::NoConvergence("inner offset bisection")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;

    fn tri() -> ConvexBody {
        ConvexBody::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_offsets() {
        let sq = ConvexBody::unit_square();
        let s = inner_offset(&sq, 0.25).unwrap();
        assert!((s.area() - 0.25).abs() < 1e-15);
        assert_eq!(inner_offset(&sq, 0.0).unwrap(), sq);
        assert!(inner_offset(&sq, 0.6).is_none());
        assert!(inner_offset(&sq, 0.5).is_none());
    }

    #[test]
    fn solve_examples() {
        let sq = ConvexBody::unit_square();
        let (w, s) = solve_inner_offset(&sq, 0.25).unwrap();
        assert!((w - 0.25).abs() < 1e-10);
        assert!((s.area() - 0.25).abs() <= 1e-10);

        // 1 - (1 - 2ω)^2 = δ  =>  ω = (1 - sqrt(1-δ))/2 ≈ δ/4
        let delta = 1e-6;
        let (w, _) = solve_inner_offset(&sq, 1.0 - delta).unwrap();
        let exact = (1.0 - (1.0 - delta).sqrt()) / 2.0;
        assert!((w - exact).abs() < 1e-10);
        assert!((w - delta / 4.0).abs() < 1e-9);

        let (w, s) = solve_inner_offset(&tri(), 0.125).unwrap();
        assert!((w - (2.0 - 2f64.sqrt()) / 4.0).abs() < 1e-9);
        assert!((s.area() - 0.125).abs() <= 1e-10);
    }

    #[test]
    fn invalid_targets() {
        let sq = ConvexBody::unit_square();
        assert!(matches!(
            solve_inner_offset(&sq, 0.0),
            Err(GeomError::InvalidTarget { .. })
        ));
        assert!(solve_inner_offset(&sq, 1.0).is_err());
        assert!(solve_inner_offset(&sq, 2.0).is_err());
    }
}
