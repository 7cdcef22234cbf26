use holes_core::geom::{ConvexBody, Point};
use holes_core::holes::{
    convex_hole_bounds, polymax, polymax_oracle, strip_count, strip_quadrilateral, BoundsOptions, ConvexChain,
};
use holes_core::homothet::{SearchOptions, Shape};
use holes_core::rect_nets::CertifyOptions;
use holes_core::sampling::sample_uniform;
use holes_core::SeedSpec;
use proptest::prelude::*;

/// Twice the signed area of `abc` in exact integer arithmetic.
fn cross_i(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn to_i(p: Point) -> (i64, i64) {
    (p.x as i64, p.y as i64)
}

/// Checks convex position and open emptiness of a chain on integer points,
/// and returns twice its area.
fn verify_integer_chain(chain: &ConvexChain, pts: &[(i64, i64)]) -> i64 {
    let v: Vec<(i64, i64)> = chain.vertices.iter().map(|&p| to_i(p)).collect();
    let k = v.len();
    assert!(k >= 3);
    for i in 0..k {
        assert!(cross_i(v[i], v[(i + 1) % k], v[(i + 2) % k]) > 0, "not convex: {v:?}");
        assert!(pts.contains(&v[i]));
    }
    for &q in pts {
        assert!(
            (0..k).any(|i| cross_i(v[i], v[(i + 1) % k], q) <= 0),
            "{q:?} inside {v:?}"
        );
    }
    (1..k - 1).map(|i| cross_i(v[0], v[i], v[i + 1])).sum()
}

fn grid_points(raw: &[(i64, i64)]) -> Vec<Point> {
    raw.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect()
}

#[test]
fn dp_matches_oracle_on_random_ten_point_sets() {
    let sq = ConvexBody::unit_square();
    for s in 0..300 {
        let pts = sample_uniform(&sq, 10, SeedSpec::new(11, s)).points;
        let r = polymax(&pts).unwrap();
        assert_eq!(r.area, polymax_oracle(&pts).unwrap(), "seed {s}");
        assert!(r.exact);
        assert!(r.chain.is_convex());
        assert_eq!(r.chain.open_interior_hits(&pts), 0);
    }
}

#[test]
fn windowed_mode_returns_a_verified_hole() {
    let sq = ConvexBody::unit_square();
    let n = 3000;
    let pts = sample_uniform(&sq, n, SeedSpec::new(12, 0)).points;
    let r = polymax(&pts).unwrap();
    assert!(!r.exact);
    assert!(r.chain.is_convex());
    assert_eq!(r.chain.open_interior_hits(&pts), 0);
    // A random set of this size has an empty triangle far above 1/n.
    assert!(r.area > (n as f64).ln() / n as f64, "{}", r.area);
}

#[test]
fn strip_quadrilaterals_pass_independent_checks() {
    let sq = ConvexBody::unit_square();
    let (eps, delta) = (0.5, 0.3);
    let mut found = 0;
    for s in 0..40 {
        let n = 20_000;
        let pts = sample_uniform(&sq, n, SeedSpec::new(13, s)).points;
        let r = strip_quadrilateral(&pts, eps, delta).unwrap();
        let d = &r.diagnostics;
        assert_eq!(d.violations, 0);
        assert_eq!(r.decomposition.t, strip_count(n, eps));
        assert_eq!(d.q, d.p.saturating_sub(2) / 4);
        assert_eq!(d.events.len(), d.q);
        for &e in &r.decomposition.empty_indices {
            let (x0, x1) = r.decomposition.strip(e);
            assert!(pts.iter().all(|p| !(p.x > x0 && p.x < x1)));
        }
        if let Some(quad) = &r.quad {
            found += 1;
            let v = &quad.vertices;
            let k = v.len();
            let cross = |a: Point, b: Point, c: Point| (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
            assert!((0..k).all(|i| cross(v[i], v[(i + 1) % k], v[(i + 2) % k]) > 0.0));
            assert!(pts.iter().all(|&q| (0..k).any(|i| cross(v[i], v[(i + 1) % k], q) <= 0.0)));
            let shoelace: f64 = 0.5 * (0..k).map(|i| v[i].x * v[(i + 1) % k].y - v[(i + 1) % k].x * v[i].y).sum::<f64>();
            assert!(shoelace >= (1.0 - 2.0 * delta) * (1.0 - eps) * (n as f64).ln() / n as f64);
            assert!((shoelace - r.area).abs() < 1e-12);
        }
    }
    assert!(found > 0);
}

#[test]
fn hole_bounds_are_ordered_and_tight_below() {
    let sq = ConvexBody::unit_square();
    let n = 2000;
    let pts = sample_uniform(&sq, n, SeedSpec::new(14, 0)).points;
    let opts = BoundsOptions {
        certify: CertifyOptions { work_budget: 50_000_000 },
        search: SearchOptions::default(),
        shapes: vec![Shape::square(), Shape::disk(), Shape::rect(2.0)],
        polymax: true,
    };
    let b = convex_hole_bounds(&sq, &pts, 0.1, &opts);
    assert!(b.lower <= b.upper);
    assert_eq!(b.homothets.len(), 3);
    let best = b.homothets.iter().map(|h| h.1).fold(b.polymax.unwrap(), f64::max);
    assert_eq!(b.lower, best);
    assert!(b.lower * n as f64 / (n as f64).ln() > 0.7);
    assert_eq!(b.certified, b.upper.is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn dp_matches_oracle_with_degeneracies(raw in prop::collection::vec((0i64..6, 0i64..6), 3..=12)) {
        let pts = grid_points(&raw);
        let r = polymax(&pts).unwrap();
        let o = polymax_oracle(&pts).unwrap();
        prop_assert_eq!(r.area, o);
        if !r.degenerate {
            let twice = verify_integer_chain(&r.chain, &raw);
            prop_assert_eq!(twice as f64, 2.0 * r.area);
        } else {
            prop_assert_eq!(r.area, 0.0);
        }
    }

    #[test]
    fn extra_point_only_helps_as_a_vertex(
        raw in prop::collection::vec((0i64..40, 0i64..40), 3..=11),
        extra in (0i64..40, 0i64..40),
    ) {
        let pts = grid_points(&raw);
        let before = polymax(&pts).unwrap();
        let mut more = pts.clone();
        let q = Point::new(extra.0 as f64, extra.1 as f64);
        more.push(q);
        let after = polymax(&more).unwrap();
        if !after.chain.vertices.contains(&q) {
            prop_assert!(after.area <= before.area);
        }
        prop_assert!(after.area >= 0.0);
    }
}
