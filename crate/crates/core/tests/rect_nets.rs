use holes_core::geom::{body_contains_rect, rect_contains_rect, ConvexBody, OrientedRect, Point};
use holes_core::rect_nets::{
    make_net_params, max_empty_axis_rect, max_empty_axis_rect_oracle, net_contains_witness, quantize_rectangle,
    NetRect, Quantized, RectNet,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random rectangle of the given area inside the body, by rejection.
fn random_rect_in(body: &ConvexBody, area: f64, rho: f64, rng: &mut ChaCha8Rng) -> OrientedRect {
    let (lo, hi) = body.bbox();
    loop {
        let wmin = area / rho;
        let wmax = area.sqrt();
        let w = wmin * (wmax / wmin).powf(rng.gen::<f64>());
        let theta = rng.gen::<f64>() * std::f64::consts::PI;
        let c = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        let r = OrientedRect::new(c, w, area / w, theta).unwrap();
        if body_contains_rect(body, &r) {
            return r;
        }
    }
}

fn completeness(body: ConvexBody, n: u64, eps: f64, cases: usize, seed: u64) {
    let p = make_net_params(n, eps, &body).unwrap();
    let net = RectNet::new(body.clone(), p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let r = random_rect_in(&body, p.area_hi, p.rho, &mut rng);
        let q = quantize_rectangle(&r, &net).unwrap();
        assert!(rect_contains_rect(&r, &q.rect));
        assert_eq!(q.rect.inclination(), p.angle(q.t));
        assert!(q.rect.area() >= (2.0 + 4.0 * eps) * (1.0 - eps / 2.0) * (n as f64).ln() / n as f64);
        let s = (p.area_mid / q.rect.area()).sqrt();
        let mid = Quantized { rect: q.rect.scaled(s), t: q.t };
        let w = net_contains_witness(&mid, &net).unwrap();
        assert!(rect_contains_rect(&r, &w.rect));
        assert!(net.contains(&w));
        assert!((w.rect.area() - p.area_lo).abs() <= 1e-12 * p.area_lo);
    }
}

#[test]
fn net_completeness_unit_square() {
    completeness(ConvexBody::unit_square(), 4096, 0.1, 300, 1);
}

#[test]
fn net_completeness_small_eps_and_hexagon() {
    completeness(ConvexBody::unit_square(), 10_000, 0.05, 200, 2);
    let hex = ConvexBody::regular_polygon(6, 1.0, Point::new(0.0, 0.0), 0.1);
    let (hex, _) = holes_core::geom::normalize_to_unit_area(&hex);
    completeness(hex, 4096, 0.1, 200, 3);
}

#[test]
fn quantize_identity_on_grid_inclination() {
    let sq = ConvexBody::unit_square();
    let p = make_net_params(10_000, 0.1, &sq).unwrap();
    let net = RectNet::new(sq, p);
    let w = 0.02;
    let r = OrientedRect::new(Point::new(0.5, 0.5), w, p.area_hi / w, p.angle(17)).unwrap();
    let q = quantize_rectangle(&r, &net).unwrap();
    assert_eq!(q.t, 17);
    assert_eq!(q.rect, r);
}

#[test]
fn quantize_half_step_area_loss() {
    let sq = ConvexBody::unit_square();
    let p = make_net_params(10_000, 0.1, &sq).unwrap();
    let net = RectNet::new(sq, p);
    for w in [p.area_hi / 0.99, 0.02, p.area_hi.sqrt()] {
        let r = OrientedRect::new(Point::new(0.5, 0.5), w, p.area_hi / w, p.theta0 * 0.5).unwrap();
        let q = quantize_rectangle(&r, &net).unwrap();
        assert_eq!(q.t, 0);
        assert!(q.rect.area() >= p.area_hi * (1.0 - p.epsilon / 2.0));
    }
}

#[test]
fn quantize_rejects_wrong_area_or_escape() {
    let sq = ConvexBody::unit_square();
    let p = make_net_params(10_000, 0.1, &sq).unwrap();
    let net = RectNet::new(sq, p);
    let r = OrientedRect::new(Point::new(0.5, 0.5), 0.05, 0.1, 0.0).unwrap();
    assert!(quantize_rectangle(&r, &net).is_err());
    let out = OrientedRect::new(Point::new(0.0, 0.5), 0.05, p.area_hi / 0.05, 0.0).unwrap();
    assert!(quantize_rectangle(&out, &net).is_err());
}

#[test]
fn witness_on_grid_point_is_cocentred() {
    let sq = ConvexBody::unit_square();
    let p = make_net_params(4096, 0.1, &sq).unwrap();
    let net = RectNet::new(sq, p);
    let (m, t) = (100, 5u64);
    let d = p.level(m);
    let target = NetRect::new(&p, m, t, (0.5 / d.dx) as i64, (0.5 / d.dy) as i64).unwrap();
    let w = p.gamma.powf(m as f64 + 1.5) * p.w0;
    let q = OrientedRect::new(target.rect.center(), w, p.area_mid / w, p.angle(t)).unwrap();
    let got = net_contains_witness(&Quantized { rect: q, t }, &net).unwrap();
    assert_eq!((got.m, got.i, got.j), (m, target.i, target.j));
}

#[test]
fn witness_at_level_boundary() {
    let sq = ConvexBody::unit_square();
    let p = make_net_params(4096, 0.1, &sq).unwrap();
    let net = RectNet::new(sq, p);
    let m = 30;
    let w = p.gamma.powf(m as f64 + 1.5) * p.w0;
    let q = OrientedRect::new(Point::new(0.5, 0.5), w, p.area_mid / w, p.angle(9)).unwrap();
    let got = net_contains_witness(&Quantized { rect: q, t: 9 }, &net).unwrap();
    assert!(got.m == m || got.m == m + 1);
    assert!(rect_contains_rect(&q, &got.rect));
}

#[test]
fn level_counts_within_packing_bound() {
    let sq = ConvexBody::unit_square();
    let p = make_net_params(4096, 0.1, &sq).unwrap();
    let net = RectNet::new(sq, p);
    let total_t = p.theta_count();
    for t in [0, 1, total_t / 8, total_t / 4, total_t / 2, total_t - 1] {
        for m in p.levels().step_by(17) {
            let d = p.level(m);
            let c = net.count_level(t, m) as f64;
            assert!(c <= (1.0 / (d.dx * d.dy)).floor());
            assert!(c <= p.per_level_bound());
        }
    }
}

fn unit() -> OrientedRect {
    OrientedRect::axis(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap()
}

#[test]
fn maxrect_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let k = rng.gen_range(0..=40);
        let pts: Vec<Point> = (0..k).map(|_| Point::new(rng.gen(), rng.gen())).collect();
        let fast = max_empty_axis_rect(&unit(), &pts).unwrap().1;
        assert_eq!(fast, max_empty_axis_rect_oracle(&unit(), &pts).unwrap());
    }
}

#[test]
fn maxrect_matches_oracle_on_lattice_ties() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let k = rng.gen_range(0..=40);
        let pts: Vec<Point> = (0..k)
            .map(|_| Point::new(rng.gen_range(0..=8) as f64 / 8.0, rng.gen_range(0..=8) as f64 / 8.0))
            .collect();
        let fast = max_empty_axis_rect(&unit(), &pts).unwrap().1;
        assert_eq!(fast, max_empty_axis_rect_oracle(&unit(), &pts).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn maxrect_result_is_empty_and_monotone(
        pts in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 0..30),
        extra in (0.0f64..=1.0, 0.0f64..=1.0),
    ) {
        let pts: Vec<Point> = pts.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        let (r, a) = max_empty_axis_rect(&unit(), &pts).unwrap();
        prop_assert!(pts.iter().all(|&p| !r.contains_point_open(p)));
        let mut more = pts.clone();
        more.push(Point::new(extra.0, extra.1));
        prop_assert!(max_empty_axis_rect(&unit(), &more).unwrap().1 <= a);
    }
}
