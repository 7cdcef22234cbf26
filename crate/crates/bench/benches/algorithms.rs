use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use holes_core::geom::{lassak_rectangles, ConvexBody, OrientedRect, Point};
use holes_core::holes::{polymax, strip_quadrilateral};
use holes_core::homothet::{build_homothet_net, max_empty_homothet, SearchOptions, Shape};
use holes_core::occupancy::empty_bin_moments;
use holes_core::rect_nets::{make_net_params, max_empty_axis_rect, quantize_rectangle, RectNet};
use holes_core::sampling::sample_uniform;
use holes_core::SeedSpec;

fn sample(n: usize) -> Vec<Point> {
    sample_uniform(&ConvexBody::unit_square(), n, SeedSpec::new(1, n as u64)).points
}

fn bench_sampling(c: &mut Criterion) {
    let hex = ConvexBody::disk(6);
    c.bench_function("sample_uniform/hexagon/65536", |b| {
        b.iter(|| sample_uniform(&hex, 65_536, SeedSpec::new(0, 0)))
    });
    c.bench_function("empty_bin_moments", |b| b.iter(|| empty_bin_moments(black_box(2171), black_box(10_000))));
}

fn bench_geometry(c: &mut Criterion) {
    let body = ConvexBody::regular_polygon(40, 1.0, Point::new(0.0, 0.0), 0.3);
    c.bench_function("lassak_rectangles/40-gon", |b| b.iter(|| lassak_rectangles(black_box(&body))));
}

fn bench_rectangles(c: &mut Criterion) {
    let unit = OrientedRect::axis(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
    let mut g = c.benchmark_group("max_empty_axis_rect");
    for n in [1_000usize, 10_000] {
        let pts = sample(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &pts, |b, pts| {
            b.iter(|| max_empty_axis_rect(&unit, pts))
        });
    }
    g.finish();
    let sq = ConvexBody::unit_square();
    let net = RectNet::new(sq.clone(), make_net_params(4096, 0.1, &sq).unwrap());
    let r = OrientedRect::new(Point::new(0.5, 0.5), 0.01, 0.4, 0.7).unwrap();
    c.bench_function("quantize_rectangle/4096", |b| b.iter(|| quantize_rectangle(black_box(&r), &net)));
}

fn bench_homothets(c: &mut Criterion) {
    let sq = ConvexBody::unit_square();
    let mut g = c.benchmark_group("max_empty_homothet");
    g.sample_size(10);
    for n in [4096usize, 65_536] {
        let pts = sample(n);
        g.bench_with_input(BenchmarkId::new("square", n), &pts, |b, pts| {
            b.iter(|| max_empty_homothet(&sq, &Shape::square(), pts, SearchOptions::default()))
        });
    }
    g.finish();
    let pts = sample(16_384);
    let net = build_homothet_net(&sq, &Shape::square(), 16_384, 0.1).unwrap();
    let mut g = c.benchmark_group("homothet_net");
    g.sample_size(10);
    g.bench_function("build/16384", |b| b.iter(|| build_homothet_net(&sq, &Shape::square(), 16_384, 0.1)));
    g.bench_function("coverage/16384", |b| b.iter(|| net.coverage(&pts)));
    g.finish();
}

fn bench_holes(c: &mut Criterion) {
    let mut g = c.benchmark_group("polymax");
    g.sample_size(10);
    for n in [200usize, 10_000] {
        let pts = sample(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &pts, |b, pts| b.iter(|| polymax(pts)));
    }
    g.finish();
    let pts = sample(100_000);
    c.bench_function("strip_quadrilateral/100000", |b| b.iter(|| strip_quadrilateral(&pts, 0.5, 0.2)));
}

criterion_group!(benches, bench_sampling, bench_geometry, bench_rectangles, bench_homothets, bench_holes);
criterion_main!(benches);
