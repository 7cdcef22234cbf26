use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{log_ratio, HomothetError, HomothetPlacement, Shape};
use crate::geom::{
    clip_polygon, lassak_rectangles, solve_inner_offset, AffineMap, Containment, ConvexBody, HalfPlane, Point,
};
use crate::rect_nets::x_interval;
use crate::sampling::SeedSpec;

/// Lattice indices `i_lo ..= i_hi` of one row `y = jω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetRow {
    pub j: i64,
    pub i_lo: i64,
    pub i_hi: i64,
}

impl NetRow {
    #[inline]
    pub fn len(&self) -> u64 {
        (self.i_hi - self.i_lo + 1) as u64
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.i_hi < self.i_lo
    }
}

/// The family `S_H`, stored row by row in the frame where the circumscribed
/// rectangle of `P` is an axis-parallel square.
///
/// A member is `shrunken_shape + (iω, jω)`; its reference point `(iω, jω)`
/// is the centre of mass of the translate of `P` it was shrunk from.
#[derive(Debug, Clone)]
pub struct HomothetNet {
    pub n: u64,
    pub epsilon: f64,
    pub omega: f64,
    /// `(1+ε) log n / n`, `(1+2ε) log n / n`, `(1+3ε) log n / n`.
    pub area_s: f64,
    pub area_p: f64,
    pub area_l: f64,
    pub shape_id: String,
    /// Area-preserving map into the frame.
    pub frame: AffineMap,
    pub body_frame: ConvexBody,
    /// `P` in the frame, centre of mass at the origin.
    pub translate_shape: ConvexBody,
    /// `s(P)` in the frame, same origin.
    pub shrunken_shape: ConvexBody,
    rows: Vec<NetRow>,
    lattice: Vec<NetRow>,
    inverse: AffineMap,
}

fn bbox_poly(b: &ConvexBody) -> Vec<Point> {
    let (lo, hi) = b.bbox();
    vec![lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)]
}

/// Translations `c` with `shape + c ⊆ body`.
fn feasible_translations(body: &ConvexBody, shape: &ConvexBody) -> Option<Vec<Point>> {
    let mut poly = bbox_poly(body);
    for hp in body.unit_half_planes() {
        let c = HalfPlane {
            normal: hp.normal,
            offset: hp.offset - shape.support(hp.normal),
        };
        poly = clip_polygon(&poly, &c)?;
    }
    Some(poly)
}

/// Rows of lattice points of spacing `omega` in `poly`, with row ends
/// settled by `fits`.
fn lattice_rows(poly: &[Point], omega: f64, fits: impl Fn(Point) -> bool) -> Vec<NetRow> {
    let ymin = poly.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let ymax = poly.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let at = |i: i64, j: i64| Point::new(i as f64 * omega, j as f64 * omega);
    let mut rows = Vec::new();
    let (j0, j1) = ((ymin / omega).floor() as i64 - 1, (ymax / omega).ceil() as i64 + 1);
    for j in j0..=j1 {
        let y = j as f64 * omega;
        let Some((xl, xr)) = x_interval(poly, y.clamp(ymin, ymax)) else {
            continue;
        };
        let (mut lo, mut hi) = ((xl / omega).ceil() as i64, (xr / omega).floor() as i64);
        while lo <= hi && !fits(at(lo, j)) {
            lo += 1;
        }
        while hi >= lo && !fits(at(hi, j)) {
            hi -= 1;
        }
        if lo > hi {
            continue;
        }
        while fits(at(lo - 1, j)) {
            lo -= 1;
        }
        while fits(at(hi + 1, j)) {
            hi += 1;
        }
        rows.push(NetRow { j, i_lo: lo, i_hi: hi });
    }
    rows
}

/// Builds `S_H` for samples of size `n` in the unit-area `body`.
///
/// `L` is scaled to area `(1+3ε) log n / n` and `P` is its inner offset of
/// area `(1+2ε) log n / n`. The frame makes the circumscribed rectangle of
/// `P` a square; `s(P)` is the inner offset of `P` of area `(1+ε) log n / n`
/// at distance `ω`, and members sit on the lattice `ωℤ²`.
pub fn build_homothet_net(body: &ConvexBody, shape: &Shape, n: u64, epsilon: f64) -> Result<HomothetNet, HomothetError> {
    if !(epsilon > 0.0 && epsilon <= 0.1) {
        return Err(HomothetError::InvalidEpsilon(epsilon));
    }
    if n < 16 {
        return Err(HomothetError::TooFewPoints(n));
    }
    let area = body.area();
    if (area - 1.0).abs() > 1e-9 {
        return Err(HomothetError::NotUnitArea(area));
    }
    let l = log_ratio(n);
    let (area_s, area_p, area_l) = ((1.0 + epsilon) * l, (1.0 + 2.0 * epsilon) * l, (1.0 + 3.0 * epsilon) * l);
    if area_l >= area {
        return Err(HomothetError::TargetTooLarge(area_l));
    }
    let l_body = &shape.body;
    let s = (area_l / l_body.area()).sqrt();
    let scaled = l_body.homothet(s, l_body.centroid() * -s);
    let (_, p) = solve_inner_offset(&scaled, area_p)?;
    let q = lassak_rectangles(&p)?.circumscribed;
    let k = (q.height() / q.width()).sqrt();
    let frame = AffineMap::diagonal(k, 1.0 / k).compose(&AffineMap::rotation(-q.inclination()));
    let pf = p.transform(&frame).ok_or(crate::geom::GeomError::InvalidRect("singular frame"))?;
    let translate_shape = pf.translate(-pf.centroid());
    let (omega, shrunken_shape) = solve_inner_offset(&translate_shape, area_s)?;
    let bound = epsilon / 8.0 * l.sqrt();
    if omega < bound {
        return Err(HomothetError::ShapeTooEccentric { omega, bound });
    }
    let body_frame = body.transform(&frame).ok_or(crate::geom::GeomError::InvalidRect("singular frame"))?;
    let inverse = frame.inverse().expect("area-preserving map is invertible");

    let fits = |h: Point| {
        body_frame.contains_point(h, Containment::Closed)
            && shrunken_shape
                .vertices()
                .iter()
                .all(|&v| body_frame.contains_point(v + h, Containment::Closed))
    };
    let rows = match feasible_translations(&body_frame, &shrunken_shape) {
        Some(poly) => lattice_rows(&poly, omega, fits),
        None => Vec::new(),
    };
    let lattice = lattice_rows(body_frame.vertices(), omega, |h| {
        body_frame.contains_point(h, Containment::Closed)
    });
    let net = HomothetNet {
        n,
        epsilon,
        omega,
        area_s,
        area_p,
        area_l,
        shape_id: shape.id.clone(),
        frame,
        body_frame,
        translate_shape,
        shrunken_shape,
        rows,
        lattice,
        inverse,
    };
    let count = net.len();
    if count as f64 > net.size_bound() {
        return Err(HomothetError::NetTooLarge {
            count,
            bound: net.size_bound(),
        });
    }
    Ok(net)
}

/// Result of testing every member of `S_H` against a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetCoverage {
    pub members: u64,
    pub empty: u64,
    /// Up to 16 empty members as `(i, j)`.
    pub witnesses: Vec<(i64, i64)>,
}

fn set_range(bits: &mut [u64], a: usize, b: usize) {
    // Inclusive range.
    let (wa, wb) = (a / 64, b / 64);
    let lo_mask = !0u64 << (a % 64);
    let hi_mask = !0u64 >> (63 - b % 64);
    if wa == wb {
        bits[wa] |= lo_mask & hi_mask;
    } else {
        bits[wa] |= lo_mask;
        for w in &mut bits[wa + 1..wb] {
            *w = !0;
        }
        bits[wb] |= hi_mask;
    }
}

impl HomothetNet {
    /// Number of members.
    pub fn len(&self) -> u64 {
        self.rows.iter().map(NetRow::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[NetRow] {
        &self.rows
    }

    /// Packing bound `(64/ε²)(n / log n)`.
    pub fn size_bound(&self) -> f64 {
        64.0 / (self.epsilon * self.epsilon) / log_ratio(self.n)
    }

    /// `(iω, jω)` in the frame.
    #[inline]
    pub fn lattice_point(&self, i: i64, j: i64) -> Point {
        Point::new(i as f64 * self.omega, j as f64 * self.omega)
    }

    /// `H`: lattice points in the body, in the frame.
    pub fn lattice_points(&self) -> impl Iterator<Item = Point> + '_ {
        self.lattice
            .iter()
            .flat_map(move |r| (r.i_lo..=r.i_hi).map(move |i| self.lattice_point(i, r.j)))
    }

    /// `S_H` as translates of `s(P)` in the frame.
    pub fn placements(&self) -> impl Iterator<Item = HomothetPlacement> + '_ {
        let id = format!("{}/s", self.shape_id);
        self.rows.iter().flat_map(move |r| {
            let id = id.clone();
            (r.i_lo..=r.i_hi).map(move |i| HomothetPlacement {
                scale: 1.0,
                offset: self.lattice_point(i, r.j),
                shape_id: id.clone(),
            })
        })
    }

    pub fn has_member(&self, i: i64, j: i64) -> bool {
        let Some(first) = self.rows.first() else {
            return false;
        };
        let k = j - first.j;
        k >= 0 && (k as usize) < self.rows.len() && {
            let r = &self.rows[k as usize];
            debug_assert_eq!(r.j, j);
            r.i_lo <= i && i <= r.i_hi
        }
    }

    pub fn to_frame(&self, p: Point) -> Point {
        self.frame.apply(p)
    }

    pub fn from_frame(&self, p: Point) -> Point {
        self.inverse.apply(p)
    }

    /// Member `(i, j)` in the original coordinates.
    pub fn member_body(&self, i: i64, j: i64) -> ConvexBody {
        let h = self.lattice_point(i, j);
        self.shrunken_shape
            .translate(h)
            .transform(&self.inverse)
            .expect("area-preserving map keeps orientation")
    }

    /// Marks every member whose open interior holds one of `points`
    /// (original coordinates) and reports the rest.
    pub fn coverage(&self, points: &[Point]) -> NetCoverage {
        let members = self.len();
        let Some(first) = self.rows.first().copied() else {
            return NetCoverage {
                members,
                empty: 0,
                witnesses: Vec::new(),
            };
        };
        let mut starts = Vec::with_capacity(self.rows.len() + 1);
        let mut acc = 0usize;
        for r in &self.rows {
            starts.push(acc);
            acc += r.len() as usize;
        }
        let mut bits = vec![0u64; acc.div_ceil(64)];
        let s = &self.shrunken_shape;
        let (ymin, ymax) = s
            .vertices()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v.y), b.max(v.y)));
        let w = self.omega;
        let mut diff: Vec<Point> = Vec::with_capacity(s.len());
        for &p in points {
            let p = self.frame.apply(p);
            let strict = |i: i64, j: i64| s.contains_point(p - self.lattice_point(i, j), Containment::Open);
            diff.clear();
            diff.extend(s.vertices().iter().map(|&v| p - v));
            let ja = ((p.y - ymax) / w).floor() as i64;
            let jb = ((p.y - ymin) / w).ceil() as i64;
            for j in ja.max(first.j)..=jb.min(first.j + self.rows.len() as i64 - 1) {
                let k = (j - first.j) as usize;
                let row = self.rows[k];
                let y = j as f64 * w;
                let Some((xl, xr)) = x_interval(&diff, y) else {
                    continue;
                };
                let mut lo = ((xl / w).ceil() as i64).max(row.i_lo);
                let mut hi = ((xr / w).floor() as i64).min(row.i_hi);
                while lo <= hi && !strict(lo, j) {
                    lo += 1;
                }
                while hi >= lo && !strict(hi, j) {
                    hi -= 1;
                }
                if lo > hi {
                    continue;
                }
                while lo > row.i_lo && strict(lo - 1, j) {
                    lo -= 1;
                }
                while hi < row.i_hi && strict(hi + 1, j) {
                    hi += 1;
                }
                let base = starts[k] as i64 - row.i_lo;
                set_range(&mut bits, (base + lo) as usize, (base + hi) as usize);
            }
        }
        let mut empty = 0u64;
        let mut witnesses = Vec::new();
        for (k, r) in self.rows.iter().enumerate() {
            for i in r.i_lo..=r.i_hi {
                let b = starts[k] + (i - r.i_lo) as usize;
                if bits[b / 64] >> (b % 64) & 1 == 0 {
                    empty += 1;
                    if witnesses.len() < 16 {
                        witnesses.push((i, r.j));
                    }
                }
            }
        }
        NetCoverage {
            members,
            empty,
            witnesses,
        }
    }
}

/// Outcome of the cover check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub checked: usize,
    pub corner_checks: usize,
    pub failures: usize,
    /// Largest distance from a translate's centre to the lattice point used.
    pub max_gap: f64,
}

/// Checks that translates of `P` inside the body contain the member at the
/// nearest lattice point: every extreme translate plus `trials` uniform ones.
pub fn verify_translate_cover(net: &HomothetNet, trials: usize, seed: SeedSpec) -> Result<CoverReport, HomothetError> {
    let k = &net.body_frame;
    let p = &net.translate_shape;
    let mut report = CoverReport {
        checked: 0,
        corner_checks: 0,
        failures: 0,
        max_gap: 0.0,
    };
    let Some(region) = feasible_translations(k, p).and_then(ConvexBody::from_ccw_cleaned) else {
        return Ok(report);
    };
    let mid = region.centroid();
    let check = |c: Point, report: &mut CoverReport| {
        let t = p.translate(c);
        if !k.contains_body(&t) {
            return false;
        }
        let (i, j) = ((c.x / net.omega).round() as i64, (c.y / net.omega).round() as i64);
        let h = net.lattice_point(i, j);
        report.max_gap = report.max_gap.max(h.dist(c));
        let ok = net.has_member(i, j) && t.contains_body(&net.shrunken_shape.translate(h));
        if !ok {
            report.failures += 1;
        }
        report.checked += 1;
        true
    };
    for &v in region.vertices() {
        // A hair inside, so rounding does not push the translate out of the body.
        if check(v + (mid - v) * 1e-9, &mut report) {
            report.corner_checks += 1;
        }
    }
    let (lo, hi) = region.bbox();
    let mut rng = seed.rng();
    let mut drawn = 0;
    while drawn < trials {
        let c = Point::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y));
        if region.contains_point(c, Containment::Closed) && check(c, &mut report) {
            drawn += 1;
        }
    }
    if report.failures > 0 {
        return Err(HomothetError::CoverageViolation {
            failures: report.failures,
            trials: report.checked,
        });
    }
    Ok(report)
}
