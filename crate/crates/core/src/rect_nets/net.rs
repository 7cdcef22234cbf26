use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{LevelDims, NetError, NetParams};
use crate::geom::{body_contains_rect, clip_polygon, ConvexBody, HalfPlane, OrientedRect, Point};

/// Member of the net, addressed by level `m`, rotation `t` and grid indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetRect {
    pub m: i32,
    pub t: u64,
    pub i: i64,
    pub j: i64,
    pub rect: OrientedRect,
}

impl NetRect {
    /// Rectangle centred at `A^t (i Δx, j Δy)` with sides `w` along the
    /// rotated first axis and `h` along the second.
    pub fn new(p: &NetParams, m: i32, t: u64, i: i64, j: i64) -> Result<Self, NetError> {
        let d = p.level(m);
        let a = p.angle(t);
        let c = Point::new(i as f64 * d.dx, j as f64 * d.dy).rotate(a);
        Ok(NetRect {
            m,
            t,
            i,
            j,
            rect: OrientedRect::new(c, d.w, d.h, a)?,
        })
    }
}

/// Grid indices `i_lo ..= i_hi` on row `j` whose rectangles lie in the body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRow {
    pub j: i64,
    pub i_lo: i64,
    pub i_hi: i64,
}

impl LevelRow {
    pub fn len(&self) -> u64 {
        (self.i_hi - self.i_lo + 1).max(0) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.i_hi < self.i_lo
    }
}

/// Lazy view of the net over a body; levels are generated on demand.
#[derive(Debug, Clone)]
pub struct RectNet {
    params: NetParams,
    body: ConvexBody,
}

/// `[lo, hi]` of the horizontal chord of a convex polygon at height `y`.
pub(crate) fn x_interval(poly: &[Point], y: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let n = poly.len();
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        if (a.y - y) * (b.y - y) > 0.0 {
            continue;
        }
        if a.y == b.y {
            lo = lo.min(a.x.min(b.x));
            hi = hi.max(a.x.max(b.x));
        } else {
            let x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Centres at which a `w × h` axis box fits inside the frame body, clipped
/// to the optional polygon `within`.
pub(crate) fn feasible_centers(frame: &ConvexBody, w: f64, h: f64, within: Option<Vec<Point>>) -> Option<Vec<Point>> {
    let mut poly = within.unwrap_or_else(|| {
        let (lo, hi) = frame.bbox();
        vec![lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)]
    });
    for hp in frame.half_planes() {
        let shift = 0.5 * (hp.normal.x.abs() * w + hp.normal.y.abs() * h);
        let c = HalfPlane {
            normal: hp.normal,
            offset: hp.offset - shift,
        };
        poly = clip_polygon(&poly, &c)?;
    }
    Some(poly)
}

impl RectNet {
    pub fn new(body: ConvexBody, params: NetParams) -> Self {
        RectNet { params, body }
    }

    #[inline]
    pub fn params(&self) -> &NetParams {
        &self.params
    }

    #[inline]
    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    /// The body expressed in the frame rotated by `t θ₀`.
    pub fn frame(&self, t: u64) -> Option<ConvexBody> {
        let a = self.params.angle(t);
        ConvexBody::from_ccw_cleaned(self.body.vertices().iter().map(|p| p.rotate(-a)).collect())
    }

    /// Exact membership: the rectangle lies in the closed body.
    pub fn contains(&self, r: &NetRect) -> bool {
        body_contains_rect(&self.body, &r.rect)
    }

    fn member(&self, m: i32, t: u64, i: i64, j: i64) -> bool {
        NetRect::new(&self.params, m, t, i, j).is_ok_and(|r| self.contains(&r))
    }

    /// Rows of the `(m, t)` family. Row ends are settled by the exact test.
    pub fn level_rows(&self, t: u64, m: i32) -> Vec<LevelRow> {
        let Some(frame) = self.frame(t) else {
            return Vec::new();
        };
        let d: LevelDims = self.params.level(m);
        let Some(poly) = feasible_centers(&frame, d.w, d.h, None) else {
            return Vec::new();
        };
        let ymin = poly.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
        let ymax = poly.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
        let mut rows = Vec::new();
        for j in (ymin / d.dy).ceil() as i64..=(ymax / d.dy).floor() as i64 {
            let Some((xl, xr)) = x_interval(&poly, j as f64 * d.dy) else {
                continue;
            };
            let mut lo = (xl / d.dx).ceil() as i64;
            let mut hi = (xr / d.dx).floor() as i64;
            while self.member(m, t, lo - 1, j) {
                lo -= 1;
            }
            while lo <= hi && !self.member(m, t, lo, j) {
                lo += 1;
            }
            while self.member(m, t, hi + 1, j) {
                hi += 1;
            }
            while hi >= lo && !self.member(m, t, hi, j) {
                hi -= 1;
            }
            if lo <= hi {
                rows.push(LevelRow { j, i_lo: lo, i_hi: hi });
            }
        }
        rows
    }

    pub fn count_level(&self, t: u64, m: i32) -> u64 {
        self.level_rows(t, m).iter().map(LevelRow::len).sum()
    }
}

/// A fully enumerated net with its `(m, t)` index.
#[derive(Debug, Clone)]
pub struct MaterializedNet {
    pub params: NetParams,
    pub rects: Vec<NetRect>,
    pub level_index: BTreeMap<(i32, u64), Range<usize>>,
}

/// Enumerates every member; stops with `MaterializationLimit` past `limit`.
pub fn build_rect_net(net: &RectNet, limit: u64) -> Result<MaterializedNet, NetError> {
    let p = *net.params();
    let per_level = p.per_level_bound();
    let mut rects = Vec::new();
    let mut level_index = BTreeMap::new();
    for t in 0..p.theta_count() {
        for m in p.levels() {
            let start = rects.len();
            for row in net.level_rows(t, m) {
                for i in row.i_lo..=row.i_hi {
                    if rects.len() as u64 >= limit {
                        return Err(NetError::MaterializationLimit { limit });
                    }
                    rects.push(NetRect::new(&p, m, t, i, row.j)?);
                }
            }
            let count = (rects.len() - start) as u64;
            if count as f64 > per_level {
                return Err(NetError::NetTooLarge {
                    count,
                    bound: per_level,
                });
            }
            level_index.insert((m, t), start..rects.len());
        }
    }
    if rects.len() as f64 > p.size_bound() {
        return Err(NetError::NetTooLarge {
            count: rects.len() as u64,
            bound: p.size_bound(),
        });
    }
    Ok(MaterializedNet {
        params: p,
        rects,
        level_index,
    })
}

/// One line of the JSON-lines net format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetRecord {
    pub m: i32,
    pub t: u64,
    pub i: i64,
    pub j: i64,
    pub center: Point,
    pub w: f64,
    pub h: f64,
    pub theta: f64,
}

impl From<&NetRect> for NetRecord {
    fn from(r: &NetRect) -> Self {
        NetRecord {
            m: r.m,
            t: r.t,
            i: r.i,
            j: r.j,
            center: r.rect.center(),
            w: r.rect.width(),
            h: r.rect.height(),
            theta: r.rect.inclination(),
        }
    }
}

pub fn write_jsonl<W: Write>(rects: &[NetRect], mut w: W) -> std::io::Result<()> {
    for r in rects {
        serde_json::to_writer(&mut w, &NetRecord::from(r))?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<NetRecord>, NetError> {
    let mut out = Vec::new();
    for (k, line) in r.lines().enumerate() {
        let line = line.map_err(|e| NetError::Malformed(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| NetError::Malformed(format!("line {}: {e}", k + 1)))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checked: usize,
    pub failures: Vec<(usize, String)>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-derives each record from its indices and checks area, containment,
/// inclination and grid position.
pub fn verify_net_records(net: &RectNet, records: &[NetRecord]) -> VerifyReport {
    let p = net.params();
    let mut rep = VerifyReport::default();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    for (k, rec) in records.iter().enumerate() {
        rep.checked += 1;
        if !p.levels().contains(&rec.m) || rec.t >= p.theta_count() {
            rep.failures.push((k, "level or rotation out of range".into()));
            continue;
        }
        let Ok(r) = NetRect::new(p, rec.m, rec.t, rec.i, rec.j) else {
            rep.failures.push((k, "indices do not define a rectangle".into()));
            continue;
        };
        let g = &r.rect;
        if !(close(g.center().x, rec.center.x)
            && close(g.center().y, rec.center.y)
            && close(g.width(), rec.w)
            && close(g.height(), rec.h)
            && close(g.inclination(), rec.theta))
        {
            rep.failures.push((k, "record does not match its grid position".into()));
        } else if (rec.w * rec.h - p.area_lo).abs() > 1e-12 * p.area_lo {
            rep.failures.push((k, "wrong area".into()));
        } else if !net.contains(&r) {
            rep.failures.push((k, "not inside the body".into()));
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rect_nets::make_net_params;

    #[test]
    fn chord_of_square() {
        let sq = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        assert_eq!(x_interval(&sq, 0.5), Some((0.0, 1.0)));
        assert_eq!(x_interval(&sq, 1.5), None);
    }

    #[test]
    fn level_rows_are_exact() {
        let sq = ConvexBody::unit_square();
        let p = make_net_params(64, 0.1, &sq).unwrap();
        let net = RectNet::new(sq, p);
        let mid = p.levels().find(|&m| p.level(m).h < 0.9).unwrap();
        let quarter = (std::f64::consts::FRAC_PI_4 / p.theta0) as u64;
        for (t, m) in [(0u64, mid), (17, mid + 3), (quarter, mid - 1), (p.theta_count() - 1, p.m_levels as i32 - 2)] {
            let d = p.level(m);
            let rows = net.level_rows(t, m);
            assert!(!rows.is_empty());
            for row in &rows {
                for i in row.i_lo..=row.i_hi {
                    assert!(net.contains(&NetRect::new(&p, m, t, i, row.j).unwrap()));
                }
                assert!(!net.contains(&NetRect::new(&p, m, t, row.i_lo - 1, row.j).unwrap()));
                assert!(!net.contains(&NetRect::new(&p, m, t, row.i_hi + 1, row.j).unwrap()));
            }
            let count: u64 = rows.iter().map(LevelRow::len).sum();
            assert!(count as f64 <= 1.0 / (d.dx * d.dy));
        }
    }

    #[test]
    fn jsonl_round_trip_and_verify() {
        let sq = ConvexBody::unit_square();
        let p = make_net_params(64, 0.1, &sq).unwrap();
        let net = RectNet::new(sq, p);
        let rects: Vec<NetRect> = net
            .level_rows(3, 40)
            .iter()
            .flat_map(|r| (r.i_lo..=r.i_hi).map(move |i| (i, r.j)))
            .map(|(i, j)| NetRect::new(&p, 40, 3, i, j).unwrap())
            .collect();
        let mut buf = Vec::new();
        write_jsonl(&rects, &mut buf).unwrap();
        let recs = read_jsonl(&buf[..]).unwrap();
        assert_eq!(recs.len(), rects.len());
        assert!(verify_net_records(&net, &recs).ok());
        let mut bad = recs[0];
        bad.center.x += 1e-3;
        assert!(!verify_net_records(&net, &[bad]).ok());
    }
}
