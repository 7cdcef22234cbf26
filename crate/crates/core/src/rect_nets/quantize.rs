use serde::{Deserialize, Serialize};

use super::{NetError, NetRect, RectNet};
use crate::geom::{body_contains_rect, rect_contains_rect, OrientedRect};

const AREA_RTOL: f64 = 1e-9;

/// A rectangle whose inclination is `t · θ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantized {
    pub rect: OrientedRect,
    pub t: u64,
}

/// Inscribed rectangle of `r` whose inclination is rounded down to a
/// multiple of `θ₀`.
///
/// Each side line of `r` is turned clockwise by `φ = θ - ⌊θ/θ₀⌋θ₀` about
/// one of its endpoints; the four turned lines bound a co-centred rectangle
/// with sides `w cos φ - h sin φ` and `h cos φ - w sin φ`.
pub fn quantize_rectangle(r: &OrientedRect, net: &RectNet) -> Result<Quantized, NetError> {
    let p = net.params();
    if (r.area() - p.area_hi).abs() > AREA_RTOL * p.area_hi {
        return Err(NetError::PreconditionViolation(format!(
            "rectangle area {} differs from {}",
            r.area(),
            p.area_hi
        )));
    }
    if !body_contains_rect(net.body(), r) {
        return Err(NetError::PreconditionViolation("rectangle is not inside the body".into()));
    }
    let theta = r.inclination();
    let mut t = (theta / p.theta0).floor() as u64;
    if p.angle(t) > theta {
        t -= 1;
    } else if p.angle(t + 1) <= theta {
        t += 1;
    }
    let t = t.min(p.theta_count() - 1);
    let phi = theta - p.angle(t);
    let (s, c) = phi.sin_cos();
    let (w, h) = (r.width(), r.height());
    let w2 = w * c - h * s;
    let h2 = h * c - w * s;
    if w2 <= 0.0 {
        return Err(NetError::PreconditionViolation("rectangle too thin to quantize".into()));
    }
    let mut q = OrientedRect::new(r.center(), w2, h2, p.angle(t))?;
    // Corners sit on the sides of `r`; back off by rounding until contained.
    let mut shrink = 1.0;
    while !rect_contains_rect(r, &q) {
        shrink *= 1.0 - 1e-13;
        q = OrientedRect::new(r.center(), w2 * shrink, h2 * shrink, p.angle(t))?;
        if shrink < 1.0 - 1e-9 {
            return Err(NetError::PreconditionViolation("quantized rectangle escapes the input".into()));
        }
    }
    Ok(Quantized { rect: q, t })
}

/// Net rectangle inside `q`, taken at the level whose width window holds
/// `w(q)` and at the grid point nearest to the centre of `q`.
pub fn net_contains_witness(q: &Quantized, net: &RectNet) -> Result<NetRect, NetError> {
    let p = net.params();
    let r = &q.rect;
    if (r.area() - p.area_mid).abs() > AREA_RTOL * p.area_mid {
        return Err(NetError::PreconditionViolation(format!(
            "rectangle area {} differs from {}",
            r.area(),
            p.area_mid
        )));
    }
    if r.inclination() != p.angle(q.t) {
        return Err(NetError::PreconditionViolation("inclination is not t·θ0".into()));
    }
    if !body_contains_rect(net.body(), r) {
        return Err(NetError::PreconditionViolation("rectangle is not inside the body".into()));
    }
    let m = p.level_for_width(r.width());
    let top = p.m_levels as i32 - 2;
    for m in [m, m + 1, m - 1] {
        if m < -1 || m > top {
            continue;
        }
        let d = p.level(m);
        let local = r.center().rotate(-p.angle(q.t));
        let i = (local.x / d.dx).round() as i64;
        let j = (local.y / d.dy).round() as i64;
        let cand = NetRect::new(p, m, q.t, i, j)?;
        if rect_contains_rect(r, &cand.rect) && net.contains(&cand) {
            return Ok(cand);
        }
    }
    Err(NetError::WitnessNotFound)
}

/// Uniform shrink about the centre to the given area.
pub(crate) fn shrink_to_area(r: &OrientedRect, area: f64) -> OrientedRect {
    r.scaled((area / r.area()).sqrt())
}

/// The quantize-then-witness chain applied to a rectangle of area `area_hi`.
pub(crate) fn witness_for(r: &OrientedRect, net: &RectNet) -> Result<NetRect, NetError> {
    let qz = quantize_rectangle(r, net)?;
    let mid = Quantized {
        rect: shrink_to_area(&qz.rect, net.params().area_mid),
        t: qz.t,
    };
    net_contains_witness(&mid, net)
}
