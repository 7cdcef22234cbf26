use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::NetError;
use crate::geom::ConvexBody;

/// Largest admissible `ε`.
pub const EPSILON_CAP: f64 = 0.1;
/// Smallest admissible sample size.
pub const MIN_N: u64 = 16;

/// Parameters of the rectangle net for a body of area 1 and `n` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetParams {
    pub n: u64,
    pub epsilon: f64,
    pub rho: f64,
    pub theta0: f64,
    pub gamma: f64,
    pub w0: f64,
    #[serde(rename = "M")]
    pub m_levels: u32,
    pub area_lo: f64,
    pub area_mid: f64,
    pub area_hi: f64,
}

/// Side lengths and grid spacings of one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelDims {
    pub m: i32,
    /// Side along the grid's first axis (the nominal width).
    pub w: f64,
    /// Side along the grid's second axis (the nominal height).
    pub h: f64,
    pub dx: f64,
    pub dy: f64,
}

pub fn make_net_params(n: u64, epsilon: f64, body: &ConvexBody) -> Result<NetParams, NetError> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(NetError::InvalidEpsilon(epsilon));
    }
    if epsilon > EPSILON_CAP {
        return Err(NetError::EpsilonTooLarge(epsilon));
    }
    if n < MIN_N {
        return Err(NetError::TooFewPoints(n));
    }
    let area = body.area();
    if (area - 1.0).abs() > 1e-9 {
        return Err(NetError::NotUnitArea(area));
    }
    assert!(
        (2.0 + 4.0 * epsilon) * (1.0 - epsilon / 2.0) > 2.0 + 2.0 * epsilon,
        "quantization area inequality fails at epsilon = {epsilon}"
    );
    let nf = n as f64;
    let l = nf.ln() / nf;
    let rho = body.diameter();
    let theta0 = epsilon * (2.0 + 4.0 * epsilon) * l / (4.0 * rho * rho);
    let gamma = ((2.0 + 2.0 * epsilon) / (2.0 + epsilon)).cbrt();
    let w0 = (2.0 + 2.0 * epsilon) * l / rho;
    let area_mid = (2.0 + 2.0 * epsilon) * l;
    let target = area_mid.sqrt();
    let m_levels = if w0 >= target {
        0
    } else {
        let mut m = ((target / w0).ln() / gamma.ln()).ceil().max(0.0) as i32;
        while m > 0 && gamma.powi(m - 1) * w0 >= target {
            m -= 1;
        }
        while gamma.powi(m) * w0 < target {
            m += 1;
        }
        m as u32
    };
    Ok(NetParams {
        n,
        epsilon,
        rho,
        theta0,
        gamma,
        w0,
        m_levels,
        area_lo: (2.0 + epsilon) * l,
        area_mid,
        area_hi: (2.0 + 4.0 * epsilon) * l,
    })
}

impl NetParams {
    /// Number of admissible rotations: integers `t` in `[0, π/θ₀)`.
    pub fn theta_count(&self) -> u64 {
        (PI / self.theta0).ceil() as u64
    }

    /// Levels `-1 ..= M-2`.
    pub fn levels(&self) -> std::ops::RangeInclusive<i32> {
        -1..=(self.m_levels as i32 - 2)
    }

    pub fn level(&self, m: i32) -> LevelDims {
        let g = self.gamma;
        LevelDims {
            m,
            w: g.powi(m) * self.w0,
            h: self.rho / g.powi(m + 3),
            dx: g.powi(m) * (g - 1.0) * self.w0 / 2.0,
            dy: self.rho * (g - 1.0) / (2.0 * g.powi(m + 3)),
        }
    }

    #[inline]
    pub fn angle(&self, t: u64) -> f64 {
        t as f64 * self.theta0
    }

    /// Packing bound on the rectangles of one `(m, t)` family.
    pub fn per_level_bound(&self) -> f64 {
        let g = self.gamma;
        let nf = self.n as f64;
        4.0 * g.powi(3) * nf / ((2.0 + 2.0 * self.epsilon) * (g - 1.0).powi(2) * nf.ln())
    }

    /// `M · ⌈π/θ₀⌉ · per_level_bound`.
    pub fn size_bound(&self) -> f64 {
        self.m_levels as f64 * self.theta_count() as f64 * self.per_level_bound()
    }

    /// Level whose width window `[γ^{m+1} w₀, γ^{m+2} w₀]` holds `w`, ties to the lower level.
    pub fn level_for_width(&self, w: f64) -> i32 {
        let raw = ((w / self.w0).ln() / self.gamma.ln()).ceil() as i32 - 2;
        raw.clamp(-1, self.m_levels as i32 - 2)
    }
}
