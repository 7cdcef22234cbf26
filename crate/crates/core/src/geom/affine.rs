use serde::{Deserialize, Serialize};

use super::Point;

/// `p -> linear * p + offset`, with `linear` stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub linear: [[f64; 2]; 2],
    pub offset: Point,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        linear: [[1.0, 0.0], [0.0, 1.0]],
        offset: Point::new(0.0, 0.0),
    };

    pub fn scaling(s: f64) -> Self {
        Self::diagonal(s, s)
    }

    pub fn diagonal(sx: f64, sy: f64) -> Self {
        AffineMap {
            linear: [[sx, 0.0], [0.0, sy]],
            offset: Point::default(),
        }
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        AffineMap {
            linear: [[c, -s], [s, c]],
            offset: Point::default(),
        }
    }

    pub fn translation(v: Point) -> Self {
        AffineMap {
            offset: v,
            ..Self::IDENTITY
        }
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        let m = &self.linear;
        Point::new(
            m[0][0] * p.x + m[0][1] * p.y + self.offset.x,
            m[1][0] * p.x + m[1][1] * p.y + self.offset.y,
        )
    }

    /// Apply only the linear part (for direction vectors).
    #[inline]
    pub fn apply_vector(&self, v: Point) -> Point {
        let m = &self.linear;
        Point::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
    }

    pub fn det(&self) -> f64 {
        let m = &self.linear;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let a = &self.linear;
        let b = &other.linear;
        let mut linear = [[0.0; 2]; 2];
        for (i, row) in linear.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        AffineMap {
            linear,
            offset: self.apply(other.offset),
        }
    }

    /// Inverse map; `None` when the linear part is singular.
    pub fn inverse(&self) -> Option<AffineMap> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let m = &self.linear;
        let linear = [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]];
        let inv = AffineMap {
            linear,
            offset: Point::default(),
        };
        let o = inv.apply_vector(self.offset);
        Some(AffineMap {
            linear,
            offset: -o,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}
