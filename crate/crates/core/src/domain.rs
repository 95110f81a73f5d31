//! Rectangular simulation box with optional periodicity per axis.

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Result};
use crate::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    lower: [f64; 2],
    upper: [f64; 2],
    periodic: [bool; 2],
}

impl Domain {
    pub fn new(lower: [f64; 2], upper: [f64; 2], periodic: [bool; 2]) -> Result<Self> {
        for axis in 0..2 {
            if !(lower[axis].is_finite() && upper[axis].is_finite()) {
                return Err(param_err("domain", "bounds must be finite"));
            }
            if upper[axis] <= lower[axis] {
                return Err(param_err(
                    "domain",
                    format!("upper[{axis}] = {} must exceed lower[{axis}] = {}", upper[axis], lower[axis]),
                ));
            }
        }
        Ok(Self { lower, upper, periodic })
    }

    /// The doubly periodic square [-pi, pi]^2.
    pub fn periodic_square_pi() -> Self {
        use std::f64::consts::PI;
        Self { lower: [-PI, -PI], upper: [PI, PI], periodic: [true, true] }
    }

    /// A non-periodic box; positions may leave it freely.
    pub fn open(lower: [f64; 2], upper: [f64; 2]) -> Result<Self> {
        Self::new(lower, upper, [false, false])
    }

    pub fn lower(&self) -> Vec2 {
        Vec2::new(self.lower[0], self.lower[1])
    }

    pub fn upper(&self) -> Vec2 {
        Vec2::new(self.upper[0], self.upper[1])
    }

    pub fn periodic(&self) -> [bool; 2] {
        self.periodic
    }

    pub fn is_fully_periodic(&self) -> bool {
        self.periodic[0] && self.periodic[1]
    }

    pub fn lengths(&self) -> Vec2 {
        Vec2::new(self.upper[0] - self.lower[0], self.upper[1] - self.lower[1])
    }

    pub fn area(&self) -> f64 {
        let l = self.lengths();
        l.x * l.y
    }

    /// Minimum-image displacement `b - a`.
    ///
    /// On periodic axes each component is shifted by whole periods so its
    /// magnitude is at most half the box length. The rule is odd in its
    /// argument, so `min_image(a, b) == -min_image(b, a)` bit for bit.
    pub fn min_image(&self, a: Vec2, b: Vec2) -> Vec2 {
        let mut d = b - a;
        for axis in 0..2 {
            if self.periodic[axis] {
                let len = self.upper[axis] - self.lower[axis];
                d[axis] -= len * (d[axis] / len).round();
            }
        }
        d
    }

    /// Wraps a position into `[lower, upper)` on periodic axes.
    pub fn wrap(&self, p: Vec2) -> Vec2 {
        let mut out = p;
        for axis in 0..2 {
            if self.periodic[axis] {
                out[axis] = wrap_scalar(p[axis], self.lower[axis], self.upper[axis]);
            }
        }
        out
    }

    /// True when `p` lies inside the half-open box on every periodic axis.
    pub fn contains_wrapped(&self, p: Vec2) -> bool {
        (0..2).all(|axis| !self.periodic[axis] || (p[axis] >= self.lower[axis] && p[axis] < self.upper[axis]))
    }
}

pub(crate) fn wrap_scalar(x: f64, lower: f64, upper: f64) -> f64 {
    let len = upper - lower;
    let r = (x - lower).rem_euclid(len);
    // rem_euclid can round up to exactly `len` for tiny negative inputs
    if r >= len {
        lower
    } else {
        lower + r
    }
}

/// Wraps an angle into [0, 2pi).
pub fn wrap_angle(theta: f64) -> f64 {
    wrap_scalar(theta, 0.0, std::f64::consts::TAU)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn min_image_through_boundary() {
        let dom = Domain::periodic_square_pi();
        let d = dom.min_image(Vec2::new(-3.0, 0.0), Vec2::new(3.0, 0.0));
        assert_relative_eq!(d.x, 6.0 - 2.0 * PI, epsilon = 1e-15);
        assert_eq!(d.y, 0.0);
        assert_relative_eq!(d.norm(), 2.0 * PI - 6.0, epsilon = 1e-15);
    }

    #[test]
    fn min_image_identity_and_open_box() {
        let dom = Domain::periodic_square_pi();
        let a = Vec2::new(0.3, -1.2);
        assert_eq!(dom.min_image(a, a), Vec2::zeros());

        let open = Domain::open([-PI, -PI], [PI, PI]).unwrap();
        let d = open.min_image(Vec2::zeros(), Vec2::new(1.0, 1.0));
        assert_eq!(d, Vec2::new(1.0, 1.0));
        assert_relative_eq!(d.norm(), 2f64.sqrt());
    }

    #[test]
    fn wrap_stays_half_open() {
        let dom = Domain::periodic_square_pi();
        let p = dom.wrap(Vec2::new(PI, -PI - 1e-17));
        assert!(dom.contains_wrapped(p));
        assert_eq!(p.x, -PI);
        let q = dom.wrap(Vec2::new(7.0, -7.0));
        assert_relative_eq!(q.x, 7.0 - 2.0 * PI, epsilon = 1e-15);
        assert_relative_eq!(q.y, -7.0 + 2.0 * PI, epsilon = 1e-15);
        assert!(wrap_angle(-1e-18) < std::f64::consts::TAU);
    }

    #[test]
    fn rejects_inverted_box() {
        assert!(Domain::new([0.0, 0.0], [0.0, 1.0], [true, true]).is_err());
    }
}
