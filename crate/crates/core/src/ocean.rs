//! Prescribed ocean surface velocity fields.

use serde::{Deserialize, Serialize};

use crate::domain::wrap_scalar;
use crate::error::{param_err, Result};
use crate::Vec2;

/// Ocean surface velocity `u_o(x)` together with its curl.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OceanField {
    Constant {
        velocity: [f64; 2],
    },
    /// Swirling flow `u_o = (-y s, x s)` with
    /// `s = (q - 4)/32 * exp(-q (q - 8) / 8)` and `q = x^2 + y^2`.
    Rotational,
    Sampled(SampledGrid),
}

impl OceanField {
    pub fn constant(u: Vec2) -> Self {
        OceanField::Constant { velocity: [u.x, u.y] }
    }

    pub fn velocity(&self, p: Vec2) -> Vec2 {
        match self {
            OceanField::Constant { velocity } => Vec2::new(velocity[0], velocity[1]),
            OceanField::Rotational => {
                let s = swirl(p.x * p.x + p.y * p.y);
                Vec2::new(-p.y * s, p.x * s)
            }
            OceanField::Sampled(grid) => grid.velocity(p),
        }
    }

    /// Scalar (z-component) curl of the velocity field.
    pub fn curl(&self, p: Vec2) -> f64 {
        match self {
            OceanField::Constant { .. } => 0.0,
            OceanField::Rotational => {
                // curl = 2 s + 2 q ds/dq
                let q = p.x * p.x + p.y * p.y;
                2.0 * swirl(q) + 2.0 * q * swirl_dq(q)
            }
            OceanField::Sampled(grid) => grid.curl(p),
        }
    }
}

fn swirl(q: f64) -> f64 {
    (q - 4.0) / 32.0 * (-q * (q - 8.0) / 8.0).exp()
}

fn swirl_dq(q: f64) -> f64 {
    let e = (-q * (q - 8.0) / 8.0).exp();
    e / 32.0 * (1.0 - (q - 4.0) * (q - 4.0) / 4.0)
}

/// Nodal velocities on a periodic uniform grid; node `(i, j)` sits at
/// `lower + (i dx, j dy)` and values are stored row-major (`j * nx + i`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampledGrid {
    pub lower: [f64; 2],
    pub upper: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub ux: Vec<f64>,
    pub uy: Vec<f64>,
}

impl SampledGrid {
    pub fn new(lower: [f64; 2], upper: [f64; 2], nx: usize, ny: usize, ux: Vec<f64>, uy: Vec<f64>) -> Result<Self> {
        let grid = Self { lower, upper, nx, ny, ux, uy };
        grid.validate()?;
        Ok(grid)
    }

    /// Samples any field onto the grid nodes.
    pub fn sample(lower: [f64; 2], upper: [f64; 2], nx: usize, ny: usize, field: &OceanField) -> Result<Self> {
        let mut grid = Self { lower, upper, nx, ny, ux: vec![0.0; nx * ny], uy: vec![0.0; nx * ny] };
        grid.validate()?;
        for j in 0..ny {
            for i in 0..nx {
                let u = field.velocity(grid.node(i, j));
                grid.ux[j * nx + i] = u.x;
                grid.uy[j * nx + i] = u.y;
            }
        }
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(param_err("ocean.grid", "need at least 2 nodes per axis"));
        }
        if self.ux.len() != self.nx * self.ny || self.uy.len() != self.nx * self.ny {
            return Err(param_err("ocean.grid", "value count must equal nx * ny"));
        }
        if !(self.upper[0] > self.lower[0] && self.upper[1] > self.lower[1]) {
            return Err(param_err("ocean.grid", "upper must exceed lower"));
        }
        Ok(())
    }

    fn spacing(&self) -> (f64, f64) {
        ((self.upper[0] - self.lower[0]) / self.nx as f64, (self.upper[1] - self.lower[1]) / self.ny as f64)
    }

    fn node(&self, i: usize, j: usize) -> Vec2 {
        let (dx, dy) = self.spacing();
        Vec2::new(self.lower[0] + i as f64 * dx, self.lower[1] + j as f64 * dy)
    }

    fn idx(&self, i: isize, j: isize) -> usize {
        let i = i.rem_euclid(self.nx as isize) as usize;
        let j = j.rem_euclid(self.ny as isize) as usize;
        j * self.nx + i
    }

    /// Bilinear weights: returns base node and fractional offsets.
    fn locate(&self, p: Vec2) -> (isize, isize, f64, f64) {
        let (dx, dy) = self.spacing();
        let x = wrap_scalar(p.x, self.lower[0], self.upper[0]) - self.lower[0];
        let y = wrap_scalar(p.y, self.lower[1], self.upper[1]) - self.lower[1];
        let fx = x / dx;
        let fy = y / dy;
        let i0 = fx.floor();
        let j0 = fy.floor();
        (i0 as isize, j0 as isize, fx - i0, fy - j0)
    }

    fn bilinear(&self, p: Vec2, nodal: impl Fn(usize) -> f64) -> f64 {
        let (i, j, tx, ty) = self.locate(p);
        let f00 = nodal(self.idx(i, j));
        let f10 = nodal(self.idx(i + 1, j));
        let f01 = nodal(self.idx(i, j + 1));
        let f11 = nodal(self.idx(i + 1, j + 1));
        (1.0 - tx) * (1.0 - ty) * f00 + tx * (1.0 - ty) * f10 + (1.0 - tx) * ty * f01 + tx * ty * f11
    }

    pub fn velocity(&self, p: Vec2) -> Vec2 {
        Vec2::new(self.bilinear(p, |k| self.ux[k]), self.bilinear(p, |k| self.uy[k]))
    }

    /// Central-difference nodal curl, interpolated bilinearly.
    pub fn curl(&self, p: Vec2) -> f64 {
        let (dx, dy) = self.spacing();
        self.bilinear(p, |k| {
            let i = (k % self.nx) as isize;
            let j = (k / self.nx) as isize;
            let duy_dx = (self.uy[self.idx(i + 1, j)] - self.uy[self.idx(i - 1, j)]) / (2.0 * dx);
            let dux_dy = (self.ux[self.idx(i, j + 1)] - self.ux[self.idx(i, j - 1)]) / (2.0 * dy);
            duy_dx - dux_dy
        })
    }
}
