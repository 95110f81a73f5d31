//! Seeded initial conditions: power-law radii, rejection-sampled packings,
//! lattices and Gaussian kinematics.
//!
//! Every sampler draws from a `ChaCha8Rng` seeded with `seed_from_u64`;
//! normals come from `rand_distr::StandardNormal` (ziggurat). Both are pinned
//! through `Cargo.lock`, so a seed reproduces the same configuration across
//! builds and platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::domain::Domain;
use crate::error::{param_err, FloeError, Result};
use crate::Vec2;

pub type FloeRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> FloeRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Inverse CDF of the density `p(r) ∝ r^-exponent` on `[r_min, r_max]` at `u ∈ [0, 1]`.
pub fn powerlaw_quantile(u: f64, r_min: f64, r_max: f64, exponent: f64) -> f64 {
    let k = 1.0 - exponent;
    if k.abs() < 1e-12 {
        return r_min * (r_max / r_min).powf(u);
    }
    let a = r_min.powf(k);
    let b = r_max.powf(k);
    (a + u * (b - a)).powf(1.0 / k).clamp(r_min, r_max)
}

fn check_bounds(r_min: f64, r_max: f64, exponent: f64) -> Result<()> {
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
        return Err(param_err("radius_bounds", format!("need 0 < r_min < r_max, got ({r_min}, {r_max})")));
    }
    if !exponent.is_finite() {
        return Err(param_err("exponent", "must be finite"));
    }
    Ok(())
}

/// Draws `n` radii from the power law using `rng`.
pub fn sample_powerlaw_radii_with(
    rng: &mut impl Rng,
    n: usize,
    r_min: f64,
    r_max: f64,
    exponent: f64,
) -> Result<Vec<f64>> {
    check_bounds(r_min, r_max, exponent)?;
    Ok((0..n).map(|_| powerlaw_quantile(rng.random::<f64>(), r_min, r_max, exponent)).collect())
}

pub fn sample_powerlaw_radii(n: usize, r_min: f64, r_max: f64, exponent: f64, seed: u64) -> Result<Vec<f64>> {
    sample_powerlaw_radii_with(&mut seeded_rng(seed), n, r_min, r_max, exponent)
}

pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

/// Uniform rejection sampling of non-overlapping centers in the
/// minimum-image metric, placing floes in the given order.
pub fn init_nonoverlapping_with(
    rng: &mut impl Rng,
    radii: &[f64],
    domain: &Domain,
    max_attempts: usize,
) -> Result<Vec<Vec2>> {
    let lo = domain.lower();
    let len = domain.lengths();
    let mut placed: Vec<Vec2> = Vec::with_capacity(radii.len());
    for (k, &r) in radii.iter().enumerate() {
        let mut accepted = None;
        for _ in 0..max_attempts {
            let p = domain.wrap(Vec2::new(lo.x + rng.random::<f64>() * len.x, lo.y + rng.random::<f64>() * len.y));
            let clear = placed.iter().zip(radii).all(|(q, &rq)| domain.min_image(p, *q).norm() >= r + rq);
            if clear {
                accepted = Some(p);
                break;
            }
        }
        match accepted {
            Some(p) => placed.push(p),
            None => return Err(FloeError::PackingFailed { placed: k, requested: radii.len() }),
        }
    }
    Ok(placed)
}

pub fn init_nonoverlapping(radii: &[f64], domain: &Domain, seed: u64, max_attempts: usize) -> Result<Vec<Vec2>> {
    init_nonoverlapping_with(&mut seeded_rng(seed), radii, domain, max_attempts)
}

/// Centers of the uniform `nx × ny` partition, row-major with `x` fastest.
pub fn init_lattice(nx: usize, ny: usize, domain: &Domain) -> Result<Vec<Vec2>> {
    if nx == 0 || ny == 0 {
        return Err(param_err("lattice", "nx and ny must be at least 1"));
    }
    let lo = domain.lower();
    let hx = domain.lengths().x / nx as f64;
    let hy = domain.lengths().y / ny as f64;
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            out.push(Vec2::new(lo.x + (i as f64 + 0.5) * hx, lo.y + (j as f64 + 0.5) * hy));
        }
    }
    Ok(out)
}

/// Per-floe `(velocity, spin)` drawn as `mean + sd * N(0, 1)` in the order
/// `vx, vy, omega` for each floe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianKinematics {
    pub mean_velocity: Vec2,
    pub sd_velocity: f64,
    pub mean_omega: f64,
    pub sd_omega: f64,
}

impl GaussianKinematics {
    pub fn sample(&self, rng: &mut impl Rng, n: usize) -> Vec<(Vec2, f64)> {
        (0..n)
            .map(|_| {
                let zx: f64 = rng.sample(StandardNormal);
                let zy: f64 = rng.sample(StandardNormal);
                let zw: f64 = rng.sample(StandardNormal);
                (self.mean_velocity + Vec2::new(zx, zy) * self.sd_velocity, self.mean_omega + self.sd_omega * zw)
            })
            .collect()
    }
}
