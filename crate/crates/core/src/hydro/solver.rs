//! Forward-Euler step of the closed continuum system
//! `∂ρ/∂t + ∇·(ρu) = 0`, `∂(ρu)/∂t + ∇·(ρu⊗u) = ᾱ(u_o−u)|u_o−u|`,
//! `∂s/∂t + ∇·(s u) = β̄(∇×u_o/2 − ω̄)|∇×u_o/2 − ω̄|` with `s = r²ρ ω̄`.
//!
//! The Galerkin terms are written in difference form,
//! `M dU_i/dt = −Σ_j C_ij·(F_j − F_i) − ε Σ_j K_ij (U_j − U_i) + M S_i`,
//! which is identical to the plain assembly (rows of `C` and `K` sum to zero)
//! but keeps uniform states exactly stationary. `ε = c_art h |u|_max`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mesh::PeriodicMesh;
use crate::error::{param_err, FloeError, Result};
use crate::floe::FloeParams;
use crate::material::MaterialParams;
use crate::ocean::OceanField;
use crate::particle::drag_coeffs;
use crate::Vec2;

pub const CFL_LIMIT: f64 = 0.5;

/// Nodal conserved variables.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFields {
    pub nx: usize,
    pub ny: usize,
    pub rho: Vec<f64>,
    /// `ρu`.
    pub momentum: Vec<Vec2>,
    /// `ρ_I ω̄` with `ρ_I = r_floe² ρ`.
    pub spin: Vec<f64>,
    pub floe_radius: f64,
    pub rho_floor: f64,
}

impl GridFields {
    pub fn uniform(mesh: &PeriodicMesh, rho: f64, velocity: Vec2, omega: f64, floe_radius: f64) -> Self {
        let n = mesh.len();
        let rho_i = floe_radius * floe_radius * rho;
        Self {
            nx: mesh.nx(),
            ny: mesh.ny(),
            rho: vec![rho; n],
            momentum: vec![velocity * rho; n],
            spin: vec![rho_i * omega; n],
            floe_radius,
            rho_floor: DEFAULT_RHO_FLOOR,
        }
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// `u = q/ρ`, reported as zero where `ρ <= ρ_floor`.
    pub fn velocity(&self, k: usize) -> Vec2 {
        if self.rho[k] > self.rho_floor {
            self.momentum[k] / self.rho[k]
        } else {
            Vec2::zeros()
        }
    }

    /// `ω̄ = s/ρ_I`, reported as zero where `ρ <= ρ_floor`.
    pub fn omega(&self, k: usize) -> f64 {
        if self.rho[k] > self.rho_floor {
            self.spin[k] / (self.floe_radius * self.floe_radius * self.rho[k])
        } else {
            0.0
        }
    }

    pub fn max_speed(&self) -> f64 {
        (0..self.len()).map(|k| self.velocity(k).norm()).fold(0.0, f64::max)
    }

    fn check(&self, mesh: &PeriodicMesh) -> Result<()> {
        if self.nx != mesh.nx()
            || self.ny != mesh.ny()
            || self.len() != mesh.len()
            || self.momentum.len() != mesh.len()
            || self.spin.len() != mesh.len()
        {
            return Err(FloeError::GridMismatch(format!(
                "fields {}x{} on a {}x{} mesh",
                self.nx,
                self.ny,
                mesh.nx(),
                mesh.ny()
            )));
        }
        Ok(())
    }
}

pub const DEFAULT_RHO_FLOOR: f64 = 1e-10;

/// How continuum drag coefficients are derived from the floe drag law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DragConvention {
    /// `ᾱ = ρ_ref α/m`, `β̄ = ρ_ref β/m`: the monokinetic value of `∫αF`.
    #[default]
    Integral,
    /// `ᾱ = α`, `β̄ = β`.
    Raw,
}

/// `(ᾱ, β̄)` for a population of identical floes.
pub fn continuum_drag_from_particles(
    materials: &MaterialParams,
    params: &[FloeParams],
    rho_ref: f64,
    convention: DragConvention,
) -> Result<(f64, f64)> {
    let first = params.first().ok_or_else(|| param_err("population", "empty"))?;
    if let Some(other) = params.iter().find(|p| *p != first) {
        return Err(FloeError::HeterogeneousPopulation(format!(
            "found r={}, h={} next to r={}, h={}",
            other.radius(),
            other.thickness(),
            first.radius(),
            first.thickness()
        )));
    }
    let d = drag_coeffs(first, materials);
    Ok(match convention {
        DragConvention::Integral => (rho_ref * d.alpha / first.mass(), rho_ref * d.beta / first.mass()),
        DragConvention::Raw => (d.alpha, d.beta),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydroConfig {
    pub dt: f64,
    pub t_end: f64,
    pub alpha_bar: f64,
    pub beta_bar: f64,
    pub c_art: f64,
}

impl HydroConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(param_err("dt", "must be positive"));
        }
        if !(self.t_end >= 0.0) {
            return Err(param_err("t_end", "must be non-negative"));
        }
        if !(self.alpha_bar >= 0.0 && self.beta_bar >= 0.0) {
            return Err(param_err("drag", "continuum drag coefficients must be non-negative"));
        }
        if !(self.c_art >= 0.0) {
            return Err(param_err("c_art", "must be non-negative"));
        }
        Ok(())
    }
}

/// Ocean velocity and half-curl sampled at the mesh nodes.
#[derive(Debug, Clone)]
pub struct NodalOcean {
    pub velocity: Vec<Vec2>,
    pub half_curl: Vec<f64>,
}

impl NodalOcean {
    pub fn sample(ocean: &OceanField, mesh: &PeriodicMesh) -> Self {
        let (velocity, half_curl) = (0..mesh.len())
            .map(|k| {
                let p = mesh.node_position(k);
                (ocean.velocity(p), 0.5 * ocean.curl(p))
            })
            .unzip();
        Self { velocity, half_curl }
    }
}

/// Advances the fields by one step of `config.dt`.
pub fn hydro_step(
    fields: &GridFields,
    ocean: &NodalOcean,
    config: &HydroConfig,
    mesh: &PeriodicMesh,
) -> Result<GridFields> {
    fields.check(mesh)?;
    let u_max = fields.max_speed();
    let h = mesh.h_min();
    let courant = config.dt * u_max / h;
    if courant > CFL_LIMIT {
        return Err(FloeError::CflViolation { courant, limit: CFL_LIMIT, suggested_dt: CFL_LIMIT * h / u_max });
    }
    let eps = config.c_art * h * u_max;
    let n = mesh.len();
    let u: Vec<Vec2> = (0..n).map(|k| fields.velocity(k)).collect();
    let r2 = fields.floe_radius * fields.floe_radius;
    let scale = config.dt / mesh.lumped_mass();

    let updated: Vec<(f64, Vec2, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut d_rho = 0.0;
            let mut d_q = Vec2::zeros();
            let mut d_s = 0.0;
            let (rho_i, q_i, s_i, u_i) = (fields.rho[i], fields.momentum[i], fields.spin[i], u[i]);
            for c in mesh.couplings(i) {
                let j = c.node;
                let (rho_j, q_j, s_j, u_j) = (fields.rho[j], fields.momentum[j], fields.spin[j], u[j]);
                d_rho -= c.c.dot(&(q_j - q_i)) + eps * c.k * (rho_j - rho_i);
                d_q -= Vec2::new(c.c.dot(&(u_j * q_j.x - u_i * q_i.x)), c.c.dot(&(u_j * q_j.y - u_i * q_i.y)))
                    + (q_j - q_i) * (eps * c.k);
                d_s -= c.c.dot(&(u_j * s_j - u_i * s_i)) + eps * c.k * (s_j - s_i);
            }
            let mut rho = rho_i + scale * d_rho;
            let mut q = q_i + scale * d_q;
            let mut s = s_i + scale * d_s;
            if rho_i > fields.rho_floor {
                let slip = ocean.velocity[i] - u_i;
                q += slip * (config.dt * config.alpha_bar * slip.norm());
                let spin_slip = ocean.half_curl[i] - s_i / (r2 * rho_i);
                s += config.dt * config.beta_bar * spin_slip * spin_slip.abs();
            }
            if rho < 0.0 {
                rho = 0.0;
                q = Vec2::zeros();
                s = 0.0;
            }
            (rho, q, s)
        })
        .collect();

    let mut out = fields.clone();
    for (k, (rho, q, s)) in updated.into_iter().enumerate() {
        out.rho[k] = rho;
        out.momentum[k] = q;
        out.spin[k] = s;
    }
    if let Some(k) = (0..n).find(|&k| {
        !(out.rho[k].is_finite() && out.momentum[k].iter().all(|v| v.is_finite()) && out.spin[k].is_finite())
    }) {
        return Err(FloeError::Diverged { floe: k, t: f64::NAN });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HydroEnergy {
    pub kinetic: f64,
    pub rotational: f64,
    pub total: f64,
}

/// Lumped quadrature of `½ρ|u|²` and `½ρ_I ω̄²`.
pub fn hydro_energy(fields: &GridFields, mesh: &PeriodicMesh) -> HydroEnergy {
    let m = mesh.lumped_mass();
    let r2 = fields.floe_radius * fields.floe_radius;
    let mut kinetic = 0.0;
    let mut rotational = 0.0;
    for k in 0..fields.len() {
        if fields.rho[k] > fields.rho_floor {
            kinetic += 0.5 * m * fields.momentum[k].norm_squared() / fields.rho[k];
            rotational += 0.5 * m * fields.spin[k] * fields.spin[k] / (r2 * fields.rho[k]);
        }
    }
    HydroEnergy { kinetic, rotational, total: kinetic + rotational }
}

/// `∫ρ` by lumped quadrature.
pub fn total_mass(fields: &GridFields, mesh: &PeriodicMesh) -> f64 {
    mesh.lumped_mass() * fields.rho.iter().sum::<f64>()
}
