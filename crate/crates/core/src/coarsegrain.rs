//! Binning of particle snapshots into grid cells and discrete L² comparison
//! with nodal continuum fields.
//!
//! Cell `(i, j)` covers `[lower + (i hx, j hy), lower + ((i+1) hx, (j+1) hy))`,
//! so the cells coincide with the squares of a [`PeriodicMesh`] of the same
//! dimensions. Continuum values are averaged over the four corner nodes.

use serde::Serialize;

use crate::domain::Domain;
use crate::error::{param_err, FloeError, Result};
use crate::floe::{FloeParams, FloeState};
use crate::hydro::{GridFields, PeriodicMesh};
use crate::particle::ParticleSystem;
use crate::Vec2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGrid {
    lower: Vec2,
    nx: usize,
    ny: usize,
    hx: f64,
    hy: f64,
}

impl CellGrid {
    pub fn new(domain: &Domain, nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(param_err("grid", "need at least one cell per axis"));
        }
        let len = domain.lengths();
        Ok(Self { lower: domain.lower(), nx, ny, hx: len.x / nx as f64, hy: len.y / ny as f64 })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn cell_area(&self) -> f64 {
        self.hx * self.hy
    }

    /// Row-major cell index of a wrapped position.
    pub fn cell_of(&self, p: Vec2) -> usize {
        let i = (((p.x - self.lower.x) / self.hx).floor().max(0.0) as usize).min(self.nx - 1);
        let j = (((p.y - self.lower.y) / self.hy).floor().max(0.0) as usize).min(self.ny - 1);
        j * self.nx + i
    }
}

/// Binned particle fields; `velocity` and `omega` are `None` in empty cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellFields {
    pub nx: usize,
    pub ny: usize,
    pub cell_area: f64,
    pub count: Vec<usize>,
    pub rho: Vec<f64>,
    pub velocity: Vec<Option<Vec2>>,
    pub omega: Vec<Option<f64>>,
}

impl CellFields {
    pub fn len(&self) -> usize {
        self.count.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count.is_empty()
    }

    pub fn empty_cells(&self) -> usize {
        self.count.iter().filter(|&&c| c == 0).count()
    }

    pub fn total_mass(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.cell_area
    }
}

/// Mass density, mass-weighted velocity and inertia-weighted spin per cell.
/// Floes are accumulated in index order.
pub fn bin_floes(params: &[FloeParams], states: &[FloeState], grid: &CellGrid) -> CellFields {
    let n = grid.len();
    let mut count = vec![0usize; n];
    let mut mass = vec![0.0; n];
    let mut momentum = vec![Vec2::zeros(); n];
    let mut inertia = vec![0.0; n];
    let mut spin = vec![0.0; n];
    for (p, s) in params.iter().zip(states) {
        let c = grid.cell_of(s.position);
        count[c] += 1;
        mass[c] += p.mass();
        momentum[c] += s.velocity * p.mass();
        inertia[c] += p.inertia();
        spin[c] += p.inertia() * s.omega;
    }
    let area = grid.cell_area();
    CellFields {
        nx: grid.nx,
        ny: grid.ny,
        cell_area: area,
        rho: mass.iter().map(|m| m / area).collect(),
        velocity: (0..n).map(|c| (count[c] > 0).then(|| momentum[c] / mass[c])).collect(),
        omega: (0..n).map(|c| (count[c] > 0).then(|| spin[c] / inertia[c])).collect(),
        count,
    }
}

pub fn bin_particles(system: &ParticleSystem, grid: &CellGrid) -> CellFields {
    bin_floes(system.params(), system.states(), grid)
}

/// Continuum values averaged over the four corners of every cell.
#[derive(Debug, Clone, PartialEq)]
pub struct HydroCells {
    pub rho: Vec<f64>,
    pub velocity: Vec<Vec2>,
    pub omega: Vec<f64>,
}

pub fn hydro_cell_averages(fields: &GridFields, mesh: &PeriodicMesh) -> Result<HydroCells> {
    if fields.nx != mesh.nx() || fields.ny != mesh.ny() {
        return Err(FloeError::GridMismatch(format!(
            "fields {}x{} on a {}x{} mesh",
            fields.nx,
            fields.ny,
            mesh.nx(),
            mesh.ny()
        )));
    }
    let n = mesh.len();
    let mut out =
        HydroCells { rho: Vec::with_capacity(n), velocity: Vec::with_capacity(n), omega: Vec::with_capacity(n) };
    for k in 0..n {
        let (i, j) = mesh.node_ij(k);
        let corners = [mesh.index(i, j), mesh.index(i + 1, j), mesh.index(i + 1, j + 1), mesh.index(i, j + 1)];
        out.rho.push(corners.iter().map(|&c| fields.rho[c]).sum::<f64>() / 4.0);
        out.velocity.push(corners.iter().map(|&c| fields.velocity(c)).sum::<Vec2>() / 4.0);
        out.omega.push(corners.iter().map(|&c| fields.omega(c)).sum::<f64>() / 4.0);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Both densities divided by their domain means.
    NormalizedDensity,
    Density,
    Velocity,
    Spin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discrepancy {
    pub absolute: f64,
    /// `None` when the continuum norm vanishes.
    pub relative: Option<f64>,
    pub empty_cells: usize,
    pub compared_cells: usize,
}

/// `√(Σ|a−b|²|K|)` over non-empty cells, particle values `a` against
/// continuum values `b`, plus the same normalized by `√(Σ|b|²|K|)`.
pub fn l2_discrepancy(
    cells: &CellFields,
    fields: &GridFields,
    mesh: &PeriodicMesh,
    quantity: Quantity,
) -> Result<Discrepancy> {
    if cells.nx != mesh.nx() || cells.ny != mesh.ny() {
        return Err(FloeError::GridMismatch(format!(
            "cells {}x{} against a {}x{} mesh",
            cells.nx,
            cells.ny,
            mesh.nx(),
            mesh.ny()
        )));
    }
    let hydro = hydro_cell_averages(fields, mesh)?;
    let area = cells.cell_area;
    let (pa_mean, hy_mean) = match quantity {
        Quantity::NormalizedDensity => {
            let n = cells.len() as f64;
            (cells.rho.iter().sum::<f64>() / n, hydro.rho.iter().sum::<f64>() / n)
        }
        _ => (1.0, 1.0),
    };
    let mut diff2 = 0.0;
    let mut ref2 = 0.0;
    let mut compared = 0;
    for c in 0..cells.len() {
        if cells.count[c] == 0 {
            continue;
        }
        compared += 1;
        let (d2, b2) = match quantity {
            Quantity::NormalizedDensity | Quantity::Density => {
                let a = cells.rho[c] / pa_mean;
                let b = hydro.rho[c] / hy_mean;
                ((a - b) * (a - b), b * b)
            }
            Quantity::Velocity => {
                let a = cells.velocity[c].unwrap_or_default();
                let b = hydro.velocity[c];
                ((a - b).norm_squared(), b.norm_squared())
            }
            Quantity::Spin => {
                let a = cells.omega[c].unwrap_or_default();
                let b = hydro.omega[c];
                ((a - b) * (a - b), b * b)
            }
        };
        diff2 += d2 * area;
        ref2 += b2 * area;
    }
    if compared == 0 {
        return Err(FloeError::AllCellsEmpty);
    }
    let absolute = diff2.sqrt();
    Ok(Discrepancy {
        absolute,
        relative: (ref2 > 0.0).then(|| absolute / ref2.sqrt()),
        empty_cells: cells.len() - compared,
        compared_cells: compared,
    })
}
