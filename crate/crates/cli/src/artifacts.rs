//! CSV and JSON artifacts of a run directory.
//!
//! Floats are written with 17 significant digits so every value round-trips.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use floes_core::diagnostics::MomentRecord;
use floes_core::hydro::{GridFields, PeriodicMesh};
use floes_core::{FloeParams, FloeState, Vec2};
use serde::Serialize;

use crate::config::SimConfig;
use crate::experiment::Snapshot;

pub const FLOES_HEADER: [&str; 13] =
    ["t", "id", "x", "y", "x_unwrapped", "y_unwrapped", "vx", "vy", "theta", "omega", "r", "h", "m"];
pub const MOMENTS_HEADER: [&str; 13] =
    ["t", "M0", "M1vx", "M1vy", "M1w", "M2x", "M2v", "M2w", "M2", "Dn", "Dt", "Pdrag_lin", "Pdrag_rot"];
pub const FIELDS_HEADER: [&str; 9] = ["t", "node_i", "node_j", "x", "y", "rho", "ux", "uy", "omega_bar"];
pub const CELLS_HEADER: [&str; 10] = ["t", "cell_i", "cell_j", "x", "y", "count", "rho", "ux", "uy", "omega_bar"];

/// Environment variable naming the output root (default `runs`).
pub const OUT_ENV: &str = "FLOES_OUT";

pub fn output_root() -> PathBuf {
    std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("runs"))
}

pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}

pub fn write_floes(path: &Path, params: &[FloeParams], snapshots: &[Snapshot]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(FLOES_HEADER)?;
    for snap in snapshots {
        for (id, (p, s)) in params.iter().zip(&snap.states).enumerate() {
            w.write_record([
                fmt(snap.t),
                id.to_string(),
                fmt(s.position.x),
                fmt(s.position.y),
                fmt(s.unwrapped.x),
                fmt(s.unwrapped.y),
                fmt(s.velocity.x),
                fmt(s.velocity.y),
                fmt(s.theta),
                fmt(s.omega),
                fmt(p.radius()),
                fmt(p.thickness()),
                fmt(p.mass()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_moments(path: &Path, history: &[MomentRecord]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(MOMENTS_HEADER)?;
    for r in history {
        w.write_record(
            [
                r.t,
                r.m0,
                r.m1v.x,
                r.m1v.y,
                r.m1w,
                r.m2x,
                r.m2v,
                r.m2w,
                r.m2,
                r.dissipation_normal,
                r.dissipation_tangential,
                r.drag_power_lin,
                r.drag_power_rot,
            ]
            .map(fmt),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_fields(path: &Path, mesh: &PeriodicMesh, snapshots: &[(f64, GridFields)]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(FIELDS_HEADER)?;
    for (t, f) in snapshots {
        for k in 0..mesh.len() {
            let (i, j) = mesh.node_ij(k);
            let p = mesh.node_position(k);
            let u = f.velocity(k);
            w.write_record([
                fmt(*t),
                i.to_string(),
                j.to_string(),
                fmt(p.x),
                fmt(p.y),
                fmt(f.rho[k]),
                fmt(u.x),
                fmt(u.y),
                fmt(f.omega(k)),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Binned particle fields at each snapshot, one row per cell (centers in
/// `x, y`); empty cells leave `ux, uy, omega_bar` blank.
pub fn write_cells(
    path: &Path,
    grid_domain: &floes_core::Domain,
    nx: usize,
    ny: usize,
    params: &[FloeParams],
    snapshots: &[Snapshot],
) -> Result<()> {
    let grid = floes_core::coarsegrain::CellGrid::new(grid_domain, nx, ny)?;
    let lo = grid_domain.lower();
    let hx = grid_domain.lengths().x / nx as f64;
    let hy = grid_domain.lengths().y / ny as f64;
    let mut w = writer(path)?;
    w.write_record(CELLS_HEADER)?;
    for snap in snapshots {
        let cells = floes_core::coarsegrain::bin_floes(params, &snap.states, &grid);
        for c in 0..cells.len() {
            let (i, j) = (c % nx, c / nx);
            let blank = String::new;
            let (ux, uy) = cells.velocity[c].map_or((blank(), blank()), |v| (fmt(v.x), fmt(v.y)));
            w.write_record([
                fmt(snap.t),
                i.to_string(),
                j.to_string(),
                fmt(lo.x + (i as f64 + 0.5) * hx),
                fmt(lo.y + (j as f64 + 0.5) * hy),
                cells.count[c].to_string(),
                fmt(cells.rho[c]),
                ux,
                uy,
                cells.omega[c].map_or_else(blank, fmt),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Config echo plus everything needed to regenerate the run.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub program: &'static str,
    pub version: &'static str,
    pub run_id: &'a str,
    pub command: &'a str,
    pub seed: u64,
    pub overrides: &'a [String],
    pub config: &'a SimConfig,
}

impl<'a> Manifest<'a> {
    pub fn new(run_id: &'a str, command: &'a str, overrides: &'a [String], config: &'a SimConfig) -> Self {
        Self {
            program: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            run_id,
            command,
            seed: config.seed,
            overrides,
            config,
        }
    }
}

/// One row of `floes.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloeRow {
    pub t: f64,
    pub id: usize,
    pub position: Vec2,
    pub unwrapped: Vec2,
    pub velocity: Vec2,
    pub theta: f64,
    pub omega: f64,
    pub r: f64,
    pub h: f64,
    pub m: f64,
}

fn column(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize> {
    headers.iter().position(|h| h == name).with_context(|| format!("{}: missing column {name}", path.display()))
}

fn num(rec: &csv::StringRecord, idx: usize) -> Result<f64> {
    let s = rec.get(idx).context("short row")?;
    s.parse::<f64>().with_context(|| format!("bad number {s:?}"))
}

pub fn read_floes(path: &Path) -> Result<Vec<FloeRow>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let idx: Vec<usize> = FLOES_HEADER.iter().map(|n| column(&headers, n, path)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let g = |k: usize| num(&rec, idx[k]);
        out.push(FloeRow {
            t: g(0)?,
            id: rec.get(idx[1]).context("short row")?.parse()?,
            position: Vec2::new(g(2)?, g(3)?),
            unwrapped: Vec2::new(g(4)?, g(5)?),
            velocity: Vec2::new(g(6)?, g(7)?),
            theta: g(8)?,
            omega: g(9)?,
            r: g(10)?,
            h: g(11)?,
            m: g(12)?,
        });
    }
    Ok(out)
}

/// One row of `fields.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRow {
    pub t: f64,
    pub i: usize,
    pub j: usize,
    pub position: Vec2,
    pub rho: f64,
    pub velocity: Vec2,
    pub omega: f64,
}

pub fn read_fields(path: &Path) -> Result<Vec<FieldRow>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let idx: Vec<usize> = FIELDS_HEADER.iter().map(|n| column(&headers, n, path)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let g = |k: usize| num(&rec, idx[k]);
        out.push(FieldRow {
            t: g(0)?,
            i: rec.get(idx[1]).context("short row")?.parse()?,
            j: rec.get(idx[2]).context("short row")?.parse()?,
            position: Vec2::new(g(3)?, g(4)?),
            rho: g(5)?,
            velocity: Vec2::new(g(6)?, g(7)?),
            omega: g(8)?,
        });
    }
    if out.is_empty() {
        bail!("{}: no rows", path.display());
    }
    Ok(out)
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// Rebuilds floe parameters from a `floes.csv` row.
pub fn params_from_row(row: &FloeRow, draft_ratio: f64) -> Result<FloeParams> {
    let rho_ice = row.m / (std::f64::consts::PI * row.r * row.r * row.h);
    Ok(FloeParams::new(row.r, row.h, rho_ice, draft_ratio)?)
}

pub fn state_from_row(row: &FloeRow) -> FloeState {
    FloeState {
        position: row.position,
        unwrapped: row.unwrapped,
        velocity: row.velocity,
        theta: row.theta,
        omega: row.omega,
    }
}
