//! Run directories: each pipeline writes `<root>/<run-id>/` with a manifest
//! and its CSV/JSON artifacts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use floes_core::hydro::{GridFields, PeriodicMesh};
use floes_core::{Domain, Vec2};
use serde::Serialize;

use crate::artifacts::{
    ensure_dir, params_from_row, read_fields, read_floes, state_from_row, write_cells, write_fields, write_floes,
    write_json, write_moments, Manifest,
};
use crate::config::SimConfig;
use crate::experiment::{
    compare_states, drift_summary, run_consistency, run_hydro, run_particle, ComparisonRow, ConsistencyRun,
    DriftSummary, ParticleRun,
};

/// Where a run goes and how it was requested.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub root: PathBuf,
    pub command: String,
    pub overrides: Vec<String>,
}

impl RunContext {
    pub fn dir(&self, cfg: &SimConfig, fallback: &str) -> Result<(String, PathBuf)> {
        let id = cfg.resolved_run_id(fallback);
        let dir = self.root.join(&id);
        ensure_dir(&dir)?;
        Ok((id, dir))
    }

    fn manifest(&self, dir: &Path, id: &str, cfg: &SimConfig) -> Result<()> {
        write_json(&dir.join("manifest.json"), &Manifest::new(id, &self.command, &self.overrides, cfg))
    }
}

fn write_particle(dir: &Path, run: &ParticleRun) -> Result<()> {
    write_floes(&dir.join("floes.csv"), run.system.params(), &run.snapshots)?;
    write_moments(&dir.join("moments.csv"), &run.history)
}

pub fn particle_pipeline(cfg: &SimConfig, ctx: &RunContext) -> Result<(PathBuf, ParticleRun)> {
    let (id, dir) = ctx.dir(cfg, "particle")?;
    ctx.manifest(&dir, &id, cfg)?;
    let run = run_particle(cfg)?;
    write_particle(&dir, &run)?;
    Ok((dir, run))
}

pub fn hydro_pipeline(cfg: &SimConfig, ctx: &RunContext) -> Result<PathBuf> {
    let (id, dir) = ctx.dir(cfg, "hydro")?;
    ctx.manifest(&dir, &id, cfg)?;
    let run = run_hydro(cfg)?;
    write_fields(&dir.join("fields.csv"), &run.mesh, &run.snapshots)?;
    #[derive(Serialize)]
    struct Row {
        t: f64,
        kinetic: f64,
        rotational: f64,
        total: f64,
        mass: f64,
    }
    let rows: Vec<Row> = run
        .series
        .iter()
        .map(|(t, e, m)| Row { t: *t, kinetic: e.kinetic, rotational: e.rotational, total: e.total, mass: *m })
        .collect();
    write_json(&dir.join("energy.json"), &rows)?;
    Ok(dir)
}

/// Constant-ocean preset: artifacts plus `summary.json`.
pub fn example1_pipeline(cfg: &SimConfig, ctx: &RunContext) -> Result<(PathBuf, DriftSummary)> {
    let (dir, run) = particle_pipeline(cfg, ctx)?;
    let summary = drift_summary(&run)?;
    write_json(&dir.join("summary.json"), &summary)?;
    Ok((dir, summary))
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub threshold_u: f64,
    pub rows: Vec<ComparisonRow>,
}

/// Particle run, continuum run, binned cells and `compare.json`.
pub fn example2_pipeline(cfg: &SimConfig, ctx: &RunContext) -> Result<(PathBuf, ConsistencyRun)> {
    let (id, dir) = ctx.dir(cfg, "example2")?;
    ctx.manifest(&dir, &id, cfg)?;
    let run = run_consistency(cfg)?;
    write_particle(&dir, &run.particle)?;
    write_fields(&dir.join("fields.csv"), &run.hydro.mesh, &run.hydro.snapshots)?;
    let domain = cfg.domain.build()?;
    write_cells(
        &dir.join("cells.csv"),
        &domain,
        cfg.hydro.nx,
        cfg.hydro.ny,
        run.particle.system.params(),
        &run.particle.snapshots,
    )?;
    write_json(
        &dir.join("compare.json"),
        &CompareReport { threshold_u: cfg.compare.threshold_u, rows: run.rows.clone() },
    )?;
    Ok((dir, run))
}

fn same_time(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(1.0)
}

/// Compares a `floes.csv` against a `fields.csv` at every time present in
/// both. The periodic domain and grid are inferred from the node coordinates.
pub fn compare_files(floes_csv: &Path, fields_csv: &Path, draft_ratio: f64) -> Result<Vec<ComparisonRow>> {
    let floes = read_floes(floes_csv)?;
    let fields = read_fields(fields_csv)?;
    let nx = fields.iter().map(|r| r.i).max().context("no nodes")? + 1;
    let ny = fields.iter().map(|r| r.j).max().context("no nodes")? + 1;
    let t0 = fields[0].t;
    let nodes: Vec<_> = fields.iter().filter(|r| same_time(r.t, t0)).collect();
    if nodes.len() != nx * ny {
        bail!("fields.csv: expected {} nodes per time, found {}", nx * ny, nodes.len());
    }
    let origin = nodes.iter().find(|r| r.i == 0 && r.j == 0).context("missing node (0, 0)")?.position;
    let far = nodes.iter().find(|r| r.i == nx - 1 && r.j == ny - 1).context("missing last node")?.position;
    let hx = (far.x - origin.x) / (nx - 1) as f64;
    let hy = (far.y - origin.y) / (ny - 1) as f64;
    let domain =
        Domain::new([origin.x, origin.y], [origin.x + hx * nx as f64, origin.y + hy * ny as f64], [true, true])?;
    let mesh = PeriodicMesh::new(&domain, nx, ny)?;

    let mut by_time: BTreeMap<u64, Vec<&crate::artifacts::FieldRow>> = BTreeMap::new();
    for r in &fields {
        by_time.entry(r.t.to_bits()).or_default().push(r);
    }
    let mut rows = Vec::new();
    for (bits, nodes) in by_time {
        let t = f64::from_bits(bits);
        let snap: Vec<_> = floes.iter().filter(|r| same_time(r.t, t)).collect();
        if snap.is_empty() {
            continue;
        }
        let radius = snap[0].r;
        let mut gf = GridFields::uniform(&mesh, 0.0, Vec2::zeros(), 0.0, radius);
        for n in nodes {
            let k = mesh.index(n.i, n.j);
            gf.rho[k] = n.rho;
            gf.momentum[k] = n.velocity * n.rho;
            gf.spin[k] = radius * radius * n.rho * n.omega;
        }
        let params = snap.iter().map(|r| params_from_row(r, draft_ratio)).collect::<Result<Vec<_>>>()?;
        let states: Vec<_> = snap.iter().map(|r| state_from_row(r)).collect();
        rows.push(compare_states(&params, &states, &gf, &mesh, &domain, t)?);
    }
    if rows.is_empty() {
        bail!("no common times between {} and {}", floes_csv.display(), fields_csv.display());
    }
    Ok(rows)
}
