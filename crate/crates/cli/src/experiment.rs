//! Building systems from a config and running particle, continuum and
//! comparison pipelines in memory.

use anyhow::{bail, Context, Result};
use floes_core::coarsegrain::{bin_floes, l2_discrepancy, CellGrid, Discrepancy, Quantity};
use floes_core::diagnostics::{moments, MomentRecord};
use floes_core::hydro::{
    continuum_drag_from_particles, hydro_energy, hydro_step, total_mass, GridFields, HydroConfig, HydroEnergy,
    NodalOcean, PeriodicMesh,
};
use floes_core::particle::init::{
    init_lattice, init_nonoverlapping_with, sample_powerlaw_radii_with, seeded_rng, GaussianKinematics,
};
use floes_core::particle::ContactStats;
use floes_core::{Domain, FloeParams, FloeState, MaterialParams, ParticleSystem, Vec2};
use rand::Rng;
use serde::Serialize;

use crate::config::{PopulationSpec, SimConfig, VelocitySpec};

/// Floe geometry and initial kinematics drawn from the config.
///
/// Power-law populations consume the seeded stream in this order: all radii,
/// all thicknesses, positions (rejection sampling), then `vx, vy, ω` per floe.
pub fn build_floes(
    cfg: &SimConfig,
    domain: &Domain,
    materials: &MaterialParams,
) -> Result<Vec<(FloeParams, FloeState)>> {
    let mut rng = seeded_rng(cfg.seed);
    let (geometry, positions): (Vec<(f64, f64)>, Vec<Vec2>) = match &cfg.population {
        PopulationSpec::PowerLaw { n, r_min, r_max, exponent, h_min, h_max, max_attempts } => {
            let radii = sample_powerlaw_radii_with(&mut rng, *n, *r_min, *r_max, *exponent)?;
            let thick: Vec<f64> = (0..*n).map(|_| h_min + (h_max - h_min) * rng.random::<f64>()).collect();
            let pos = init_nonoverlapping_with(&mut rng, &radii, domain, *max_attempts)?;
            (radii.into_iter().zip(thick).collect(), pos)
        }
        PopulationSpec::Lattice { nx, ny, radius, thickness } => {
            let pos = init_lattice(*nx, *ny, domain)?;
            (vec![(*radius, *thickness); pos.len()], pos)
        }
        PopulationSpec::Explicit { floes } => {
            let mut out = Vec::with_capacity(floes.len());
            for f in floes {
                let p = FloeParams::from_materials(f.r, f.h, materials)?;
                let s = FloeState::new(domain, Vec2::new(f.x, f.y), Vec2::new(f.vx, f.vy), f.theta, f.omega);
                out.push((p, s));
            }
            return Ok(out);
        }
    };
    let kinematics = match cfg.velocity {
        VelocitySpec::Rest => vec![(Vec2::zeros(), 0.0); positions.len()],
        VelocitySpec::Gaussian { mean_v, sd_v, mean_omega, sd_omega } => GaussianKinematics {
            mean_velocity: Vec2::new(mean_v[0], mean_v[1]),
            sd_velocity: sd_v,
            mean_omega,
            sd_omega,
        }
        .sample(&mut rng, positions.len()),
    };
    geometry
        .into_iter()
        .zip(positions)
        .zip(kinematics)
        .map(|(((r, h), x), (v, w))| {
            let p = FloeParams::from_materials(r, h, materials)?;
            Ok((p, FloeState::new(domain, x, v, 0.0, w)))
        })
        .collect()
}

pub fn build_system(cfg: &SimConfig) -> Result<ParticleSystem> {
    cfg.validate()?;
    let domain = cfg.domain.build()?;
    let materials = MaterialParams::new(&cfg.materials, cfg.dt)?;
    let floes = build_floes(cfg, &domain, &materials)?;
    let mut sys = ParticleSystem::new(domain, materials, cfg.ocean.clone(), floes, cfg.seed)?
        .with_mean_field_scaling(cfg.mean_field_scaling);
    if !cfg.drag_enabled {
        sys = sys.without_drag();
    }
    Ok(sys)
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub states: Vec<FloeState>,
}

/// Everything a particle run records.
#[derive(Debug, Clone)]
pub struct ParticleRun {
    pub system: ParticleSystem,
    pub history: Vec<MomentRecord>,
    pub snapshots: Vec<Snapshot>,
    /// Contact extremes over every step.
    pub extremes: ContactStats,
    /// Largest `|F_i|` over every step.
    pub max_force: f64,
    /// Largest `|Σ_i F_i^contact| / Σ_i |F_i^contact|` over every step.
    pub max_net_contact_force: f64,
}

fn is_stride(step: usize, stride: usize, last: usize) -> bool {
    step.is_multiple_of(stride) || step == last
}

fn snapshot_steps(cfg: &SimConfig) -> Vec<usize> {
    cfg.compare.times.iter().map(|t| (t / cfg.dt).round() as usize).collect()
}

/// Steps the configured system to `T`, sampling moments every
/// `sample_stride` steps and floe states every `snapshot_stride` steps and at
/// every comparison time.
pub fn run_particle(cfg: &SimConfig) -> Result<ParticleRun> {
    let system = build_system(cfg)?;
    run_particle_system(cfg, system)
}

pub fn run_particle_system(cfg: &SimConfig, mut system: ParticleSystem) -> Result<ParticleRun> {
    let steps = cfg.n_steps();
    let extra = snapshot_steps(cfg);
    let mut run = ParticleRun {
        system: system.clone(),
        history: Vec::new(),
        snapshots: Vec::new(),
        extremes: ContactStats::default(),
        max_force: 0.0,
        max_net_contact_force: 0.0,
    };
    for step in 0..=steps {
        if is_stride(step, cfg.sample_stride, steps) {
            run.history.push(moments(&system)?);
        }
        if is_stride(step, cfg.snapshot_stride, steps) || extra.contains(&step) {
            run.snapshots.push(Snapshot { t: system.time(), states: system.states().to_vec() });
        }
        if step == steps {
            break;
        }
        let field = system.step_euler(cfg.dt).with_context(|| format!("step {step}"))?;
        system.set_time((step + 1) as f64 * cfg.dt);
        run.extremes.merge(&ContactStats { contacts: 0, ..field.stats });
        run.max_force = run.max_force.max(field.max_force());
        let mut net = Vec2::zeros();
        let mut total = 0.0;
        for k in 0..field.force.len() {
            let c = field.force[k] - field.drag_force[k];
            net += c;
            total += c.norm();
        }
        if total > 0.0 {
            run.max_net_contact_force = run.max_net_contact_force.max(net.norm() / total);
        }
    }
    run.system = system;
    Ok(run)
}

/// Final observables of a constant-ocean run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftSummary {
    pub t: f64,
    pub mean_slip: f64,
    pub mean_abs_omega: f64,
    pub mean_velocity: Vec2,
    pub kinetic_translational: f64,
    pub kinetic_rotational: f64,
    pub kinetic_rotational_initial: f64,
    /// `½ Σm |u_o|²`, evaluated at each floe's position.
    pub kinetic_drift: f64,
    pub strain_energy: f64,
    /// Number of separate intervals with nonzero `Σ_{i<j} ½κ₁δ²`.
    pub strain_bursts: usize,
}

pub fn drift_summary(run: &ParticleRun) -> Result<DriftSummary> {
    let (first, last) = match (run.history.first(), run.history.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => bail!("empty history"),
    };
    let sys = &run.system;
    let kinetic_drift = sys
        .params()
        .iter()
        .zip(sys.states())
        .map(|(p, s)| 0.5 * p.mass() * sys.ocean().velocity(s.position).norm_squared())
        .sum();
    let mut bursts = 0;
    let mut active = false;
    for r in &run.history {
        let on = r.strain_unscaled > 0.0;
        if on && !active {
            bursts += 1;
        }
        active = on;
    }
    Ok(DriftSummary {
        t: last.t,
        mean_slip: last.mean_slip,
        mean_abs_omega: last.mean_abs_omega,
        mean_velocity: last.mean_velocity,
        kinetic_translational: last.m2v,
        kinetic_rotational: last.m2w,
        kinetic_rotational_initial: first.m2w,
        kinetic_drift,
        strain_energy: last.strain_unscaled,
        strain_bursts: bursts,
    })
}

/// Continuum run with its mesh and sampled states.
#[derive(Debug, Clone)]
pub struct HydroRun {
    pub mesh: PeriodicMesh,
    pub config: HydroConfig,
    pub snapshots: Vec<(f64, GridFields)>,
    /// `(t, energy, mass)` every `sample_stride` steps.
    pub series: Vec<(f64, HydroEnergy, f64)>,
}

/// Continuum parameters implied by the config: `(HydroConfig, floe radius)`.
pub fn hydro_setup(cfg: &SimConfig) -> Result<(HydroConfig, f64)> {
    let domain = cfg.domain.build()?;
    let materials = MaterialParams::new(&cfg.materials, cfg.dt)?;
    let h = &cfg.hydro;
    let (alpha_bar, beta_bar, radius) = match (h.alpha_bar, h.beta_bar, h.floe_radius) {
        (Some(a), Some(b), Some(r)) => (a, b, r),
        _ => {
            let floes = build_floes(cfg, &domain, &materials)?;
            let params: Vec<FloeParams> = floes.iter().map(|(p, _)| *p).collect();
            let (a, b) = continuum_drag_from_particles(&materials, &params, h.rho_init, h.drag_convention)?;
            let (a, b) = if cfg.drag_enabled { (a, b) } else { (0.0, 0.0) };
            (h.alpha_bar.unwrap_or(a), h.beta_bar.unwrap_or(b), h.floe_radius.unwrap_or(params[0].radius()))
        }
    };
    let config = HydroConfig { dt: cfg.dt, t_end: cfg.t_end, alpha_bar, beta_bar, c_art: h.c_art };
    config.validate()?;
    Ok((config, radius))
}

pub fn run_hydro(cfg: &SimConfig) -> Result<HydroRun> {
    cfg.validate()?;
    let domain = cfg.domain.build()?;
    let mesh = PeriodicMesh::new(&domain, cfg.hydro.nx, cfg.hydro.ny)?;
    let (config, radius) = hydro_setup(cfg)?;
    let mut fields = GridFields::uniform(&mesh, cfg.hydro.rho_init, Vec2::zeros(), 0.0, radius);
    fields.rho_floor = cfg.hydro.rho_floor;
    run_hydro_fields(cfg, mesh, config, fields)
}

pub fn run_hydro_fields(
    cfg: &SimConfig,
    mesh: PeriodicMesh,
    config: HydroConfig,
    mut fields: GridFields,
) -> Result<HydroRun> {
    let ocean = NodalOcean::sample(&cfg.ocean, &mesh);
    let steps = cfg.n_steps();
    let extra = snapshot_steps(cfg);
    let mut run = HydroRun { mesh, config, snapshots: Vec::new(), series: Vec::new() };
    for step in 0..=steps {
        let t = step as f64 * cfg.dt;
        if is_stride(step, cfg.sample_stride, steps) {
            run.series.push((t, hydro_energy(&fields, &run.mesh), total_mass(&fields, &run.mesh)));
        }
        if is_stride(step, cfg.snapshot_stride, steps) || extra.contains(&step) {
            run.snapshots.push((t, fields.clone()));
        }
        if step == steps {
            break;
        }
        fields = hydro_step(&fields, &ocean, &run.config, &run.mesh).with_context(|| format!("hydro step {step}"))?;
    }
    Ok(run)
}

/// Discrepancies of one comparison time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub time: f64,
    pub density: Discrepancy,
    pub velocity: Discrepancy,
    pub spin: Discrepancy,
}

/// Compares binned floes against continuum fields on the same grid.
pub fn compare_states(
    params: &[FloeParams],
    states: &[FloeState],
    fields: &GridFields,
    mesh: &PeriodicMesh,
    domain: &Domain,
    time: f64,
) -> Result<ComparisonRow> {
    let grid = CellGrid::new(domain, mesh.nx(), mesh.ny())?;
    let cells = bin_floes(params, states, &grid);
    Ok(ComparisonRow {
        time,
        density: l2_discrepancy(&cells, fields, mesh, Quantity::NormalizedDensity)?,
        velocity: l2_discrepancy(&cells, fields, mesh, Quantity::Velocity)?,
        spin: l2_discrepancy(&cells, fields, mesh, Quantity::Spin)?,
    })
}

fn find_time<T>(items: &[T], t: f64, key: impl Fn(&T) -> f64) -> Option<&T> {
    items.iter().find(|x| (key(x) - t).abs() <= 1e-9 * t.abs().max(1.0))
}

/// Particle run, continuum run and their comparison at `compare.times`.
#[derive(Debug, Clone)]
pub struct ConsistencyRun {
    pub particle: ParticleRun,
    pub hydro: HydroRun,
    pub rows: Vec<ComparisonRow>,
}

pub fn run_consistency(cfg: &SimConfig) -> Result<ConsistencyRun> {
    let particle = run_particle(cfg)?;
    let hydro = run_hydro(cfg)?;
    let domain = cfg.domain.build()?;
    let mut rows = Vec::new();
    for &t in &cfg.compare.times {
        let snap =
            find_time(&particle.snapshots, t, |s| s.t).with_context(|| format!("no particle snapshot at t={t}"))?;
        let (_, fields) =
            find_time(&hydro.snapshots, t, |s| s.0).with_context(|| format!("no field snapshot at t={t}"))?;
        rows.push(compare_states(particle.system.params(), &snap.states, fields, &hydro.mesh, &domain, t)?);
    }
    Ok(ConsistencyRun { particle, hydro, rows })
}
