//! Property suites over every module; `floes validate` runs them all.

use anyhow::Result;
use floes_core::coarsegrain::{bin_particles, CellGrid};
use floes_core::diagnostics::{groenwall_bound_check, GroenwallConstants, MomentRecord};
use floes_core::hydro::{hydro_step, total_mass, GridFields, HydroConfig, NodalOcean, PeriodicMesh};
use floes_core::particle::{brute_force_contacts, candidate_pairs, CutoffPolicy};
use floes_core::{pair_force_torque, Domain, MaterialParams, OceanField, Vec2};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::experiment::{build_system, run_particle_system, ParticleRun};
use crate::scenarios::{binary_collision, default_materials, drag_free_box, pair_rng, random_pair};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// First violating instance, if any.
    pub violation: Option<Value>,
}

impl SuiteReport {
    fn pass(name: &'static str, detail: String) -> Self {
        Self { name, passed: true, detail, violation: None }
    }
    fn fail(name: &'static str, detail: String, violation: Value) -> Self {
        Self { name, passed: false, detail, violation: Some(violation) }
    }
}

/// Knobs for mutation testing of the suites themselves.
#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Replaces the damping factor `η` of every scenario.
    pub damping_override: Option<f64>,
}

impl ValidateOptions {
    fn materials(&self, m: MaterialParams) -> MaterialParams {
        match self.damping_override {
            Some(eta) => m.with_unchecked_damping(eta),
            None => m,
        }
    }
}

pub const PAIR_CASES: usize = 1000;
pub const ORACLE_SYSTEMS: usize = 200;

pub fn force_antisymmetry(seed: u64) -> SuiteReport {
    const NAME: &str = "force_antisymmetry";
    let domain = Domain::periodic_square_pi();
    let mat = default_materials();
    let mut rng = pair_rng(seed);
    for k in 0..PAIR_CASES {
        let case = random_pair(&mut rng, &domain, &mat);
        let a = (0, &case.states[0], &case.params[0]);
        let b = (1, &case.states[1], &case.params[1]);
        let (fij, fji) = match (pair_force_torque(a, b, &mat, &domain), pair_force_torque(b, a, &mat, &domain)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => {
                return SuiteReport::fail(NAME, e.to_string(), json!({ "case": k, "pair": case }))
            }
        };
        let exact = fij.normal_force == -fji.normal_force
            && fij.tangential_force == -fji.tangential_force
            && fij.torque_i == fji.torque_j
            && fij.torque_j == fji.torque_i
            && fij.in_contact();
        if !exact {
            return SuiteReport::fail(
                NAME,
                format!("pair {k}: f_ij + f_ji = {:?}", fij.force() + fji.force()),
                json!({ "case": k, "pair": case }),
            );
        }
    }
    SuiteReport::pass(NAME, format!("{PAIR_CASES} pairs, f_ij = -f_ji bit for bit"))
}

pub fn coulomb_cap(seed: u64) -> SuiteReport {
    const NAME: &str = "coulomb_cap";
    let domain = Domain::periodic_square_pi();
    let mat = default_materials();
    let mut rng = pair_rng(seed);
    let mut capped = 0;
    for k in 0..PAIR_CASES {
        let case = random_pair(&mut rng, &domain, &mat);
        let a = (0, &case.states[0], &case.params[0]);
        let b = (1, &case.states[1], &case.params[1]);
        let c = match pair_force_torque(a, b, &mat, &domain) {
            Ok(c) => c,
            Err(e) => return SuiteReport::fail(NAME, e.to_string(), json!({ "case": k, "pair": case })),
        };
        let ft = c.tangential_force.norm();
        let limit = mat.friction * c.normal_force.norm();
        if ft > limit * (1.0 + 1e-12) {
            return SuiteReport::fail(
                NAME,
                format!("pair {k}: |f_t| = {ft} > mu |f_n| = {limit}"),
                json!({ "case": k, "pair": case }),
            );
        }
        if c.friction_scale < 1.0 {
            capped += 1;
            if (ft - limit).abs() > 1e-12 * limit.max(f64::MIN_POSITIVE) {
                return SuiteReport::fail(
                    NAME,
                    format!("pair {k}: capped force not on the cone"),
                    json!({ "case": k, "pair": case }),
                );
            }
        }
    }
    SuiteReport::pass(NAME, format!("{PAIR_CASES} pairs, {capped} on the friction cone"))
}

/// One random system for the neighbor oracle.
pub fn oracle_system(rng: &mut impl Rng) -> (Domain, Vec<Vec2>, Vec<f64>) {
    let periodic = [rng.random_bool(0.7), rng.random_bool(0.7)];
    let side = rng.random_range(1.0..8.0);
    let domain = Domain::new([-side / 2.0, -side], [side / 2.0, side], periodic).expect("valid box");
    let n = rng.random_range(2..=300);
    let r_max = rng.random_range(0.01..0.4) * side.min(2.0 * side) / 4.0;
    let lo = domain.lower();
    let len = domain.lengths();
    let pos = (0..n)
        .map(|_| Vec2::new(lo.x + rng.random::<f64>() * len.x, lo.y + rng.random::<f64>() * len.y))
        .map(|p| domain.wrap(p))
        .collect();
    let radii = (0..n).map(|_| rng.random_range(0.1 * r_max..=r_max)).collect();
    (domain, pos, radii)
}

/// Candidate pairs filtered to actual contacts.
pub fn filtered_candidates(domain: &Domain, pos: &[Vec2], radii: &[f64]) -> Vec<(usize, usize)> {
    candidate_pairs(domain, pos, radii, CutoffPolicy::Auto)
        .into_iter()
        .filter(|&(i, j)| domain.min_image(pos[i], pos[j]).norm() < radii[i] + radii[j])
        .collect()
}

pub fn neighbor_oracle(seed: u64) -> SuiteReport {
    const NAME: &str = "neighbor_oracle";
    let mut rng = pair_rng(seed);
    let mut contacts = 0;
    for k in 0..ORACLE_SYSTEMS {
        let (domain, pos, radii) = oracle_system(&mut rng);
        let fast = filtered_candidates(&domain, &pos, &radii);
        let slow = brute_force_contacts(&domain, &pos, &radii);
        if fast != slow {
            return SuiteReport::fail(
                NAME,
                format!("system {k}: cell list found {} contacts, brute force {}", fast.len(), slow.len()),
                json!({ "system": k, "domain": domain, "positions": pos, "radii": radii }),
            );
        }
        contacts += slow.len();
    }
    SuiteReport::pass(NAME, format!("{ORACLE_SYSTEMS} systems, {contacts} contacts, identical sets"))
}

/// `M₂` rises by no more than `10 dt max|F|² / m_min` between samples and
/// both dissipation sums stay non-positive.
pub fn dissipation_violation(history: &[MomentRecord], dt: f64, max_force: f64, m_min: f64) -> Option<(usize, String)> {
    let eps = 10.0 * dt * max_force * max_force / m_min;
    for (k, r) in history.iter().enumerate() {
        if r.dissipation_normal > 0.0 || r.dissipation_tangential > 0.0 {
            return Some((k, format!("t={}: Dn={} Dt={}", r.t, r.dissipation_normal, r.dissipation_tangential)));
        }
        if k > 0 && r.m2 > history[k - 1].m2 + eps {
            return Some((k, format!("t={}: M2 rose by {} > eps {}", r.t, r.m2 - history[k - 1].m2, eps)));
        }
    }
    None
}

fn min_mass(run: &ParticleRun) -> f64 {
    run.system.params().iter().map(|p| p.mass()).fold(f64::INFINITY, f64::min)
}

fn box_run(opts: &ValidateOptions, dt: f64, t_end: f64) -> Result<ParticleRun> {
    let cfg = drag_free_box(dt, t_end, 11);
    let sys = build_system(&cfg)?;
    let mat = opts.materials(*sys.materials());
    run_particle_system(&cfg, sys.with_materials(mat))
}

pub fn conservation(opts: &ValidateOptions) -> SuiteReport {
    const NAME: &str = "momentum_conservation";
    match box_run(opts, 1e-4, 0.2) {
        Ok(run) if run.max_net_contact_force <= 1e-12 => {
            SuiteReport::pass(NAME, format!("max |ΣF|/Σ|F| = {:.3e}", run.max_net_contact_force))
        }
        Ok(run) => SuiteReport::fail(
            NAME,
            format!("max |ΣF|/Σ|F| = {:.3e}", run.max_net_contact_force),
            json!({ "max_net_contact_force": run.max_net_contact_force }),
        ),
        Err(e) => SuiteReport::fail(NAME, format!("{e:#}"), Value::Null),
    }
}

pub fn dissipation(opts: &ValidateOptions) -> SuiteReport {
    const NAME: &str = "energy_dissipation";
    let run = match box_run(opts, 1e-4, 0.2) {
        Ok(r) => r,
        Err(e) => return SuiteReport::fail(NAME, format!("{e:#}"), Value::Null),
    };
    match dissipation_violation(&run.history, 1e-4, run.max_force, min_mass(&run)) {
        None => SuiteReport::pass(
            NAME,
            format!(
                "{} samples, M2 {:.6} -> {:.6}",
                run.history.len(),
                run.history[0].m2,
                run.history.last().map_or(0.0, |r| r.m2)
            ),
        ),
        Some((k, msg)) => SuiteReport::fail(NAME, msg, json!({ "sample": run.history[k] })),
    }
}

pub fn groenwall(opts: &ValidateOptions) -> SuiteReport {
    const NAME: &str = "groenwall_bound";
    let cfg = binary_collision(1e-4, 1.0);
    let run = build_system(&cfg).and_then(|s| {
        let mat = opts.materials(*s.materials());
        run_particle_system(&cfg, s.with_materials(mat))
    });
    let run = match run {
        Ok(r) => r,
        Err(e) => return SuiteReport::fail(NAME, format!("{e:#}"), Value::Null),
    };
    let constants = GroenwallConstants::new(&run.extremes, run.system.params());
    match groenwall_bound_check(&run.history, &constants, run.system.drag_enabled()) {
        Ok(rep) if rep.holds => {
            SuiteReport::pass(NAME, format!("min margin {:.4e} (A0 = {:.3e})", rep.min_margin, rep.a0))
        }
        Ok(rep) => SuiteReport::fail(NAME, format!("bound violated at t={}", rep.worst_t), json!(rep)),
        Err(e) => SuiteReport::fail(NAME, e.to_string(), Value::Null),
    }
}

pub fn hydro_equilibrium() -> SuiteReport {
    const NAME: &str = "hydro_equilibrium";
    let domain = Domain::periodic_square_pi();
    let mesh = match PeriodicMesh::new(&domain, 16, 16) {
        Ok(m) => m,
        Err(e) => return SuiteReport::fail(NAME, e.to_string(), Value::Null),
    };
    let u = Vec2::new(0.3, 0.0);
    let start = GridFields::uniform(&mesh, 1.0, u, 0.0, 0.02);
    let cfg = HydroConfig { dt: 1e-3, t_end: 0.1, alpha_bar: 184.0, beta_bar: 7.264e-4, c_art: 0.5 };
    let steady = NodalOcean::sample(&OceanField::constant(u), &mesh);
    let mut f = start.clone();
    for _ in 0..100 {
        f = match hydro_step(&f, &steady, &cfg, &mesh) {
            Ok(g) => g,
            Err(e) => return SuiteReport::fail(NAME, e.to_string(), Value::Null),
        };
    }
    if f != start {
        return SuiteReport::fail(
            NAME,
            "uniform drift state moved".into(),
            json!({ "rho0": f.rho[0], "u0": f.velocity(0) }),
        );
    }
    let swirl = NodalOcean::sample(&OceanField::Rotational, &mesh);
    let mut g = GridFields::uniform(&mesh, 1.0, Vec2::zeros(), 0.0, 0.02);
    let m0 = total_mass(&g, &mesh);
    for _ in 0..1000 {
        g = match hydro_step(&g, &swirl, &cfg, &mesh) {
            Ok(x) => x,
            Err(e) => return SuiteReport::fail(NAME, e.to_string(), Value::Null),
        };
    }
    let drift = (total_mass(&g, &mesh) - m0).abs() / m0;
    if drift > 1e-12 {
        return SuiteReport::fail(
            NAME,
            format!("relative mass drift {drift:.3e} over 1000 steps"),
            json!({ "drift": drift }),
        );
    }
    SuiteReport::pass(NAME, format!("steady state exact, mass drift {drift:.2e} over 1000 steps"))
}

pub fn binning() -> SuiteReport {
    const NAME: &str = "binning";
    let cfg = drag_free_box(1e-3, 1.0, 5);
    let sys = match build_system(&cfg) {
        Ok(s) => s,
        Err(e) => return SuiteReport::fail(NAME, format!("{e:#}"), Value::Null),
    };
    let m0: f64 = sys.params().iter().map(|p| p.mass()).sum();
    let p: Vec2 = sys.params().iter().zip(sys.states()).map(|(q, s)| s.velocity * q.mass()).sum();
    for n in [1, 3, 7] {
        let grid = CellGrid::new(sys.domain(), n, n).expect("grid");
        let cells = bin_particles(&sys, &grid);
        let mass = cells.total_mass();
        if (mass - m0).abs() > 1e-12 * m0 {
            return SuiteReport::fail(NAME, format!("{n}x{n}: binned mass {mass} vs {m0}"), Value::Null);
        }
        if n == 1 {
            let u = cells.velocity[0].unwrap_or_default();
            if (u - p / m0).norm() > 1e-12 * (p / m0).norm().max(1e-300) {
                return SuiteReport::fail(NAME, format!("1x1 mean velocity {u:?} vs {:?}", p / m0), Value::Null);
            }
        }
    }
    SuiteReport::pass(NAME, "binned mass and 1x1 mean velocity consistent".into())
}

/// All suites in a fixed order.
pub fn validate_all(opts: &ValidateOptions) -> Vec<SuiteReport> {
    vec![
        force_antisymmetry(101),
        coulomb_cap(202),
        neighbor_oracle(303),
        conservation(opts),
        dissipation(opts),
        groenwall(opts),
        hydro_equilibrium(),
        binning(),
    ]
}
