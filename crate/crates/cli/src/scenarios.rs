//! Seeded test scenarios shared by `validate` and the acceptance suite.

use std::f64::consts::PI;

use floes_core::particle::init::{seeded_rng, FloeRng};
use floes_core::{Domain, FloeParams, FloeState, MaterialInputs, MaterialParams, Vec2};
use rand::Rng;
use serde::Serialize;

use crate::config::{DomainSpec, ExplicitFloe, PopulationSpec, SimConfig, VelocitySpec};

/// Twenty power-law floes in a periodic `[-1, 1]²` box with drag off.
pub fn drag_free_box(dt: f64, t_end: f64, seed: u64) -> SimConfig {
    SimConfig {
        seed,
        dt,
        t_end,
        sample_stride: 10,
        snapshot_stride: ((t_end / dt).round() as usize).max(1),
        drag_enabled: false,
        domain: DomainSpec { lower: [-1.0, -1.0], upper: [1.0, 1.0], periodic: [true, true] },
        population: PopulationSpec::PowerLaw {
            n: 20,
            r_min: 0.1,
            r_max: 0.15,
            exponent: 2.0,
            h_min: 0.5,
            h_max: 2.0,
            max_attempts: 10_000,
        },
        velocity: VelocitySpec::Gaussian { mean_v: [0.0, 0.0], sd_v: 0.5, mean_omega: 0.0, sd_omega: 1.0 },
        compare: crate::config::CompareSpec { times: vec![], threshold_u: 0.25 },
        ..SimConfig::example1()
    }
}

/// Two spinning floes meeting off-center in an open box, drag off.
pub fn binary_collision(dt: f64, t_end: f64) -> SimConfig {
    SimConfig {
        dt,
        t_end,
        sample_stride: 10,
        snapshot_stride: ((t_end / dt).round() as usize).max(1),
        drag_enabled: false,
        domain: DomainSpec { lower: [-2.0, -2.0], upper: [2.0, 2.0], periodic: [false, false] },
        population: PopulationSpec::Explicit {
            floes: vec![
                ExplicitFloe { x: -0.4, y: 0.05, r: 0.2, h: 1.0, vx: 0.6, vy: 0.0, theta: 0.0, omega: 0.8 },
                ExplicitFloe { x: 0.4, y: -0.05, r: 0.25, h: 1.5, vx: -0.5, vy: 0.1, theta: 0.0, omega: -0.3 },
            ],
        },
        velocity: VelocitySpec::Rest,
        compare: crate::config::CompareSpec { times: vec![], threshold_u: 0.25 },
        ..SimConfig::example1()
    }
}

/// One random overlapping pair in `[-π, π]²`, serializable for reports.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairCase {
    pub params: [FloeParams; 2],
    pub states: [FloeState; 2],
}

pub fn random_pair(rng: &mut FloeRng, domain: &Domain, materials: &MaterialParams) -> PairCase {
    let r = [rng.random_range(0.02..0.5), rng.random_range(0.02..0.5)];
    let h = [rng.random_range(0.3..3.0), rng.random_range(0.3..3.0)];
    let params = [0, 1].map(|k| FloeParams::from_materials(r[k], h[k], materials).expect("valid floe"));
    let d = (r[0] + r[1]) * rng.random_range(0.5..0.999);
    let phi = rng.random_range(0.0..2.0 * PI);
    let lo = domain.lower();
    let len = domain.lengths();
    let x0 = Vec2::new(lo.x + rng.random::<f64>() * len.x, lo.y + rng.random::<f64>() * len.y);
    let x1 = x0 + Vec2::new(phi.cos(), phi.sin()) * d;
    let mut kin = || (Vec2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)), rng.random_range(-3.0..3.0));
    let (v0, w0) = kin();
    let (v1, w1) = kin();
    PairCase { params, states: [FloeState::new(domain, x0, v0, 0.0, w0), FloeState::new(domain, x1, v1, 0.0, w1)] }
}

pub fn default_materials() -> MaterialParams {
    MaterialParams::new(&MaterialInputs::default(), 1e-3).expect("defaults are valid")
}

pub fn pair_rng(seed: u64) -> FloeRng {
    seeded_rng(seed)
}
