//! Global moments of the floe ensemble and checks of their balance laws.

use std::sync::OnceLock;

use serde::Serialize;

use crate::contact::{cross, normal_stiffness};
use crate::error::{param_err, FloeError, Result};
use crate::floe::FloeParams;
use crate::material::MaterialParams;
use crate::particle::{ContactStats, ParticleSystem};
use crate::Vec2;

const GL_ORDER: usize = 16;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, found by Newton iteration
/// on `P_16`.
fn gauss_legendre() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static RULE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut x = [0.0; GL_ORDER];
        let mut w = [0.0; GL_ORDER];
        for k in 0..n {
            let mut z = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for m in 2..=n {
                    let p2 = ((2 * m - 1) as f64 * z * p1 - (m - 1) as f64 * p0) / m as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let step = p1 / dp;
                z -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            x[k] = z;
            w[k] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        (x, w)
    })
}

/// Integrates `f` over `[a, b]` with the fixed 16-point Gauss-Legendre rule.
pub fn gauss_legendre_16(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter().zip(w).map(|(&xi, &wi)| wi * f(mid + half * xi)).sum::<f64>() * half
}

/// Normal strain energy `∫_0^δ κ₁(s) s ds` of one contact (non-negative).
pub fn pair_strain_energy(delta: f64, eff_thickness: f64, eff_radius: f64, materials: &MaterialParams) -> f64 {
    if delta >= 0.0 {
        return 0.0;
    }
    -gauss_legendre_16(delta, 0.0, |s| normal_stiffness(s, eff_thickness, eff_radius, materials) * s)
}

/// Snapshot of the ensemble moments at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentRecord {
    pub t: f64,
    pub m0: f64,
    pub m1v: Vec2,
    /// Orbital (from unwrapped positions) plus spin angular momentum.
    pub m1w: f64,
    pub m2x: f64,
    pub m2v: f64,
    pub m2w: f64,
    pub m2: f64,
    pub dissipation_normal: f64,
    pub dissipation_tangential: f64,
    pub drag_power_lin: f64,
    pub drag_power_rot: f64,
    /// `Σ` drag forces.
    pub drag_force: Vec2,
    /// `Σ (x̃ × F_drag + T_drag)`.
    pub drag_moment: f64,
    /// `Σ_{i<j} ½ κ₁ δ²`, without mean-field scaling.
    pub strain_unscaled: f64,
    pub contacts: usize,
    pub mean_slip: f64,
    pub mean_abs_omega: f64,
    pub mean_velocity: Vec2,
    pub mean_omega: f64,
    pub max_force: f64,
    pub stats: ContactStats,
}

/// Computes all moments of `system` at its current state.
pub fn moments(system: &ParticleSystem) -> Result<MomentRecord> {
    let n = system.len() as f64;
    let scale = system.contact_scale();
    let materials = system.materials();
    let states = system.states();
    let params = system.params();
    let ocean = system.ocean();

    let mut r = MomentRecord {
        t: system.time(),
        m0: 0.0,
        m1v: Vec2::zeros(),
        m1w: 0.0,
        m2x: 0.0,
        m2v: 0.0,
        m2w: 0.0,
        m2: 0.0,
        dissipation_normal: 0.0,
        dissipation_tangential: 0.0,
        drag_power_lin: 0.0,
        drag_power_rot: 0.0,
        drag_force: Vec2::zeros(),
        drag_moment: 0.0,
        strain_unscaled: 0.0,
        contacts: 0,
        mean_slip: 0.0,
        mean_abs_omega: 0.0,
        mean_velocity: Vec2::zeros(),
        mean_omega: 0.0,
        max_force: 0.0,
        stats: ContactStats::default(),
    };

    for (k, (s, p)) in states.iter().zip(params).enumerate() {
        let m = p.mass();
        r.m0 += m;
        r.m1v += s.velocity * m;
        r.m1w += m * cross(s.unwrapped, s.velocity) + p.inertia() * s.omega;
        r.m2v += 0.5 * m * s.velocity.norm_squared();
        r.m2w += 0.5 * p.inertia() * s.omega * s.omega;
        let (fd, td) = system.drag_on(k);
        r.drag_force += fd;
        r.drag_moment += cross(s.unwrapped, fd) + td;
        r.drag_power_lin += fd.dot(&s.velocity);
        r.drag_power_rot += td * s.omega;
        r.mean_slip += (s.velocity - ocean.velocity(s.position)).norm();
        r.mean_abs_omega += s.omega.abs();
        r.mean_velocity += s.velocity;
        r.mean_omega += s.omega;
    }
    r.mean_slip /= n;
    r.mean_abs_omega /= n;
    r.mean_velocity /= n;
    r.mean_omega /= n;

    let mut strain = 0.0;
    let mut dn = 0.0;
    let mut dt = 0.0;
    for c in system.contacts()? {
        let g = &c.geometry;
        strain += pair_strain_energy(g.overlap, g.eff_thickness, g.eff_radius, materials);
        r.strain_unscaled += 0.5 * c.k_normal * g.overlap * g.overlap;
        dn += c.normal_dissipation(states[c.i].velocity, states[c.j].velocity);
        dt += c.tangential_dissipation();
    }
    r.m2x = scale * strain;
    r.dissipation_normal = scale * dn;
    r.dissipation_tangential = scale * dt;
    r.m2 = r.m2x + r.m2v + r.m2w;

    let field = system.total_force_torque()?;
    r.contacts = field.stats.contacts;
    r.stats = field.stats;
    r.max_force = field.max_force();
    Ok(r)
}

/// Maximum and RMS mismatch of the discrete balance laws along a history.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalanceResiduals {
    pub momentum_max: f64,
    pub momentum_rms: f64,
    pub energy_max: f64,
    pub energy_rms: f64,
    pub angular_max: f64,
    pub angular_rms: f64,
}

/// Central-difference residuals of `dM₁ᵥ/dt = ΣF_drag`,
/// `dM₂/dt = D_n + D_t + P_drag` and `dM₁ω/dt = Σ(x̃ × F_drag + T_drag)`.
///
/// The angular residual is only meaningful on open domains.
pub fn balance_residuals(history: &[MomentRecord]) -> Result<BalanceResiduals> {
    if history.len() < 3 {
        return Err(param_err("history", "need at least 3 samples"));
    }
    let h = history[1].t - history[0].t;
    if !(h > 0.0) {
        return Err(param_err("history", "sample times must increase"));
    }
    for w in history.windows(2) {
        if ((w[1].t - w[0].t) - h).abs() > 1e-9 * h.max(1.0) {
            return Err(param_err("history", "samples are not uniformly spaced"));
        }
    }
    let (mut mm, mut ms, mut em, mut es, mut am, mut as_) = (0.0f64, 0.0, 0.0f64, 0.0, 0.0f64, 0.0);
    let count = history.len() - 2;
    for w in history.windows(3) {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        let dm1 = (c.m1v - a.m1v) / (2.0 * h) - b.drag_force;
        let de = (c.m2 - a.m2) / (2.0 * h)
            - (b.dissipation_normal + b.dissipation_tangential + b.drag_power_lin + b.drag_power_rot);
        let dl = (c.m1w - a.m1w) / (2.0 * h) - b.drag_moment;
        let (x, y, z) = (dm1.norm(), de.abs(), dl.abs());
        mm = mm.max(x);
        em = em.max(y);
        am = am.max(z);
        ms += x * x;
        es += y * y;
        as_ += z * z;
    }
    let c = count as f64;
    Ok(BalanceResiduals {
        momentum_max: mm,
        momentum_rms: (ms / c).sqrt(),
        energy_max: em,
        energy_rms: (es / c).sqrt(),
        angular_max: am,
        angular_rms: (as_ / c).sqrt(),
    })
}

/// Trajectory extremes entering the energy lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroenwallConstants {
    pub kappa2_max: f64,
    pub kappa3_max: f64,
    pub contact_time_max: f64,
    pub m_min: f64,
    pub m_max: f64,
    pub n: usize,
}

impl GroenwallConstants {
    /// Uses `|κ₂|` as the damping magnitude.
    pub fn new(stats: &ContactStats, params: &[FloeParams]) -> Self {
        let m_min = params.iter().map(|p| p.mass()).fold(f64::INFINITY, f64::min);
        let m_max = params.iter().map(|p| p.mass()).fold(0.0, f64::max);
        Self {
            kappa2_max: stats.kappa2_max_abs,
            kappa3_max: stats.kappa3_max,
            contact_time_max: stats.contact_time_max,
            m_min,
            m_max,
            n: params.len(),
        }
    }

    pub fn a0(&self) -> f64 {
        2.0 * self.kappa2_max * self.m_max / (self.m_min * self.m_min)
            + 6.0 * self.kappa3_max * self.contact_time_max / self.m_min
    }

    pub fn a1(&self) -> f64 {
        self.kappa2_max / (self.n as f64 * self.m_min * self.m_min)
    }

    /// `M₂(0) e^{-A₀t} + (A₁/A₀)|M₁ᵥ(0)|²(1 - e^{-A₀t})`.
    pub fn bound(&self, t: f64, m2_0: f64, momentum_0_sq: f64) -> f64 {
        let a0 = self.a0();
        if a0 == 0.0 {
            return m2_0;
        }
        let decay = (-a0 * t).exp();
        m2_0 * decay + self.a1() / a0 * momentum_0_sq * (1.0 - decay)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroenwallReport {
    pub holds: bool,
    /// `min_t (M₂(t) - bound(t))`.
    pub min_margin: f64,
    pub worst_t: f64,
    pub a0: f64,
    pub a1: f64,
}

/// Checks the energy lower bound at every sample of a drag-free history.
///
/// A margin down to `-1e-12 M₂(0)` is accepted as floating-point noise.
pub fn groenwall_bound_check(
    history: &[MomentRecord],
    constants: &GroenwallConstants,
    drag_enabled: bool,
) -> Result<GroenwallReport> {
    if drag_enabled {
        return Err(FloeError::DragEnabled);
    }
    let first = history.first().ok_or_else(|| param_err("history", "empty"))?;
    let p0 = first.m1v.norm_squared();
    let mut min_margin = f64::INFINITY;
    let mut worst_t = first.t;
    for rec in history {
        let margin = rec.m2 - constants.bound(rec.t - first.t, first.m2, p0);
        if margin < min_margin {
            min_margin = margin;
            worst_t = rec.t;
        }
    }
    Ok(GroenwallReport {
        holds: min_margin >= -1e-12 * first.m2.abs(),
        min_margin,
        worst_t,
        a0: constants.a0(),
        a1: constants.a1(),
    })
}
