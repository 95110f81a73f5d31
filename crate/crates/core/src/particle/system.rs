//! The floe ensemble, its force assembly and the forward-Euler update.

use rayon::prelude::*;
use serde::Serialize;

use super::drag::{drag_coeffs, DragCoefficients};
use super::neighbors::{candidate_pairs, cell_size_for, CellList, CutoffPolicy};
use crate::contact::{pair_from_geometry, resolve_geometry, ContactPair};
use crate::domain::{wrap_angle, Domain};
use crate::error::{param_err, FloeError, Result};
use crate::floe::{FloeParams, FloeState};
use crate::material::MaterialParams;
use crate::ocean::OceanField;
use crate::Vec2;

#[derive(Debug, Clone)]
pub struct ParticleSystem {
    domain: Domain,
    materials: MaterialParams,
    ocean: OceanField,
    params: Vec<FloeParams>,
    states: Vec<FloeState>,
    drag: Vec<DragCoefficients>,
    time: f64,
    seed: u64,
    mean_field_scaling: bool,
    cutoff: CutoffPolicy,
}

/// Contact extremes seen during one force evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ContactStats {
    /// Unordered contacting pairs.
    pub contacts: usize,
    pub kappa2_max_abs: f64,
    pub kappa3_max: f64,
    pub contact_time_max: f64,
}

impl ContactStats {
    fn absorb(&mut self, c: &ContactPair) {
        self.kappa2_max_abs = self.kappa2_max_abs.max(c.k_damping.abs());
        self.kappa3_max = self.kappa3_max.max(c.k_tangential);
        self.contact_time_max = self.contact_time_max.max(c.contact_time);
    }

    pub fn merge(&mut self, other: &ContactStats) {
        self.contacts += other.contacts;
        self.kappa2_max_abs = self.kappa2_max_abs.max(other.kappa2_max_abs);
        self.kappa3_max = self.kappa3_max.max(other.kappa3_max);
        self.contact_time_max = self.contact_time_max.max(other.contact_time_max);
    }
}

/// Per-floe totals `(F_i, T_i)` with the drag part kept separately.
#[derive(Debug, Clone, Default)]
pub struct ForceField {
    pub force: Vec<Vec2>,
    pub torque: Vec<f64>,
    pub drag_force: Vec<Vec2>,
    pub drag_torque: Vec<f64>,
    pub stats: ContactStats,
}

impl ForceField {
    pub fn max_force(&self) -> f64 {
        self.force.iter().map(|f| f.norm()).fold(0.0, f64::max)
    }
}

struct FloeTotals {
    contact_force: Vec2,
    contact_torque: f64,
    drag_force: Vec2,
    drag_torque: f64,
    stats: ContactStats,
}

impl ParticleSystem {
    pub fn new(
        domain: Domain,
        materials: MaterialParams,
        ocean: OceanField,
        floes: Vec<(FloeParams, FloeState)>,
        seed: u64,
    ) -> Result<Self> {
        if floes.is_empty() {
            return Err(param_err("floes", "at least one floe is required"));
        }
        let (params, mut states): (Vec<_>, Vec<_>) = floes.into_iter().unzip();
        for (k, s) in states.iter_mut().enumerate() {
            if !s.is_finite() {
                return Err(param_err("floes", format!("floe {k} has a non-finite state")));
            }
            s.position = domain.wrap(s.position);
        }
        let drag = params.iter().map(|p| drag_coeffs(p, &materials)).collect();
        Ok(Self {
            domain,
            materials,
            ocean,
            params,
            states,
            drag,
            time: 0.0,
            seed,
            mean_field_scaling: true,
            cutoff: CutoffPolicy::Auto,
        })
    }

    /// Toggles the `1/n` prefactor on contact sums (on by default).
    pub fn with_mean_field_scaling(mut self, on: bool) -> Self {
        self.mean_field_scaling = on;
        self
    }

    /// Sets `alpha = beta = 0` for every floe.
    pub fn without_drag(mut self) -> Self {
        self.drag.iter_mut().for_each(|d| *d = DragCoefficients::ZERO);
        self
    }

    /// Replaces the material constants; drag coefficients are recomputed
    /// unless drag was switched off.
    pub fn with_materials(mut self, materials: MaterialParams) -> Self {
        let drag_on = self.drag_enabled();
        self.materials = materials;
        if drag_on {
            self.drag = self.params.iter().map(|p| drag_coeffs(p, &self.materials)).collect();
        }
        self
    }

    pub fn with_cutoff(mut self, cutoff: CutoffPolicy) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }
    pub fn materials(&self) -> &MaterialParams {
        &self.materials
    }
    pub fn ocean(&self) -> &OceanField {
        &self.ocean
    }
    pub fn params(&self) -> &[FloeParams] {
        &self.params
    }
    pub fn states(&self) -> &[FloeState] {
        &self.states
    }
    pub fn drag(&self) -> &[DragCoefficients] {
        &self.drag
    }
    pub fn time(&self) -> f64 {
        self.time
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn mean_field_scaling(&self) -> bool {
        self.mean_field_scaling
    }

    pub fn drag_enabled(&self) -> bool {
        self.drag.iter().any(|d| d.alpha != 0.0 || d.beta != 0.0)
    }

    /// Prefactor applied to every pairwise contact sum.
    pub fn contact_scale(&self) -> f64 {
        if self.mean_field_scaling {
            1.0 / self.len() as f64
        } else {
            1.0
        }
    }

    pub fn positions(&self) -> Vec<Vec2> {
        self.states.iter().map(|s| s.position).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.params.iter().map(|p| p.radius()).collect()
    }

    fn max_radius(&self) -> f64 {
        self.params.iter().map(|p| p.radius()).fold(0.0, f64::max)
    }

    /// Candidate pairs `(i, j)`, `i < j`, from the cell list.
    pub fn neighbor_pairs(&self) -> Vec<(usize, usize)> {
        candidate_pairs(&self.domain, &self.positions(), &self.radii(), self.cutoff)
    }

    /// Resolves pair `(i, j)` with forces acting on `i`.
    pub fn pair(&self, i: usize, j: usize) -> Result<ContactPair> {
        let a = (i, &self.states[i], &self.params[i]);
        let b = (j, &self.states[j], &self.params[j]);
        let g = resolve_geometry(a, b, &self.domain)?;
        Ok(pair_from_geometry(a, b, g, &self.materials))
    }

    /// Every contacting pair `(i, j)` with `i < j`, in ascending order.
    pub fn contacts(&self) -> Result<Vec<ContactPair>> {
        let mut out = Vec::new();
        for (i, j) in self.neighbor_pairs() {
            let c = self.pair(i, j)?;
            if c.in_contact() {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Linear and rotational drag on floe `i`.
    pub fn drag_on(&self, i: usize) -> (Vec2, f64) {
        let s = &self.states[i];
        let d = &self.drag[i];
        if d.alpha == 0.0 && d.beta == 0.0 {
            return (Vec2::zeros(), 0.0);
        }
        let slip = self.ocean.velocity(s.position) - s.velocity;
        let spin_slip = 0.5 * self.ocean.curl(s.position) - s.omega;
        (slip * (d.alpha * slip.norm()), d.beta * spin_slip * spin_slip.abs())
    }

    fn floe_totals(&self, i: usize, list: &CellList, buf: &mut Vec<usize>) -> Result<FloeTotals> {
        list.candidates(i, buf);
        let mut force = Vec2::zeros();
        let mut torque = 0.0;
        let mut stats = ContactStats::default();
        for &j in buf.iter() {
            let c = self.pair(i, j)?;
            if !c.in_contact() {
                continue;
            }
            force += c.force();
            torque += c.torque_i;
            if i < j {
                stats.contacts += 1;
            }
            stats.absorb(&c);
        }
        let (drag_force, drag_torque) = self.drag_on(i);
        Ok(FloeTotals { contact_force: force, contact_torque: torque, drag_force, drag_torque, stats })
    }

    /// Per-floe force and torque. Each floe sums its contacts in ascending
    /// partner order, so the result does not depend on the thread count.
    pub fn total_force_torque(&self) -> Result<ForceField> {
        let positions = self.positions();
        let list = CellList::build(&self.domain, &positions, cell_size_for(self.cutoff, self.max_radius()));
        let totals: Vec<Result<FloeTotals>> =
            (0..self.len()).into_par_iter().map_init(Vec::new, |buf, i| self.floe_totals(i, &list, buf)).collect();
        let scale = self.contact_scale();
        let mut field = ForceField {
            force: Vec::with_capacity(self.len()),
            torque: Vec::with_capacity(self.len()),
            drag_force: Vec::with_capacity(self.len()),
            drag_torque: Vec::with_capacity(self.len()),
            stats: ContactStats::default(),
        };
        for t in totals {
            let t = t?;
            field.force.push(t.contact_force * scale + t.drag_force);
            field.torque.push(t.contact_torque * scale + t.drag_torque);
            field.drag_force.push(t.drag_force);
            field.drag_torque.push(t.drag_torque);
            field.stats.merge(&t.stats);
        }
        Ok(field)
    }

    /// One forward-Euler step with forces evaluated at the current state.
    pub fn step_euler(&mut self, dt: f64) -> Result<ForceField> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(param_err("dt", format!("{dt} must be positive")));
        }
        let field = self.total_force_torque()?;
        let domain = self.domain;
        let next: Vec<FloeState> = self
            .states
            .par_iter()
            .zip(self.params.par_iter())
            .zip(field.force.par_iter().zip(field.torque.par_iter()))
            .map(|((s, p), (f, tq))| {
                let unwrapped = s.unwrapped + s.velocity * dt;
                FloeState {
                    position: domain.wrap(unwrapped),
                    unwrapped,
                    velocity: s.velocity + f * (dt / p.mass()),
                    theta: wrap_angle(s.theta + dt * s.omega),
                    omega: s.omega + dt * tq / p.inertia(),
                }
            })
            .collect();
        if let Some(floe) = next.iter().position(|s| !s.is_finite()) {
            return Err(FloeError::Diverged { floe, t: self.time + dt });
        }
        self.states = next;
        self.time += dt;
        Ok(field)
    }

    /// Mutable access for test harnesses that script states directly.
    pub fn states_mut(&mut self) -> &mut [FloeState] {
        &mut self.states
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }
}
