//! Pairwise Hertz normal law with Coulomb-capped tangential friction.
//!
//! Conventions: `normal` points from floe `i` to floe `j`, `tangent` is the
//! normal rotated counterclockwise by 90 degrees, and an overlap `delta < 0`
//! means the floes are in contact. Every quantity that is symmetric in
//! `(i, j)` is evaluated with commutative operations only, so swapping the
//! pair negates forces bit for bit.

use serde::Serialize;

use crate::domain::Domain;
use crate::error::{FloeError, Result};
use crate::floe::{FloeParams, FloeState};
use crate::material::MaterialParams;
use crate::Vec2;

const G_NUM: [f64; 3] = [0.9117, -0.2722, 0.003324];
const G_DEN: [f64; 3] = [1.0, -1.524, 0.03159];
const CONTACT_TIME_PREFACTOR: f64 = 2.94;

/// Rational Hertz correction `g(xi)`; defined on the contact branch `xi <= 0`.
pub fn g_ratio(xi: f64) -> Result<f64> {
    if xi > 0.0 || xi.is_nan() {
        return Err(FloeError::RatioDomain(xi));
    }
    Ok(g_ratio_unchecked(xi))
}

#[inline]
fn g_ratio_unchecked(xi: f64) -> f64 {
    (G_NUM[0] * xi * xi + G_NUM[1] * xi + G_NUM[2]) / (G_DEN[0] * xi * xi + G_DEN[1] * xi + G_DEN[2])
}

/// Normal stiffness `kappa_1` for overlap `delta` (zero outside contact).
pub fn normal_stiffness(delta: f64, eff_thickness: f64, eff_radius: f64, materials: &MaterialParams) -> f64 {
    if delta >= 0.0 {
        return 0.0;
    }
    let xi = delta * eff_radius / (2.0 * eff_thickness * eff_thickness);
    std::f64::consts::PI * materials.e_eff * eff_thickness * g_ratio_unchecked(xi)
}

/// Contact geometry of an ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContactGeometry {
    pub overlap: f64,
    pub distance: f64,
    pub normal: Vec2,
    pub tangent: Vec2,
    pub eff_thickness: f64,
    pub eff_radius: f64,
    pub eff_mass: f64,
}

impl ContactGeometry {
    pub fn in_contact(&self) -> bool {
        self.overlap < 0.0
    }
}

#[inline]
fn rotate_ccw(v: Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

/// Scalar 2-D cross product `a x b`.
#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

pub fn resolve_geometry(
    (i, state_i, params_i): (usize, &FloeState, &FloeParams),
    (j, state_j, params_j): (usize, &FloeState, &FloeParams),
    domain: &Domain,
) -> Result<ContactGeometry> {
    let disp = domain.min_image(state_i.position, state_j.position);
    let distance = disp.x.hypot(disp.y);
    if distance == 0.0 {
        return Err(FloeError::SingularConfiguration { i, j });
    }
    let normal = disp / distance;
    let (ri, rj) = (params_i.radius(), params_j.radius());
    let (mi, mj) = (params_i.mass(), params_j.mass());
    Ok(ContactGeometry {
        overlap: distance - (ri + rj),
        distance,
        normal,
        tangent: rotate_ccw(normal),
        eff_thickness: params_i.thickness().min(params_j.thickness()),
        eff_radius: ri * rj / (ri + rj),
        eff_mass: mi * mj / (mi + mj),
    })
}

/// `(kappa_1, kappa_2, kappa_3)`; all zero when `delta >= 0`.
pub fn stiffnesses(
    delta: f64,
    eff_thickness: f64,
    eff_radius: f64,
    eff_mass: f64,
    materials: &MaterialParams,
) -> (f64, f64, f64) {
    let k1 = normal_stiffness(delta, eff_thickness, eff_radius, materials);
    if k1 == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let k2 = materials.eta * (5.0 * k1 * eff_mass).sqrt();
    let k3 = 6.0 * (materials.g_eff / materials.e_eff) * k1;
    (k1, k2, k3)
}

/// Regularized and capped contact duration
/// `min(t_c_max, 2.94 (m_e/kappa_1)^(2/5) (|dv| + v_star)^(-1/5))`.
pub fn contact_duration(eff_mass: f64, k1: f64, rel_speed: f64, materials: &MaterialParams) -> f64 {
    let raw = CONTACT_TIME_PREFACTOR * (eff_mass / k1).powf(0.4) * (rel_speed + materials.v_star).powf(-0.2);
    raw.min(materials.t_c_max)
}

/// One fully resolved ordered contact `(i, j)`: forces act on `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContactPair {
    pub i: usize,
    pub j: usize,
    pub geometry: ContactGeometry,
    pub k_normal: f64,
    pub k_damping: f64,
    pub k_tangential: f64,
    pub contact_time: f64,
    pub slip_rate: f64,
    pub shear: f64,
    pub friction_scale: f64,
    pub normal_force: Vec2,
    pub tangential_force: Vec2,
    pub torque_i: f64,
    pub torque_j: f64,
}

impl ContactPair {
    pub fn force(&self) -> Vec2 {
        self.normal_force + self.tangential_force
    }

    pub fn in_contact(&self) -> bool {
        self.geometry.in_contact()
    }

    /// `kappa_2 ((v_i - v_j) . n)^2`, the normal dissipation density (<= 0).
    pub fn normal_dissipation(&self, vi: Vec2, vj: Vec2) -> f64 {
        let vn = (vi - vj).dot(&self.geometry.normal);
        self.k_damping * vn * vn
    }

    /// `-zeta kappa_3 t_c sigma_t^2`, the tangential dissipation density (<= 0).
    pub fn tangential_dissipation(&self) -> f64 {
        -self.friction_scale * self.k_tangential * self.contact_time * self.slip_rate * self.slip_rate
    }
}

/// Resolves the full contact between floes `i` and `j`.
pub fn pair_force_torque(
    i: (usize, &FloeState, &FloeParams),
    j: (usize, &FloeState, &FloeParams),
    materials: &MaterialParams,
    domain: &Domain,
) -> Result<ContactPair> {
    let geometry = resolve_geometry(i, j, domain)?;
    Ok(pair_from_geometry(i, j, geometry, materials))
}

pub(crate) fn pair_from_geometry(
    (i, si, pi): (usize, &FloeState, &FloeParams),
    (j, sj, pj): (usize, &FloeState, &FloeParams),
    geometry: ContactGeometry,
    materials: &MaterialParams,
) -> ContactPair {
    let mut pair = ContactPair {
        i,
        j,
        geometry,
        k_normal: 0.0,
        k_damping: 0.0,
        k_tangential: 0.0,
        contact_time: 0.0,
        slip_rate: 0.0,
        shear: 0.0,
        friction_scale: 1.0,
        normal_force: Vec2::zeros(),
        tangential_force: Vec2::zeros(),
        torque_i: 0.0,
        torque_j: 0.0,
    };
    if !geometry.in_contact() {
        return pair;
    }
    let (k1, k2, k3) =
        stiffnesses(geometry.overlap, geometry.eff_thickness, geometry.eff_radius, geometry.eff_mass, materials);
    let n = geometry.normal;
    let t = geometry.tangent;
    let dv = si.velocity - sj.velocity;
    let rel_speed = dv.x.hypot(dv.y);
    let tc = contact_duration(geometry.eff_mass, k1, rel_speed, materials);

    // rim speeds are summed first so the expression is symmetric in (i, j)
    let rim = pi.radius() * si.omega + pj.radius() * sj.omega;
    let slip_rate = (-dv).dot(&t) - rim;
    let shear = tc * slip_rate;

    let normal_force = n * (k1 * geometry.overlap + k2 * dv.dot(&n));
    let trial = t * (k3 * shear);
    let fn_mag = normal_force.norm();
    let ft_mag = trial.norm();
    let cap = materials.friction * fn_mag;
    // also yields zeta = 0 when |f_n| vanishes during contact
    let zeta = if ft_mag <= cap { 1.0 } else { cap / ft_mag };
    let mut tangential_force = trial * zeta;
    // rounding in the rescale can leave |f_t| a few ulps above the cap
    while tangential_force.norm() > cap {
        tangential_force *= 1.0 - f64::EPSILON;
    }
    let lever = cross(n, tangential_force);

    pair.k_normal = k1;
    pair.k_damping = k2;
    pair.k_tangential = k3;
    pair.contact_time = tc;
    pair.slip_rate = slip_rate;
    pair.shear = shear;
    pair.friction_scale = zeta;
    pair.normal_force = normal_force;
    pair.tangential_force = tangential_force;
    pair.torque_i = pi.radius() * lever;
    pair.torque_j = pj.radius() * lever;
    pair
}
