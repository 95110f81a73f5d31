use serde::{Deserialize, Serialize};

use crate::domain::{wrap_angle, Domain};
use crate::error::{param_err, Result};
use crate::material::MaterialParams;
use crate::Vec2;

/// Geometry and mass of one cylindrical floe. Mass and inertia are always
/// derived from radius, thickness and ice density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloeParams {
    radius: f64,
    thickness: f64,
    mass: f64,
    inertia: f64,
    draft: f64,
}

impl FloeParams {
    pub fn new(radius: f64, thickness: f64, rho_ice: f64, draft_ratio: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(param_err("radius", format!("{radius} must be positive")));
        }
        if !(thickness > 0.0 && thickness.is_finite()) {
            return Err(param_err("thickness", format!("{thickness} must be positive")));
        }
        let mass = rho_ice * std::f64::consts::PI * radius * radius * thickness;
        Ok(Self { radius, thickness, mass, inertia: mass * radius * radius, draft: draft_ratio * thickness })
    }

    pub fn from_materials(radius: f64, thickness: f64, materials: &MaterialParams) -> Result<Self> {
        Self::new(radius, thickness, materials.rho_ice, materials.draft_ratio)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn thickness(&self) -> f64 {
        self.thickness
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn inertia(&self) -> f64 {
        self.inertia
    }
    pub fn draft(&self) -> f64 {
        self.draft
    }
}

/// Kinematic state. `position` is wrapped into the domain for contact
/// search; `unwrapped` is never wrapped and feeds orbital angular momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloeState {
    pub position: Vec2,
    pub unwrapped: Vec2,
    pub velocity: Vec2,
    pub theta: f64,
    pub omega: f64,
}

impl FloeState {
    pub fn new(domain: &Domain, position: Vec2, velocity: Vec2, theta: f64, omega: f64) -> Self {
        Self { position: domain.wrap(position), unwrapped: position, velocity, theta: wrap_angle(theta), omega }
    }

    pub fn at_rest(domain: &Domain, position: Vec2) -> Self {
        Self::new(domain, position, Vec2::zeros(), 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.position.iter().all(|v| v.is_finite())
            && self.unwrapped.iter().all(|v| v.is_finite())
            && self.velocity.iter().all(|v| v.is_finite())
            && self.theta.is_finite()
            && self.omega.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn mass_and_inertia_are_derived(r in 1e-3f64..10.0, h in 1e-3f64..10.0, rho in 0.1f64..1000.0) {
            let p = FloeParams::new(r, h, rho, 0.9).unwrap();
            prop_assert_eq!(p.mass(), rho * std::f64::consts::PI * r * r * h);
            prop_assert_eq!(p.inertia(), p.mass() * r * r);
            prop_assert_eq!(p.draft(), 0.9 * h);
        }
    }

    #[test]
    fn rejects_non_positive_size() {
        assert!(FloeParams::new(0.0, 1.0, 1.0, 0.9).is_err());
        assert!(FloeParams::new(1.0, -1.0, 1.0, 0.9).is_err());
    }
}
