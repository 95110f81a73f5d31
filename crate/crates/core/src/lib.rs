//! Sea-ice floe dynamics: a discrete element engine for rotating, colliding
//! disks with Hertz contact and Coulomb friction, moment diagnostics, a P1
//! continuum solver for the closed hydrodynamic system, and particle to grid
//! coarse-graining.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coarsegrain;
pub mod contact;
pub mod diagnostics;
pub mod domain;
pub mod error;
pub mod floe;
pub mod hydro;
pub mod material;
pub mod ocean;
pub mod particle;

pub type Vec2 = nalgebra::Vector2<f64>;

pub use contact::{pair_force_torque, ContactPair};
pub use domain::Domain;
pub use error::{FloeError, Result};
pub use floe::{FloeParams, FloeState};
pub use material::{MaterialInputs, MaterialParams};
pub use ocean::OceanField;
pub use particle::ParticleSystem;
