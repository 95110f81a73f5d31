//! Particle engine: ensemble assembly, stepping, neighbor search and seeded
//! initial conditions.

pub mod drag;
pub mod init;
pub mod neighbors;
pub mod system;

pub use drag::{drag_coeffs, DragCoefficients};
pub use neighbors::{brute_force_contacts, candidate_pairs, CellList, CutoffPolicy};
pub use system::{ContactStats, ForceField, ParticleSystem};
