//! Continuum (hydrodynamic) model on a periodic P1 mesh.

pub mod mesh;
pub mod solver;

pub use mesh::{Coupling, PeriodicMesh};
pub use solver::{
    continuum_drag_from_particles, hydro_energy, hydro_step, total_mass, DragConvention, GridFields, HydroConfig,
    HydroEnergy, NodalOcean, CFL_LIMIT, DEFAULT_RHO_FLOOR,
};
