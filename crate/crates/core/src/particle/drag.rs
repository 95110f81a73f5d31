use serde::Serialize;

use crate::floe::FloeParams;
use crate::material::MaterialParams;

/// Quadratic ocean-drag coefficients of one floe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DragCoefficients {
    /// Linear drag, `pi rho_o (2 C_vo r D + C_ho r^2)`.
    pub alpha: f64,
    /// Rotational drag, `pi r^4 rho_o (C_vo D + r C_ho / 5)`.
    pub beta: f64,
}

impl DragCoefficients {
    pub const ZERO: Self = Self { alpha: 0.0, beta: 0.0 };
}

pub fn drag_coeffs(params: &FloeParams, materials: &MaterialParams) -> DragCoefficients {
    let r = params.radius();
    let d = params.draft();
    let rho = materials.rho_ocean;
    let pi = std::f64::consts::PI;
    DragCoefficients {
        alpha: pi * rho * (2.0 * materials.c_vo * r * d + materials.c_ho * r * r),
        beta: pi * r.powi(4) * rho * (materials.c_vo * d + r * materials.c_ho / 5.0),
    }
}
