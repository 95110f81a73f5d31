//! Global material constants shared by every floe.

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Result};

/// Effective contact moduli `(E_e, G_e)` from Young's modulus and Poisson's ratio.
pub fn effective_moduli(youngs: f64, poisson: f64) -> Result<(f64, f64)> {
    if !(youngs > 0.0 && youngs.is_finite()) {
        return Err(param_err("youngs_modulus", "must be positive and finite"));
    }
    if !(poisson > -1.0 && poisson < 1.0) {
        return Err(param_err("poisson_ratio", format!("{poisson} not in (-1, 1)")));
    }
    let e_eff = youngs / (2.0 * (1.0 - poisson * poisson));
    let g_eff = youngs / (4.0 * (2.0 + poisson) * (1.0 - poisson));
    Ok((e_eff, g_eff))
}

/// Damping factor `eta = ln(e_r) / sqrt(ln(e_r)^2 + pi^2)`, always in (-1, 0).
///
/// `e_r = 0` is rejected: the logarithm diverges and the perfectly inelastic
/// limit is only approached (`eta -> -1`).
pub fn restitution_damping(restitution: f64) -> Result<f64> {
    if !(restitution > 0.0 && restitution < 1.0) {
        return Err(param_err("restitution", format!("{restitution} not in (0, 1)")));
    }
    let ln_e = restitution.ln();
    Ok(ln_e / (ln_e * ln_e + std::f64::consts::PI * std::f64::consts::PI).sqrt())
}

/// Raw user-facing material inputs; see [`MaterialParams::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialInputs {
    pub rho_ice: f64,
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub restitution: f64,
    pub friction: f64,
    pub rho_ocean: f64,
    pub c_vo: f64,
    pub c_ho: f64,
    pub v_star: f64,
    /// Cap on the contact duration; `None` means `10 * dt` at run time.
    pub t_c_max: Option<f64>,
    /// Draft as a fraction of thickness.
    pub draft_ratio: f64,
}

impl Default for MaterialInputs {
    fn default() -> Self {
        Self {
            rho_ice: 1.0,
            youngs_modulus: 1.0e4,
            poisson_ratio: 0.7,
            restitution: 0.15,
            friction: 0.2,
            rho_ocean: 1.0,
            c_vo: 2.0,
            c_ho: 4.0,
            v_star: 1.0e-6,
            t_c_max: None,
            draft_ratio: 0.9,
        }
    }
}

/// Validated material constants plus the derived moduli and damping factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialParams {
    pub rho_ice: f64,
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub restitution: f64,
    pub friction: f64,
    pub rho_ocean: f64,
    pub c_vo: f64,
    pub c_ho: f64,
    pub v_star: f64,
    pub t_c_max: f64,
    pub draft_ratio: f64,
    pub e_eff: f64,
    pub g_eff: f64,
    pub eta: f64,
}

impl MaterialParams {
    /// Validates `inputs`; `dt` supplies the default contact-time cap.
    pub fn new(inputs: &MaterialInputs, dt: f64) -> Result<Self> {
        let (e_eff, g_eff) = effective_moduli(inputs.youngs_modulus, inputs.poisson_ratio)?;
        let eta = restitution_damping(inputs.restitution)?;
        let t_c_max = inputs.t_c_max.unwrap_or(10.0 * dt);
        let positive = [
            ("rho_ice", inputs.rho_ice),
            ("rho_ocean", inputs.rho_ocean),
            ("v_star", inputs.v_star),
            ("t_c_max", t_c_max),
            ("draft_ratio", inputs.draft_ratio),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(param_err(name, format!("{v} must be positive")));
            }
        }
        for (name, v) in [("friction", inputs.friction), ("c_vo", inputs.c_vo), ("c_ho", inputs.c_ho)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(param_err(name, format!("{v} must be non-negative")));
            }
        }
        Ok(Self {
            rho_ice: inputs.rho_ice,
            youngs_modulus: inputs.youngs_modulus,
            poisson_ratio: inputs.poisson_ratio,
            restitution: inputs.restitution,
            friction: inputs.friction,
            rho_ocean: inputs.rho_ocean,
            c_vo: inputs.c_vo,
            c_ho: inputs.c_ho,
            v_star: inputs.v_star,
            t_c_max,
            draft_ratio: inputs.draft_ratio,
            e_eff,
            g_eff,
            eta,
        })
    }

    /// Replaces the damping factor without validation.
    ///
    /// Only for mutation checks that must observe a broken contact law.
    #[doc(hidden)]
    pub fn with_unchecked_damping(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn moduli_collapse_at_zero_poisson() {
        let (e, g) = effective_moduli(2.0, 0.0).unwrap();
        assert_eq!(e, 1.0);
        assert_eq!(g, 0.25);
    }

    #[test]
    fn degenerate_poisson_rejected() {
        assert!(effective_moduli(1.0e4, 1.0).is_err());
        assert!(effective_moduli(1.0e4, -1.0).is_err());
        assert!(effective_moduli(-1.0, 0.3).is_err());
    }

    #[test]
    fn damping_bounds() {
        assert!(restitution_damping(0.0).is_err());
        assert!(restitution_damping(1.0).is_err());
        let near_one = restitution_damping(1.0 - 1e-12).unwrap();
        assert!(near_one < 0.0 && near_one > -1e-11);
        let mut prev = -1.0;
        for k in 1..1000 {
            let eta = restitution_damping(k as f64 / 1000.0).unwrap();
            assert!(eta > -1.0 && eta < 0.0);
            assert!(eta > prev, "eta must increase with e_r");
            prev = eta;
        }
    }

    #[test]
    fn default_cap_tracks_dt() {
        let m = MaterialParams::new(&MaterialInputs::default(), 1e-3).unwrap();
        assert_relative_eq!(m.t_c_max, 1e-2);
        assert!(m.eta < 0.0);
        let bad = MaterialInputs { restitution: 1.0, ..Default::default() };
        assert!(MaterialParams::new(&bad, 1e-3).is_err());
    }
}
