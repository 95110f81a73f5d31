//! Run configuration, read from TOML.
//!
//! ```toml
//! mode = "particle"
//! seed = 1
//! dt = 1e-3
//! T = 10.0
//! sample_stride = 10
//! snapshot_stride = 100
//!
//! [domain]
//! lower = [-3.141592653589793, -3.141592653589793]
//! upper = [3.141592653589793, 3.141592653589793]
//! periodic = [true, true]
//!
//! [materials]
//! restitution = 0.15
//!
//! [ocean]
//! kind = "constant"
//! velocity = [0.3, 0.0]
//!
//! [population]
//! kind = "power_law"
//! n = 100
//! r_min = 0.08
//! r_max = 0.32
//!
//! [velocity]
//! kind = "gaussian"
//! ```
//!
//! Every key has a default; unknown keys are rejected.

use std::f64::consts::PI;

use anyhow::{bail, Context};
use floes_core::hydro::DragConvention;
use floes_core::{Domain, MaterialInputs, OceanField};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Particle,
    Hydro,
    Compare,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainSpec {
    pub lower: [f64; 2],
    pub upper: [f64; 2],
    pub periodic: [bool; 2],
}

impl Default for DomainSpec {
    fn default() -> Self {
        Self { lower: [-PI, -PI], upper: [PI, PI], periodic: [true, true] }
    }
}

impl DomainSpec {
    pub fn build(&self) -> floes_core::Result<Domain> {
        Domain::new(self.lower, self.upper, self.periodic)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitFloe {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub h: f64,
    #[serde(default)]
    pub vx: f64,
    #[serde(default)]
    pub vy: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PopulationSpec {
    /// Radii with density `∝ r^-exponent`, thickness uniform on
    /// `[h_min, h_max]`, rejection-sampled positions.
    PowerLaw {
        n: usize,
        r_min: f64,
        r_max: f64,
        #[serde(default = "default_exponent")]
        exponent: f64,
        #[serde(default = "default_h_min")]
        h_min: f64,
        #[serde(default = "default_h_max")]
        h_max: f64,
        #[serde(default = "default_max_attempts")]
        max_attempts: usize,
    },
    /// Identical floes at the centers of an `nx × ny` partition.
    Lattice { nx: usize, ny: usize, radius: f64, thickness: f64 },
    /// Floes listed one by one; their kinematics override `[velocity]`.
    Explicit { floes: Vec<ExplicitFloe> },
}

fn default_exponent() -> f64 {
    2.0
}
fn default_h_min() -> f64 {
    0.5
}
fn default_h_max() -> f64 {
    2.0
}
fn default_max_attempts() -> usize {
    floes_core::particle::init::DEFAULT_MAX_ATTEMPTS
}

impl Default for PopulationSpec {
    fn default() -> Self {
        PopulationSpec::PowerLaw {
            n: 100,
            r_min: 0.08,
            r_max: 0.32,
            exponent: 2.0,
            h_min: 0.5,
            h_max: 2.0,
            max_attempts: default_max_attempts(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VelocitySpec {
    /// `v = mean_v + sd_v N(0, I)`, `ω = mean_omega + sd_omega N(0, 1)`.
    Gaussian {
        #[serde(default = "default_mean_v")]
        mean_v: [f64; 2],
        #[serde(default = "default_sd")]
        sd_v: f64,
        #[serde(default = "default_mean_omega")]
        mean_omega: f64,
        #[serde(default = "default_sd_omega")]
        sd_omega: f64,
    },
    Rest,
}

fn default_mean_v() -> [f64; 2] {
    [0.2, 0.0]
}
fn default_sd() -> f64 {
    0.2
}
fn default_mean_omega() -> f64 {
    0.1
}
fn default_sd_omega() -> f64 {
    0.3
}

impl Default for VelocitySpec {
    fn default() -> Self {
        VelocitySpec::Gaussian { mean_v: [0.2, 0.0], sd_v: 0.2, mean_omega: 0.1, sd_omega: 0.3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HydroSpec {
    pub nx: usize,
    pub ny: usize,
    /// Artificial diffusion factor in `ε = c_art h |u|_max`.
    pub c_art: f64,
    pub rho_floor: f64,
    pub drag_convention: DragConvention,
    /// Initial (normalized) density, also `ρ_ref` of the drag convention.
    pub rho_init: f64,
    /// Explicit `ᾱ`/`β̄`; derived from the population when absent.
    pub alpha_bar: Option<f64>,
    pub beta_bar: Option<f64>,
    /// Floe radius for `ρ_I = r²ρ`; taken from the population when absent.
    pub floe_radius: Option<f64>,
}

impl Default for HydroSpec {
    fn default() -> Self {
        Self {
            nx: 25,
            ny: 25,
            c_art: 0.5,
            rho_floor: floes_core::hydro::DEFAULT_RHO_FLOOR,
            drag_convention: DragConvention::Integral,
            rho_init: 1.0,
            alpha_bar: None,
            beta_bar: None,
            floe_radius: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareSpec {
    pub times: Vec<f64>,
    /// Acceptance threshold for the relative velocity discrepancy.
    pub threshold_u: f64,
}

impl Default for CompareSpec {
    fn default() -> Self {
        Self { times: vec![0.0, 1.0, 10.0], threshold_u: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub mode: Mode,
    pub run_id: Option<String>,
    pub seed: u64,
    pub dt: f64,
    #[serde(rename = "T", alias = "t_end")]
    pub t_end: f64,
    /// Steps between moment samples.
    pub sample_stride: usize,
    /// Steps between floe / field snapshots.
    pub snapshot_stride: usize,
    pub mean_field_scaling: bool,
    pub drag_enabled: bool,
    pub domain: DomainSpec,
    pub materials: MaterialInputs,
    pub ocean: OceanField,
    pub population: PopulationSpec,
    pub velocity: VelocitySpec,
    pub hydro: HydroSpec,
    pub compare: CompareSpec,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self::example1()
    }
}

impl SimConfig {
    /// 100 power-law floes under a constant ocean `(0.3, 0)`.
    pub fn example1() -> Self {
        Self {
            mode: Mode::Particle,
            run_id: None,
            seed: 1,
            dt: 1e-3,
            t_end: 10.0,
            sample_stride: 10,
            snapshot_stride: 100,
            mean_field_scaling: true,
            drag_enabled: true,
            domain: DomainSpec::default(),
            materials: MaterialInputs::default(),
            ocean: OceanField::constant(floes_core::Vec2::new(0.3, 0.0)),
            population: PopulationSpec::default(),
            velocity: VelocitySpec::default(),
            hydro: HydroSpec::default(),
            compare: CompareSpec::default(),
        }
    }

    /// Lattice floes at rest in the rotational ocean; `full_scale` selects
    /// 100×100 floes on a 50×50 grid instead of 50×50 on 25×25.
    pub fn example2(full_scale: bool) -> Self {
        let (floes, grid) = if full_scale { (100, 50) } else { (50, 25) };
        Self {
            mode: Mode::Compare,
            sample_stride: 100,
            snapshot_stride: 1000,
            ocean: OceanField::Rotational,
            population: PopulationSpec::Lattice { nx: floes, ny: floes, radius: 0.02, thickness: 1.0 },
            velocity: VelocitySpec::Rest,
            hydro: HydroSpec { nx: grid, ny: grid, ..HydroSpec::default() },
            ..Self::example1()
        }
    }

    pub fn from_toml_str(text: &str) -> anyhow::Result<Self> {
        let cfg: SimConfig = toml::from_str(text).context("parsing config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            bail!("dt must be positive, got {}", self.dt);
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            bail!("T must be positive, got {}", self.t_end);
        }
        if ((self.t_end / self.dt).round() * self.dt - self.t_end).abs() > 1e-9 * self.t_end {
            bail!("T = {} is not a whole number of steps of dt = {}", self.t_end, self.dt);
        }
        if self.sample_stride == 0 || self.snapshot_stride == 0 {
            bail!("strides must be at least 1");
        }
        if self.dt * self.sample_stride as f64 > self.t_end * (1.0 + 1e-12) {
            bail!("dt * sample_stride exceeds T");
        }
        self.domain.build()?;
        floes_core::MaterialParams::new(&self.materials, self.dt)?;
        match &self.population {
            PopulationSpec::PowerLaw { n, r_min, r_max, h_min, h_max, .. } => {
                if *n == 0 {
                    bail!("population.n must be at least 1");
                }
                if !(*r_min > 0.0 && r_max > r_min) {
                    bail!("need 0 < r_min < r_max");
                }
                if !(*h_min > 0.0 && h_max >= h_min) {
                    bail!("need 0 < h_min <= h_max");
                }
            }
            PopulationSpec::Lattice { nx, ny, radius, thickness } => {
                if *nx == 0 || *ny == 0 || !(*radius > 0.0) || !(*thickness > 0.0) {
                    bail!("lattice needs nx, ny >= 1 and positive radius and thickness");
                }
            }
            PopulationSpec::Explicit { floes } => {
                if floes.is_empty() {
                    bail!("explicit population is empty");
                }
            }
        }
        if let OceanField::Sampled(grid) = &self.ocean {
            grid.validate()?;
        }
        if self.compare.times.iter().any(|t| !(*t >= 0.0)) {
            bail!("compare.times must be non-negative");
        }
        // times past T are only an error when a comparison will look for them
        if self.mode == Mode::Compare && self.compare.times.iter().any(|&t| t > self.t_end * (1.0 + 1e-12)) {
            bail!("compare.times must lie in [0, T]");
        }
        Ok(())
    }

    /// Output directory name: `run_id` when set, else `<mode>-seed<seed>`.
    pub fn resolved_run_id(&self, fallback: &str) -> String {
        self.run_id.clone().unwrap_or_else(|| format!("{fallback}-seed{}", self.seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid_and_round_trip() {
        for cfg in [SimConfig::example1(), SimConfig::example2(false), SimConfig::example2(true)] {
            cfg.validate().unwrap();
            let text = cfg.to_toml_string().unwrap();
            assert_eq!(SimConfig::from_toml_str(&text).unwrap(), cfg);
        }
    }

    #[test]
    fn defaults_echo_parameter_list() {
        let c = SimConfig::example1();
        let m = c.materials;
        assert_eq!(
            (m.rho_ice, m.restitution, m.friction, m.youngs_modulus, m.poisson_ratio),
            (1.0, 0.15, 0.2, 1e4, 0.7)
        );
        assert_eq!((m.rho_ocean, m.c_vo, m.c_ho, m.draft_ratio), (1.0, 2.0, 4.0, 0.9));
        assert_eq!((c.dt, c.t_end), (1e-3, 10.0));
    }

    #[test]
    fn minimal_file_and_unknown_keys() {
        let c = SimConfig::from_toml_str(
            "seed = 9\nT = 1.0\n[population]\nkind = \"lattice\"\nnx = 2\nny = 2\nradius = 0.1\nthickness = 1.0\n",
        )
        .unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.n_steps(), 1000);
        assert!(SimConfig::from_toml_str("sed = 9").is_err());
        assert!(SimConfig::from_toml_str("[materials]\nrestitution = 1.5").is_err());
        assert!(SimConfig::from_toml_str("dt = 0.3\nT = 1.0").is_err());
    }
}
