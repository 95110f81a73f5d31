use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use floes_cli::artifacts::{output_root, write_json};
use floes_cli::config::SimConfig;
use floes_cli::pipeline::{
    compare_files, example1_pipeline, example2_pipeline, hydro_pipeline, particle_pipeline, RunContext,
};
use floes_cli::validate::{validate_all, ValidateOptions};

/// Sea-ice floe simulator: particle and continuum runs, comparisons and
/// self-validation.
#[derive(Parser)]
#[command(name = "floes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation.
    Sim {
        #[command(subcommand)]
        what: Sim,
    },
    /// Compare binned floes against continuum fields at their common times.
    Compare {
        floes_csv: PathBuf,
        fields_csv: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every property suite; exits nonzero on any failure.
    Validate {
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Subcommand)]
enum Sim {
    /// Particle run from a config file.
    Particle {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Continuum run from a config file.
    Hydro {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Power-law floes drifting in a constant ocean.
    Example1 {
        #[command(flatten)]
        common: Common,
    },
    /// Lattice floes and the continuum model in a swirling ocean.
    Example2 {
        #[command(flatten)]
        common: Common,
        /// 100x100 floes on a 50x50 grid instead of 50x50 on 25x25.
        #[arg(long)]
        full_scale: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Final time.
    #[arg(long = "T")]
    t_end: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Output root; defaults to $FLOES_OUT or ./runs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run directory name.
    #[arg(long)]
    run_id: Option<String>,
}

impl Common {
    fn apply(&self, cfg: &mut SimConfig, overrides: &mut Vec<String>) -> Result<()> {
        if let Some(s) = self.seed {
            cfg.seed = s;
            overrides.push(format!("seed={s}"));
        }
        if let Some(dt) = self.dt {
            cfg.dt = dt;
            overrides.push(format!("dt={dt}"));
        }
        if let Some(t) = self.t_end {
            cfg.t_end = t;
            cfg.compare.times.retain(|&c| c <= t);
            overrides.push(format!("T={t}"));
        }
        if let Some(id) = &self.run_id {
            cfg.run_id = Some(id.clone());
            overrides.push(format!("run_id={id}"));
        }
        set_threads(self.threads)?;
        cfg.validate()
    }

    fn context(&self, command: &str, overrides: Vec<String>) -> RunContext {
        RunContext { root: self.out.clone().unwrap_or_else(output_root), command: command.to_string(), overrides }
    }
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring threads")?;
    }
    Ok(())
}

fn load(path: &Path) -> Result<SimConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SimConfig::from_toml_str(&text).with_context(|| format!("in {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sim { what } => {
            match what {
                Sim::Particle { config, common } => {
                    let mut cfg = load(&config)?;
                    let mut ov = Vec::new();
                    common.apply(&mut cfg, &mut ov)?;
                    let (dir, _) = particle_pipeline(&cfg, &common.context("sim particle", ov))?;
                    println!("{}", dir.display());
                }
                Sim::Hydro { config, common } => {
                    let mut cfg = load(&config)?;
                    let mut ov = Vec::new();
                    common.apply(&mut cfg, &mut ov)?;
                    let dir = hydro_pipeline(&cfg, &common.context("sim hydro", ov))?;
                    println!("{}", dir.display());
                }
                Sim::Example1 { common } => {
                    let mut cfg = SimConfig::example1();
                    cfg.run_id = Some("example1".into());
                    let mut ov = Vec::new();
                    common.apply(&mut cfg, &mut ov)?;
                    let (dir, summary) = example1_pipeline(&cfg, &common.context("sim example1", ov))?;
                    println!("{}", dir.display());
                    println!("{}", serde_json::to_string_pretty(&summary)?);
                }
                Sim::Example2 { common, full_scale } => {
                    let mut cfg = SimConfig::example2(full_scale);
                    cfg.run_id = Some(if full_scale { "example2-full" } else { "example2" }.into());
                    let mut ov = Vec::new();
                    if full_scale {
                        ov.push("full_scale=true".into());
                    }
                    common.apply(&mut cfg, &mut ov)?;
                    let (dir, run) = example2_pipeline(&cfg, &common.context("sim example2", ov))?;
                    println!("{}", dir.display());
                    for r in &run.rows {
                        println!(
                            "t={:<6} rho {:.4e}  u {:.4e}  omega {:.4e}  (empty cells {})",
                            r.time,
                            r.density.relative.unwrap_or(f64::NAN),
                            r.velocity.relative.unwrap_or(f64::NAN),
                            r.spin.relative.unwrap_or(f64::NAN),
                            r.velocity.empty_cells
                        );
                    }
                }
            }
            Ok(true)
        }
        Command::Compare { floes_csv, fields_csv, out } => {
            let rows = compare_files(&floes_csv, &fields_csv, SimConfig::example1().materials.draft_ratio)?;
            match out {
                Some(path) => write_json(&path, &rows)?,
                None => println!("{}", serde_json::to_string_pretty(&rows)?),
            }
            Ok(true)
        }
        Command::Validate { threads } => {
            set_threads(threads)?;
            let reports = validate_all(&ValidateOptions::default());
            let mut ok = true;
            for r in &reports {
                println!("[{}] {:<22} {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                if let Some(v) = &r.violation {
                    println!("       violation: {}", serde_json::to_string(v)?);
                }
                ok &= r.passed;
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
