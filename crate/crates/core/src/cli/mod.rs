//! Experiment drivers behind the `twapert` binary.
//!
//! A run reads a JSON [`ExperimentConfig`], applies command-line overrides,
//! writes CSV tables and SVG charts into the output directory and finishes
//! with `manifest.json`, which echoes the effective configuration and every
//! constant used. Nothing time-dependent is recorded, so identical inputs
//! give identical files.

mod drivers;
pub mod svg;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::engine::{EIGEN_MAX_ORDER, LOCAL_MAX_ORDER};
use crate::error::validation;
use crate::model::{
    load_model, presets, DiscretizationScheme, OpenSystem, DEFAULT_DISCRETE_MODES, DEFAULT_OMEGA_MAX_FACTOR,
};
use crate::{Error, Result};

pub use drivers::{
    run_kernels, run_qubit_decoherence, run_single_mode, run_suppression_scan, run_weak_coupling, Artifacts,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    QubitDecoherence,
    SuppressionScan,
    WeakCoupling,
    SingleMode,
    Kernels,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::QubitDecoherence => "qubit-decoherence",
            Self::SuppressionScan => "suppression-scan",
            Self::WeakCoupling => "weak-coupling",
            Self::SingleMode => "single-mode",
            Self::Kernels => "kernels",
        }
    }

    /// Final time used when the configuration leaves it out.
    pub fn default_t_max(self) -> f64 {
        match self {
            Self::QubitDecoherence | Self::SuppressionScan => 300.0,
            Self::WeakCoupling => 1000.0,
            Self::SingleMode => 250.0,
            Self::Kernels => 500.0,
        }
    }

    pub fn default_orders(self) -> Vec<usize> {
        match self {
            Self::QubitDecoherence => vec![2, 3],
            Self::SuppressionScan | Self::WeakCoupling | Self::SingleMode => vec![2],
            Self::Kernels => vec![0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationConfig {
    pub modes: usize,
    pub omega_max_factor: f64,
    pub scheme: DiscretizationScheme,
}

impl Default for DiscretizationConfig {
    fn default() -> Self {
        Self { modes: DEFAULT_DISCRETE_MODES, omega_max_factor: DEFAULT_OMEGA_MAX_FACTOR, scheme: DiscretizationScheme::EqualSpacing }
    }
}

/// Contents of a `--config` file. Everything except `experiment` has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Model file, relative to the config file. The experiment's preset when absent.
    #[serde(default)]
    pub model: Option<PathBuf>,
    /// Final time in fs.
    #[serde(default)]
    pub t_max: Option<f64>,
    /// Quadrature grid points including t = 0. Defaults by order: 400, or 200 for order 3.
    #[serde(default)]
    pub grid_points: Option<usize>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Probe frequencies (cm⁻¹) for mode entropies.
    #[serde(default = "default_probes")]
    pub probe_frequencies: Vec<f64>,
    #[serde(default)]
    pub orders: Option<Vec<usize>>,
    #[serde(default)]
    pub oracle: bool,
    /// Fock levels per mode for the oracle. Chosen automatically when absent.
    #[serde(default)]
    pub fock: Option<Vec<usize>>,
    /// Fock cutoff of mode density matrices.
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Grid steps between entropy samples.
    #[serde(default = "default_entropy_stride")]
    pub entropy_stride: usize,
    /// Fraction of λ kept by each suppressed bath.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Donor-acceptor couplings (cm⁻¹) scanned by the single-mode experiment.
    #[serde(default = "default_tunnelings")]
    pub tunnelings: Vec<f64>,
    #[serde(default)]
    pub discretization: DiscretizationConfig,
    #[serde(default)]
    pub dump_pathways: bool,
}

fn default_probes() -> Vec<f64> {
    vec![25.0, 50.0, 100.0, 200.0, 400.0]
}
fn default_n_max() -> usize {
    crate::envmode::DEFAULT_N_MAX
}
fn default_entropy_stride() -> usize {
    20
}
fn default_alpha() -> f64 {
    2.0 / 3.0
}
fn default_tunnelings() -> Vec<f64> {
    vec![10.0, 50.0, 100.0]
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            model: None,
            t_max: None,
            grid_points: None,
            output_dir: None,
            probe_frequencies: default_probes(),
            orders: None,
            oracle: false,
            fock: None,
            n_max: default_n_max(),
            entropy_stride: default_entropy_stride(),
            alpha: default_alpha(),
            tunnelings: default_tunnelings(),
            discretization: DiscretizationConfig::default(),
            dump_pathways: false,
        }
    }

    /// Parses a config file; a relative `model` path is resolved against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Validation(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: Self = serde_json::from_str(&text)?;
        if let Some(m) = &cfg.model {
            if m.is_relative() {
                cfg.model = Some(path.parent().unwrap_or(Path::new(".")).join(m));
            }
        }
        Ok(cfg)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max.unwrap_or_else(|| self.experiment.default_t_max())
    }

    pub fn orders(&self) -> Vec<usize> {
        self.orders.clone().unwrap_or_else(|| self.experiment.default_orders())
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("out").join(self.experiment.name()))
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(m) = &self.model {
            if !m.is_file() {
                return validation(format!("model file {} does not exist", m.display()));
            }
        }
        let t = self.t_max();
        if !(t > 0.0 && t.is_finite()) {
            return validation("t_max must be positive");
        }
        if matches!(self.grid_points, Some(g) if g < 2) {
            return validation("grid_points must be at least 2");
        }
        let orders = self.orders();
        if orders.is_empty() {
            return validation("at least one order is required");
        }
        let cap = match self.experiment {
            Experiment::WeakCoupling | Experiment::SingleMode => EIGEN_MAX_ORDER,
            _ => LOCAL_MAX_ORDER,
        };
        if let Some(&o) = orders.iter().find(|&&o| o > cap) {
            return validation(format!("order {o} exceeds the cap {cap} of the {} experiment", self.experiment.name()));
        }
        if self.entropy_stride == 0 {
            return validation("entropy_stride must be positive");
        }
        if self.probe_frequencies.iter().any(|w| !(*w > 0.0)) {
            return validation("probe frequencies must be positive");
        }
        if self.discretization.modes == 0 || !(self.discretization.omega_max_factor > 0.0) {
            return validation("discretization needs at least one mode and a positive omega_max_factor");
        }
        Ok(())
    }

    /// The configured model file or the experiment's preset.
    pub fn system(&self) -> Result<OpenSystem> {
        if let Some(m) = &self.model {
            return load_model(m);
        }
        match self.experiment {
            Experiment::QubitDecoherence | Experiment::SuppressionScan | Experiment::Kernels => presets::qubit_decoherence(),
            Experiment::WeakCoupling => presets::weak_coupling(),
            Experiment::SingleMode => presets::single_mode(self.tunnelings.first().copied().unwrap_or(10.0)),
        }
    }
}

/// Command line of the `twapert` binary.
#[derive(Debug, Parser)]
#[command(name = "twapert", version, about = "Truncated-Wigner perturbation theory for spin-boson models")]
pub struct Args {
    pub experiment: Experiment,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated orders, e.g. 0,1,2,3.
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<usize>>,
    /// Quadrature grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Also run the dense exact propagator.
    #[arg(long)]
    pub oracle: bool,
    /// Write the enumerated Liouville pathways to pathways.txt.
    #[arg(long)]
    pub dump_pathways: bool,
}

/// Loads the config, applies overrides and runs. Overrides are listed in the manifest.
pub fn run(args: &Args) -> Result<Artifacts> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if cfg.experiment != args.experiment {
        return validation(format!(
            "config is for {} but {} was requested",
            cfg.experiment.name(),
            args.experiment.name()
        ));
    }
    let mut overrides = BTreeMap::new();
    if let Some(o) = &args.out {
        cfg.output_dir = Some(o.clone());
        overrides.insert("output_dir".to_string(), o.display().to_string());
    }
    if let Some(o) = &args.orders {
        cfg.orders = Some(o.clone());
        overrides.insert("orders".to_string(), format!("{o:?}"));
    }
    if let Some(g) = args.grid {
        cfg.grid_points = Some(g);
        overrides.insert("grid_points".to_string(), g.to_string());
    }
    if args.oracle {
        cfg.oracle = true;
        overrides.insert("oracle".to_string(), "true".to_string());
    }
    if args.dump_pathways {
        cfg.dump_pathways = true;
        overrides.insert("dump_pathways".to_string(), "true".to_string());
    }
    run_config(&cfg, overrides)
}

/// Runs an already assembled configuration.
pub fn run_config(cfg: &ExperimentConfig, overrides: BTreeMap<String, String>) -> Result<Artifacts> {
    cfg.validate()?;
    let mut art = Artifacts::new(cfg.output_dir(), overrides)?;
    match cfg.experiment {
        Experiment::QubitDecoherence => run_qubit_decoherence(cfg, &mut art)?,
        Experiment::SuppressionScan => run_suppression_scan(cfg, &mut art)?,
        Experiment::WeakCoupling => run_weak_coupling(cfg, &mut art)?,
        Experiment::SingleMode => run_single_mode(cfg, &mut art)?,
        Experiment::Kernels => run_kernels(cfg, &mut art)?,
    }
    art.finish(cfg)?;
    Ok(art)
}
